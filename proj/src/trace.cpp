#include "diffcover/trace.hpp"

#include <fstream>

namespace diffcover {

int case_number(const Instance& inst) { return inst.precompact() ? 1 : 2; }

std::string config_digest(const RunConfig& config, int case_no) {
  std::string canon = "format=" + std::to_string(kTraceFormat);
  canon += ";instance=" + config.instance;
  canon += ";p=" + (config.p ? std::to_string(*config.p) : std::string("none"));
  canon += ";case=" + std::to_string(case_no);
  canon += ";budget=" + config.budget_rule;
  canon += ";thin=" + std::string(config.thin ? "1" : "0");
  canon += ";enum=";  // enumeration is determined by the instance
  canon += ";steps=" + std::to_string(config.steps);
  canon += ";random_free=" + std::string(config.random_free ? "1" : "0");
  return fnv1a_hex(canon);
}

OrderedJson cell_json(const Instance& inst, const Element& center, const CellSize& size) {
  OrderedJson j;
  j["center"] = inst.format(center);
  j["size"] = size.str();
  return j;
}

OrderedJson trace_header(const RunConfig& config, const Instance& inst,
                         const Case1Engine* init) {
  const int case_no = case_number(inst);
  OrderedJson j;
  j["format"] = kTraceFormat;
  j["instance"] = config.instance;
  if (config.p) j["p"] = *config.p;
  j["case"] = case_no;
  j["budget"] = config.budget_rule;
  j["thin"] = config.thin;
  j["enum"] = inst.descriptor().enumeration;
  j["steps"] = config.steps;
  j["random_free"] = config.random_free;
  j["config_digest"] = config_digest(config, case_no);
  if (case_no == 1) {
    if (init == nullptr) throw ContractViolation("case 1 header needs the initialized engine");
    OrderedJson init_j;
    init_j["x0"] = inst.format(inst.identity());
    init_j["U0"] = cell_json(inst, inst.identity(), init->init_size());
    init_j["measure"] = rat_str(init->init_measure());
    j["init"] = std::move(init_j);
  } else {
    const EscapeWitness& w = inst.escape_witness();
    OrderedJson wj;
    wj["U"] = w.u.str();
    wj["V"] = w.v.str();
    j["witness"] = std::move(wj);
  }
  return j;
}

OrderedJson case1_record(const Instance& inst, const Case1StepRecord& rec) {
  OrderedJson j;
  j["step"] = rec.step;
  j["case"] = 1;
  j["target_index"] = rec.target_index;
  j["target"] = inst.format(rec.target);
  j["x"] = inst.format(rec.x);
  j["y"] = inst.format(rec.y);
  j["U"] = cell_json(inst, rec.x, rec.u);
  OrderedJson zs = OrderedJson::array();
  for (const auto& z : rec.z_new) {
    OrderedJson zj;
    zj["z"] = inst.format(z.z);
    zj["V"] = cell_json(inst, z.z, z.v);
    zs.push_back(std::move(zj));
  }
  j["z_new"] = std::move(zs);
  OrderedJson measures;
  measures["step"] = rat_str(rec.step_measure);
  measures["cumulative"] = rat_str(rec.cumulative_measure);
  j["measures"] = std::move(measures);
  return j;
}

OrderedJson case2_record(const Instance& inst, const Case2StepRecord& rec) {
  OrderedJson j;
  j["step"] = rec.step;
  j["case"] = 2;
  j["g"] = inst.format(rec.g);
  j["x"] = inst.format(rec.x);
  j["gx"] = inst.format(rec.gx);
  return j;
}

std::string dump_line(const OrderedJson& j) { return j.dump(); }

namespace {

const OrderedJson& field(const OrderedJson& j, const char* key, std::size_t line) {
  auto it = j.find(key);
  if (it == j.end())
    throw TraceFormatError(line, std::string("missing field \"") + key + "\"");
  return *it;
}

std::string str_field(const OrderedJson& j, const char* key, std::size_t line) {
  const auto& v = field(j, key, line);
  if (!v.is_string()) throw TraceFormatError(line, std::string(key) + " must be a string");
  return v.get<std::string>();
}

std::uint64_t uint_field(const OrderedJson& j, const char* key, std::size_t line) {
  const auto& v = field(j, key, line);
  if (!v.is_number_unsigned())
    throw TraceFormatError(line, std::string(key) + " must be a nonnegative integer");
  return v.get<std::uint64_t>();
}

OrderedJson parse_json_line(const std::string& line, std::size_t line_no) {
  OrderedJson j = OrderedJson::parse(line, nullptr, false);
  if (j.is_discarded()) throw TraceFormatError(line_no, "not valid JSON");
  if (!j.is_object()) throw TraceFormatError(line_no, "record is not a JSON object");
  return j;
}

Element parse_element(const Instance& inst, const std::string& s, std::size_t line) {
  try {
    return inst.parse(s);
  } catch (const ConfigError& e) {
    throw TraceFormatError(line, std::string("bad element: ") + e.what());
  }
}

CellSize parse_size(const std::string& s, std::size_t line) {
  try {
    return CellSize::parse(s);
  } catch (const ConfigError& e) {
    throw TraceFormatError(line, std::string("bad cell size: ") + e.what());
  }
}

Rat parse_measure(const std::string& s, std::size_t line) {
  try {
    return rat_parse(s);
  } catch (const ConfigError& e) {
    throw TraceFormatError(line, std::string("bad measure: ") + e.what());
  }
}

}  // namespace

ParsedTrace parse_trace(const std::vector<std::string>& lines) {
  if (lines.empty()) throw TraceFormatError(0, "empty trace");
  ParsedTrace out;
  out.header = parse_json_line(lines[0], 1);
  const auto& h = out.header;

  const auto format = uint_field(h, "format", 1);
  if (format != static_cast<std::uint64_t>(kTraceFormat))
    throw TraceFormatError(1, "unsupported format version " + std::to_string(format));
  out.config.instance = str_field(h, "instance", 1);
  if (h.contains("p")) {
    const auto& pv = h.at("p");
    if (!pv.is_number_unsigned()) throw TraceFormatError(1, "p must be a nonnegative integer");
    out.config.p = pv.get<unsigned>();
  }
  const auto case_no = uint_field(h, "case", 1);
  if (case_no != 1 && case_no != 2) throw TraceFormatError(1, "case must be 1 or 2");
  out.case_no = static_cast<int>(case_no);
  out.config.budget_rule = str_field(h, "budget", 1);
  const auto& thin = field(h, "thin", 1);
  if (!thin.is_boolean()) throw TraceFormatError(1, "thin must be a boolean");
  out.config.thin = thin.get<bool>();
  out.config.steps = uint_field(h, "steps", 1);
  const auto& rf = field(h, "random_free", 1);
  if (!rf.is_boolean()) throw TraceFormatError(1, "random_free must be a boolean");
  out.config.random_free = rf.get<bool>();
  (void)str_field(h, "config_digest", 1);
  (void)str_field(h, "enum", 1);

  out.instance = make_instance(out.config.instance_config());
  const Instance& inst = *out.instance;
  if (case_number(inst) != out.case_no)
    throw TraceFormatError(1, "declared case does not match the instance");

  if (out.case_no == 1) {
    const auto& init = field(h, "init", 1);
    if (!init.is_object()) throw TraceFormatError(1, "init must be an object");
    const auto& u0j = field(init, "U0", 1);
    out.u0 = parse_size(str_field(u0j, "size", 1), 1);
    out.init_measure = parse_measure(str_field(init, "measure", 1), 1);
    Element x0 = parse_element(inst, str_field(init, "x0", 1), 1);
    if (!(x0 == inst.identity())) throw TraceFormatError(1, "init x0 is not the identity");
  }

  for (std::size_t li = 1; li < lines.size(); ++li) {
    const std::size_t line_no = li + 1;
    OrderedJson j = parse_json_line(lines[li], line_no);
    const std::uint64_t step = uint_field(j, "step", line_no);
    if (step != li)
      throw TraceFormatError(line_no, "record out of order: expected step " +
                                          std::to_string(li) + ", found " + std::to_string(step));
    const auto rec_case = uint_field(j, "case", line_no);
    if (rec_case != static_cast<std::uint64_t>(out.case_no))
      throw TraceFormatError(line_no, "record case does not match header");
    if (out.case_no == 1) {
      Case1StepRecord rec;
      rec.step = step;
      rec.target_index = uint_field(j, "target_index", line_no);
      rec.target = parse_element(inst, str_field(j, "target", line_no), line_no);
      rec.x = parse_element(inst, str_field(j, "x", line_no), line_no);
      rec.y = parse_element(inst, str_field(j, "y", line_no), line_no);
      const auto& uj = field(j, "U", line_no);
      Element ucenter = parse_element(inst, str_field(uj, "center", line_no), line_no);
      if (!(ucenter == rec.x))
        throw TraceFormatError(line_no, "U cell center differs from x");
      rec.u = parse_size(str_field(uj, "size", line_no), line_no);
      const auto& zs = field(j, "z_new", line_no);
      if (!zs.is_array()) throw TraceFormatError(line_no, "z_new must be an array");
      for (const auto& zj : zs) {
        if (!zj.is_object()) throw TraceFormatError(line_no, "z_new entry is not an object");
        ZEntry entry;
        entry.z = parse_element(inst, str_field(zj, "z", line_no), line_no);
        const auto& vj = field(zj, "V", line_no);
        Element vcenter = parse_element(inst, str_field(vj, "center", line_no), line_no);
        if (!(vcenter == entry.z))
          throw TraceFormatError(line_no, "V cell center differs from z");
        entry.v = parse_size(str_field(vj, "size", line_no), line_no);
        rec.z_new.push_back(std::move(entry));
      }
      const auto& mj = field(j, "measures", line_no);
      rec.step_measure = parse_measure(str_field(mj, "step", line_no), line_no);
      rec.cumulative_measure = parse_measure(str_field(mj, "cumulative", line_no), line_no);
      out.case1_steps.push_back(std::move(rec));
    } else {
      Case2StepRecord rec;
      rec.step = step;
      rec.g = parse_element(inst, str_field(j, "g", line_no), line_no);
      rec.x = parse_element(inst, str_field(j, "x", line_no), line_no);
      rec.gx = parse_element(inst, str_field(j, "gx", line_no), line_no);
      out.case2_steps.push_back(std::move(rec));
    }
  }

  const std::size_t records = lines.size() - 1;
  if (records != out.config.steps)
    throw TraceFormatError(lines.size(),
                           "header declares " + std::to_string(out.config.steps) +
                               " steps but the trace carries " + std::to_string(records));
  return out;
}

std::vector<std::string> read_trace_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw TraceFormatError(0, "cannot open " + path);
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (data.empty()) throw TraceFormatError(0, "empty trace file");
  if (data.back() != '\n')
    throw TraceFormatError(0, "trace does not end with a newline (truncated?)");
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < data.size()) {
    const std::size_t end = data.find('\n', start);
    const std::string line = data.substr(start, end - start);
    if (!line.empty()) lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

}  // namespace diffcover
