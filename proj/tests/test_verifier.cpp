#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "diffcover/verifier.hpp"

using namespace diffcover;

namespace {

std::string build_trace(const RunConfig& config) {
  auto inst = make_instance(config.instance_config());
  MeasureBudget budget = MeasureBudget::from_rule(config.budget_rule);
  std::string out;
  if (inst->precompact()) {
    Case1Engine engine(*inst, budget, config.thin);
    out += dump_line(trace_header(config, *inst, &engine)) + "\n";
    for (std::uint64_t i = 0; i < config.steps; ++i)
      out += dump_line(case1_record(*inst, engine.step())) + "\n";
  } else {
    Case2Engine engine(*inst, config.thin);
    out += dump_line(trace_header(config, *inst, nullptr)) + "\n";
    for (std::uint64_t i = 0; i < config.steps; ++i)
      out += dump_line(case2_record(*inst, engine.step())) + "\n";
  }
  return out;
}

std::vector<std::string> to_lines(const std::string& raw) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < raw.size()) {
    std::size_t end = raw.find('\n', start);
    if (end == std::string::npos) end = raw.size();
    if (end > start) lines.push_back(raw.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

RunConfig z2_config(std::uint64_t steps, bool thin = false) {
  RunConfig c;
  c.instance = "z-in-zp";
  c.p = 2;
  c.steps = steps;
  c.thin = thin;
  return c;
}

}  // namespace

TEST_CASE("traces parse back to the records that produced them") {
  RunConfig config = z2_config(8);
  auto lines = to_lines(build_trace(config));
  ParsedTrace trace = parse_trace(lines);
  CHECK(trace.case_no == 1);
  CHECK(trace.config.instance == "z-in-zp");
  CHECK(trace.config.steps == 8);
  CHECK(trace.case1_steps.size() == 8);
  CHECK(*trace.u0 == CellSize::ladder(5));
  CHECK(*trace.init_measure == make_rat(1, 32));
  CHECK(trace.case1_steps[0].x == trace.instance->parse("2"));
}

TEST_CASE("construct output is byte-identical across runs") {
  RunConfig config = z2_config(12);
  CHECK(build_trace(config) == build_trace(config));
  RunConfig qc;
  qc.instance = "q-usual";
  qc.steps = 20;
  CHECK(build_trace(qc) == build_trace(qc));
}

TEST_CASE("verify_trace passes honest case-1 and case-2 traces") {
  for (const RunConfig& config :
       {z2_config(10), z2_config(6, true), [] {
          RunConfig c;
          c.instance = "golden-rotation";
          c.steps = 6;
          return c;
        }()}) {
    auto lines = to_lines(build_trace(config));
    Report report = verify_trace(lines);
    if (!report.all_pass()) {
      std::ostringstream os;
      report.print_table(os);
      FAIL_CHECK(os.str());
    }
  }
  for (const char* name : {"q-usual", "z-discrete", "f2-discrete"}) {
    RunConfig c;
    c.instance = name;
    c.steps = 25;
    auto lines = to_lines(build_trace(c));
    Report report = verify_trace(lines);
    CHECK(report.all_pass());
  }
}

TEST_CASE("certificates serialize with verdicts and witnesses") {
  auto lines = to_lines(build_trace(z2_config(5)));
  Report report = verify_trace(lines);
  std::ostringstream jsonl;
  report.write_jsonl(jsonl);
  std::size_t rows = 0;
  std::istringstream in(jsonl.str());
  std::string line;
  while (std::getline(in, line)) {
    auto j = OrderedJson::parse(line);
    CHECK(j.at("verdict") == "pass");
    CHECK(j.contains("inputs_digest"));
    ++rows;
  }
  CHECK(rows == report.certificates().size());
  std::ostringstream table;
  report.print_table(table);
  CHECK(table.str().find("PASS") != std::string::npos);
}

TEST_CASE("every built-in mutation is rejected with a stage-naming failure") {
  const std::string honest = build_trace(z2_config(10));
  REQUIRE(verify_trace(to_lines(honest)).all_pass());

  for (MutationKind kind : all_mutations()) {
    CAPTURE(mutation_name(kind));
    const std::string mutated = apply_mutation(honest, kind);
    CHECK(mutated != honest);
    bool rejected = false;
    std::uint64_t named_stage = 0;
    // The read path enforces framing; structural damage surfaces as a
    // TraceFormatError, semantic damage as failing certificates.
    try {
      if (!mutated.empty() && mutated.back() != '\n')
        throw TraceFormatError(0, "trace does not end with a newline (truncated?)");
      auto lines = to_lines(mutated);
      Report report = verify_trace(lines);
      for (const auto& cert : report.certificates()) {
        if (!cert.pass) {
          rejected = true;
          named_stage = cert.stage;
          CHECK(!cert.witness.is_null());
        }
      }
    } catch (const TraceFormatError& e) {
      rejected = true;
      named_stage = e.line;
    }
    CHECK(rejected);
    (void)named_stage;
  }
}

TEST_CASE("header digest mismatch is reported as a failing header certificate") {
  const std::string honest = build_trace(z2_config(6));
  const std::string mutated = apply_mutation(honest, MutationKind::HeaderTamper);
  Report report = verify_trace(to_lines(mutated));
  bool header_failed = false;
  for (const auto& cert : report.certificates())
    if (cert.check == "header" && !cert.pass) header_failed = true;
  CHECK(header_failed);
}

TEST_CASE("dropped z entry is caught semantically, not only by replay") {
  const std::string honest = build_trace(z2_config(10));
  const std::string mutated = apply_mutation(honest, MutationKind::DropZEntry);
  Report report = verify_trace(to_lines(mutated));
  bool z_complete_failed = false;
  for (const auto& cert : report.certificates())
    if (cert.check == "z-completeness" && !cert.pass) z_complete_failed = true;
  CHECK(z_complete_failed);
}

TEST_CASE("size perturbation violates the budget rate") {
  const std::string honest = build_trace(z2_config(10));
  const std::string mutated = apply_mutation(honest, MutationKind::SizePerturb);
  Report report = verify_trace(to_lines(mutated));
  bool semantic_failure = false;
  for (const auto& cert : report.certificates())
    if (!cert.pass && cert.check != "replay") semantic_failure = true;
  CHECK(semantic_failure);
}

TEST_CASE("malformed traces raise structured errors, never crashes") {
  CHECK_THROWS_AS(parse_trace({}), TraceFormatError);
  CHECK_THROWS_AS(parse_trace({"not json"}), TraceFormatError);
  CHECK_THROWS_AS(parse_trace({"[1,2,3]"}), TraceFormatError);
  CHECK_THROWS_AS(parse_trace({R"({"format":99})"}), TraceFormatError);
  auto lines = to_lines(build_trace(z2_config(4)));
  lines.pop_back();
  CHECK_THROWS_AS(parse_trace(lines), TraceFormatError);
}

TEST_CASE("thin certificate stabilizes on thin runs and grows on plain ones") {
  auto zd = make_instance({"z-discrete", std::nullopt});

  Case2Engine thin_small = run_case2(*zd, 60, true, {});
  Case2Engine thin_big = run_case2(*zd, 120, true, {});
  Certificate stable =
      check_thin(*zd, thin_small.points(), thin_big.points(), 12);
  CHECK(stable.pass);

  Case2Engine plain_small = run_case2(*zd, 60, false, {});
  Case2Engine plain_big = run_case2(*zd, 120, false, {});
  Certificate growing =
      check_thin(*zd, plain_small.points(), plain_big.points(), 12);
  CHECK(!growing.pass);
  CHECK(growing.witness.at("count_n2").get<std::uint64_t>() >
        growing.witness.at("count_n1").get<std::uint64_t>());
}
