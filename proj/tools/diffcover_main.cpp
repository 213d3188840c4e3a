#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "diffcover/trace.hpp"
#include "diffcover/verifier.hpp"

namespace {

using namespace diffcover;

constexpr std::uint64_t kMaxSteps = 10000;

struct ConstructArgs {
  RunConfig config;
  std::string out_path;
  std::string config_path;
};

void apply_config_file(const std::string& path, RunConfig& config, std::string& out_path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    throw ConfigError("config file is not a JSON object: " + path);
  if (j.contains("instance")) config.instance = j.at("instance").get<std::string>();
  if (j.contains("p")) config.p = j.at("p").get<unsigned>();
  if (j.contains("steps")) config.steps = j.at("steps").get<std::uint64_t>();
  if (j.contains("thin")) config.thin = j.at("thin").get<bool>();
  if (j.contains("budget")) config.budget_rule = j.at("budget").get<std::string>();
  if (j.contains("out")) out_path = j.at("out").get<std::string>();
}

int cmd_construct(const ConstructArgs& args) {
  RunConfig config = args.config;
  if (config.steps > kMaxSteps)
    throw ConfigError("steps capped at " + std::to_string(kMaxSteps));
  auto inst = make_instance(config.instance_config());
  MeasureBudget budget = MeasureBudget::from_rule(config.budget_rule);

  std::ofstream out(args.out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot open output file: " + args.out_path);

  if (inst->precompact()) {
    Case1Engine engine(*inst, budget, config.thin);
    out << dump_line(trace_header(config, *inst, &engine)) << "\n";
    for (std::uint64_t i = 0; i < config.steps; ++i)
      out << dump_line(case1_record(*inst, engine.step())) << "\n";
    std::cout << "case 1 construction: " << config.instance << ", " << config.steps
              << " steps\n";
    std::cout << "  |A| = " << engine.points().size() << "\n";
    std::cout << "  covered prefix = " << engine.least_uncovered_index() << "\n";
    std::cout << "  z entries = " << engine.zlist().size() << "\n";
    std::cout << "  exact measure total = " << rat_str(engine.cumulative_measure()) << "\n";
  } else {
    if (!MeasureBudget::from_rule(config.budget_rule).certified())
      throw ConfigError("budget rule " + config.budget_rule + " fails its certificate");
    Case2Engine engine(*inst, config.thin);
    out << dump_line(trace_header(config, *inst, nullptr)) << "\n";
    for (std::uint64_t i = 0; i < config.steps; ++i)
      out << dump_line(case2_record(*inst, engine.step())) << "\n";
    std::cout << "case 2 construction: " << config.instance << ", " << config.steps
              << " blocks\n";
    std::cout << "  |A| = " << engine.points().size() << "\n";
  }
  std::cout << "wrote " << args.out_path << "\n";
  return 0;
}

int cmd_verify(const std::string& path, const std::vector<std::string>& checks,
               const std::string& baseline_path, const std::string& certs_path,
               std::uint64_t thin_first_k) {
  std::vector<std::string> lines = read_trace_lines(path);
  Report report = verify_trace(lines);

  const bool want_thin =
      std::find(checks.begin(), checks.end(), "thin") != checks.end();
  if (want_thin) {
    if (baseline_path.empty())
      throw ConfigError("--checks thin requires --baseline <earlier-stage trace>");
    std::vector<std::string> base_lines = read_trace_lines(baseline_path);
    ParsedTrace full = parse_trace(lines);
    ParsedTrace base = parse_trace(base_lines);
    if (base.config.instance != full.config.instance || base.config.thin != full.config.thin)
      throw ConfigError("baseline trace configuration does not match");
    if (2 * base.config.steps > full.config.steps)
      throw ConfigError("thin check needs the baseline at no more than half the steps");
    std::vector<Element> pts_base = base.case_no == 1
                                        ? view_of_trace(base).points()
                                        : view_of_trace_case2(base).points();
    std::vector<Element> pts_full = full.case_no == 1
                                        ? view_of_trace(full).points()
                                        : view_of_trace_case2(full).points();
    report.add(check_thin(*full.instance, pts_base, pts_full, thin_first_k));
  }

  if (!certs_path.empty()) {
    std::ofstream certs(certs_path, std::ios::binary | std::ios::trunc);
    if (!certs) throw ConfigError("cannot open certificate output: " + certs_path);
    report.write_jsonl(certs);
  }
  report.print_table(std::cout);
  return report.all_pass() ? 0 : 1;
}

int cmd_oracle_diff(const RunConfig& config, std::uint64_t tamper_stage) {
  if (config.steps > 200) throw ConfigError("oracle-diff is capped at 200 steps");
  auto inst = make_instance(config.instance_config());
  if (!inst->precompact())
    throw ConfigError("oracle-diff compares case-1 coverage bookkeeping; use a precompact instance");
  MeasureBudget budget = MeasureBudget::from_rule(config.budget_rule);
  Case1Engine engine(*inst, budget, config.thin);
  for (std::uint64_t n = 1; n <= config.steps; ++n) {
    engine.step();
    ElementSet oracle = brute_difference_set(*inst, engine.points());
    ElementSet book = engine.difference_set();
    if (n == tamper_stage) book.insert(inst->element_at(Index(999983)));  // debug hook
    if (book.size() != oracle.size()) {
      std::cout << "divergence at stage " << n << ": bookkeeping " << book.size()
                << " vs oracle " << oracle.size() << "\n";
      return 1;
    }
    for (const auto& d : oracle) {
      if (!book.count(d)) {
        std::cout << "divergence at stage " << n << ": oracle element "
                  << inst->format(d) << " missing from bookkeeping\n";
        return 1;
      }
    }
  }
  std::cout << "bookkeeping matches the brute-force oracle at every stage 1.."
            << config.steps << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"difference-set covering constructions with certificate verification"};
  app.require_subcommand(1);

  ConstructArgs cargs;
  auto* construct = app.add_subcommand("construct", "run a construction and write a JSONL trace");
  construct->add_option("--instance", cargs.config.instance,
                        "z-in-zp | golden-rotation | q-usual | z-discrete | f2-discrete");
  construct->add_option("--p", cargs.config.p, "prime for z-in-zp (2..97)");
  construct->add_option("--steps", cargs.config.steps, "number of steps / blocks");
  construct->add_flag("--thin", cargs.config.thin, "thin mode");
  construct->add_option("--budget", cargs.config.budget_rule, "budget rule id")
      ->default_val("geom-1/16");
  construct->add_option("--out", cargs.out_path, "output trace path");
  construct->add_option("--config", cargs.config_path, "JSON config file mirroring the flags");

  std::string verify_path, baseline_path, certs_path;
  std::vector<std::string> checks;
  std::uint64_t thin_first_k = 30;
  auto* verify = app.add_subcommand("verify", "re-check a trace with independent predicates");
  verify->add_option("trace", verify_path, "trace file")->required();
  verify->add_option("--checks", checks,
                     "extra checks (thin); core checks always run")
      ->delimiter(',');
  verify->add_option("--baseline", baseline_path, "earlier-stage trace for the thin check");
  verify->add_option("--thin-first-k", thin_first_k,
                     "how many leading non-identity elements the thin check covers");
  verify->add_option("--certs", certs_path, "write certificates as JSONL to this path");

  RunConfig oargs;
  std::uint64_t tamper_stage = 0;
  auto* oracle = app.add_subcommand("oracle-diff",
                                    "compare coverage bookkeeping against the brute-force oracle");
  oracle->add_option("--instance", oargs.instance, "precompact instance name");
  oracle->add_option("--p", oargs.p, "prime for z-in-zp");
  oracle->add_option("--steps", oargs.steps, "stages to compare (<= 200)");
  oracle->add_flag("--thin", oargs.thin, "thin mode");
  oracle->add_option("--tamper-stage", tamper_stage,
                     "debug hook: corrupt the comparison at this stage");

  try {
    app.parse(argc, argv);
    if (construct->parsed()) {
      if (!cargs.config_path.empty()) {
        // Config file fills in whatever the flags did not set.
        RunConfig base;
        std::string base_out;
        apply_config_file(cargs.config_path, base, base_out);
        if (construct->count("--instance") == 0) cargs.config.instance = base.instance;
        if (construct->count("--p") == 0) cargs.config.p = base.p;
        if (construct->count("--steps") == 0) cargs.config.steps = base.steps;
        if (construct->count("--thin") == 0) cargs.config.thin = base.thin;
        if (construct->count("--budget") == 0) cargs.config.budget_rule = base.budget_rule;
        if (construct->count("--out") == 0 && !base_out.empty()) cargs.out_path = base_out;
      }
      if (cargs.config.instance.empty()) throw diffcover::ConfigError("--instance is required");
      if (cargs.out_path.empty()) throw diffcover::ConfigError("--out is required");
      return cmd_construct(cargs);
    }
    if (verify->parsed())
      return cmd_verify(verify_path, checks, baseline_path, certs_path, thin_first_k);
    if (oracle->parsed()) {
      if (oargs.instance.empty()) throw diffcover::ConfigError("--instance is required");
      return cmd_oracle_diff(oargs, tamper_stage);
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  } catch (const diffcover::TraceFormatError& e) {
    std::cerr << "FAIL trace-structure stage " << e.line << ": " << e.what() << "\n";
    return 2;
  } catch (const diffcover::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const diffcover::InvariantViolation& e) {
    std::cerr << "FAIL " << e.check << " stage " << e.stage << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
