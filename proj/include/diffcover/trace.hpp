#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "diffcover/case1.hpp"
#include "diffcover/case2.hpp"
#include "diffcover/instance.hpp"

namespace diffcover {

using OrderedJson = nlohmann::ordered_json;

struct RunConfig {
  std::string instance;
  std::optional<unsigned> p;
  std::uint64_t steps = 0;
  bool thin = false;
  std::string budget_rule = "geom-1/16";
  bool random_free = true;  // recorded for provenance; always true

  InstanceConfig instance_config() const { return InstanceConfig{instance, p}; }
};

/// Format version of the JSONL trace schema.
inline constexpr int kTraceFormat = 1;

int case_number(const Instance& inst);

/// Digest of every field that determines the run; byte-identical runs must
/// agree on it and the verifier recomputes it against the header.
std::string config_digest(const RunConfig& config, int case_no);

OrderedJson cell_json(const Instance& inst, const Element& center, const CellSize& size);

OrderedJson trace_header(const RunConfig& config, const Instance& inst,
                         const Case1Engine* init);  // init non-null for case 1
OrderedJson case1_record(const Instance& inst, const Case1StepRecord& rec);
OrderedJson case2_record(const Instance& inst, const Case2StepRecord& rec);

/// Compact single-line serialization (the JSONL row format).
std::string dump_line(const OrderedJson& j);

/// Malformed trace input; `line` is 1-based, 0 for file-level problems.
struct TraceFormatError : std::runtime_error {
  TraceFormatError(std::size_t line_, const std::string& msg)
      : std::runtime_error("trace line " + std::to_string(line_) + ": " + msg),
        line(line_) {}
  std::size_t line;
};

struct ParsedTrace {
  RunConfig config;
  int case_no = 0;
  OrderedJson header;
  std::unique_ptr<Instance> instance;

  // Case 1 payload.
  std::optional<CellSize> u0;
  std::optional<Rat> init_measure;
  std::vector<Case1StepRecord> case1_steps;

  // Case 2 payload.
  std::vector<Case2StepRecord> case2_steps;
};

/// Parse a whole trace; throws TraceFormatError on malformed input and
/// ConfigError for invalid configurations in the header.
ParsedTrace parse_trace(const std::vector<std::string>& lines);

/// Read non-empty lines; throws TraceFormatError if the file cannot be read
/// or ends without a newline (truncation guard).
std::vector<std::string> read_trace_lines(const std::string& path);

}  // namespace diffcover
