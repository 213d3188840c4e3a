#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "diffcover/trace.hpp"

namespace diffcover {

/// Replayable record of one invariant check: exact values in, verdict out.
/// A failing certificate always carries a concrete witness.
struct Certificate {
  std::string check;
  std::uint64_t stage = 0;
  std::string inputs_digest;
  bool pass = false;
  OrderedJson values;
  OrderedJson witness;

  OrderedJson json() const;
};

class Report {
 public:
  void add(Certificate cert) { certs_.push_back(std::move(cert)); }
  const std::vector<Certificate>& certificates() const { return certs_; }
  bool all_pass() const;
  void print_table(std::ostream& out) const;
  void write_jsonl(std::ostream& out) const;

 private:
  std::vector<Certificate> certs_;
};

/// Case-1 state as the verifier sees it: the raw construction data, either
/// straight from an engine or rebuilt from a parsed trace.
struct Case1View {
  const Instance* inst = nullptr;
  MeasureBudget budget = MeasureBudget::geometric_default();
  std::vector<PairEntry> pairs;  // entry 0 is (e, e, U_0)
  std::vector<ZEntry> zlist;

  std::vector<Element> points() const;
};

struct Case2View {
  const Instance* inst = nullptr;
  std::vector<Block> blocks;

  std::vector<Element> points() const;
};

Case1View view_of(const Case1Engine& engine);
Case2View view_of(const Case2Engine& engine);
Case1View view_of_trace(const ParsedTrace& trace);  // case 1 traces
Case2View view_of_trace_case2(const ParsedTrace& trace);

/// Exact difference set {a b^-1 : a, b in A} by brute force over ordered
/// pairs. The oracle the engine's coverage bookkeeping is checked against.
ElementSet brute_difference_set(const Instance& inst, std::span<const Element> points);

/// (1): the first k+1 enumerated elements lie in A A^-1 (brute force).
Certificate check_cover(const Case1View& view, std::uint64_t k);
Certificate check_cover(const Case2View& view);

/// (2) resp. the block condition: pairwise disjointness with the verifier's
/// own geometric predicates.
Certificate check_disjointness(const Case1View& view);
Certificate check_disjointness(const Case2View& view);

/// (4) + (5): z-cells contain no point of A; mu(V_j) < r_j strictly.
Certificate check_z_separation(const Case1View& view);

/// Exact cumulative measure < 1/2 strictly, every cell under its rate.
Certificate check_budget(const Case1View& view);

/// Pointwise discreteness witnesses for case 2: separation sizes yield
/// disjoint cells for every pair of distinct points of A.
Certificate check_separation(const Case2View& view);

/// Thinness as stabilization: for each of the first `first_k` enumerated
/// g != e, the number of ordered pairs with difference g is equal at both
/// stages. Both point lists must come from runs of the same configuration.
Certificate check_thin(const Instance& inst, std::span<const Element> points_n1,
                       std::span<const Element> points_n2, std::uint64_t first_k);

/// Full verification of a parsed-from-disk trace: header digest, semantic
/// state checks with independent predicates, exact measure-ledger replay,
/// and a byte-exact deterministic replay of the whole construction.
Report verify_trace(const std::vector<std::string>& lines);

// ---- built-in mutation suite ------------------------------------------------

enum class MutationKind {
  CenterPerturb,
  SizePerturb,
  MeasurePerturb,
  DropZEntry,
  ReorderRecords,
  TruncateMidLine,
  TruncateWholeRecord,
  HeaderTamper,
  CoverageTamper,
};

std::vector<MutationKind> all_mutations();
std::string mutation_name(MutationKind kind);

/// Apply one mutation to raw trace bytes (as written by the CLI).
std::string apply_mutation(const std::string& raw_trace, MutationKind kind);

}  // namespace diffcover
