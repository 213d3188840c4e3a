#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "diffcover/geometry.hpp"
#include "diffcover/instance.hpp"

namespace diffcover {

/// Raised when the engine detects that one of its maintained invariants
/// failed; carries enough context for a failing certificate.
struct InvariantViolation : std::runtime_error {
  InvariantViolation(std::string check_, std::uint64_t stage_, const std::string& detail)
      : std::runtime_error("invariant " + check_ + " failed at stage " +
                           std::to_string(stage_) + ": " + detail),
        check(std::move(check_)),
        stage(stage_) {}
  std::string check;
  std::uint64_t stage;
};

/// The pair (x_i, y_i) with the shared neighborhood size U_i. Entry 0 is
/// (e, e, U_0) and contributes a single cell.
struct PairEntry {
  Element x, y;
  CellSize u;
};

/// z_j with its neighborhood size V_j; the z-list enumerates A A^-1 \ A.
struct ZEntry {
  Element z;
  CellSize v;
};

struct Case1StepRecord {
  std::uint64_t step = 0;  // 1-based
  std::uint64_t target_index = 0;
  Element target, x, y;
  CellSize u;
  std::vector<ZEntry> z_new;
  Rat step_measure;
  Rat cumulative_measure;
};

/// Deterministic state machine for the precompact construction. One step
/// targets the least-index element not yet in A A^-1, adjoins the pair
/// (x, y) with x = g y found inside the open complement of the forbidden
/// region, fits the shared neighborhood, and extends the z-list.
///
/// Maintained invariants, re-checked independently by the verifier:
///   (1) the first steps_done()+1 enumerated elements lie in A A^-1;
///   (2) the placed pair cells are pairwise disjoint (families {x_i U_i},
///       {y_i U_i}, and cross pairs with i, j >= 1);
///   (3) mu(U_i) < r_i;
///   (4) every z_j V_j contains no point of A;
///   (5) mu(V_j) < r_j;
///   and the exact measure ledger stays below 3 * sum(r_i) <= 3/8 < 1/2.
class Case1Engine {
 public:
  Case1Engine(const Instance& inst, MeasureBudget budget, bool thin);

  Case1StepRecord step();

  const Instance& instance() const { return *inst_; }
  const MeasureBudget& budget() const { return budget_; }
  bool thin() const { return thin_; }
  std::uint64_t steps_done() const { return steps_done_; }

  const std::vector<PairEntry>& pairs() const { return pairs_; }
  const std::vector<ZEntry>& zlist() const { return zlist_; }
  const std::vector<std::uint64_t>& m_checkpoints() const { return m_; }

  /// A as an ordered list: x_0, then x_1, y_1, x_2, y_2, ...
  const std::vector<Element>& points() const { return a_list_; }

  /// Engine bookkeeping of A A^-1 (checked against the brute-force oracle).
  const ElementSet& difference_set() const { return diff_set_; }

  /// Enumeration indices known to be covered.
  bool index_covered(std::uint64_t i) const;
  /// Smallest enumeration index not yet covered.
  std::uint64_t least_uncovered_index() const;

  /// The forbidden region B in canonical order: x_i U_i, then y_i U_i for
  /// i >= 1, then z_j V_j.
  Region forbidden_region() const;

  Rat cumulative_measure() const { return ledger_.value(); }

  const CellSize& init_size() const { return pairs_.front().u; }
  Rat init_measure() const;

 private:
  void extend_exclusions_rows(std::uint64_t upto_row);
  void extend_exclusions_points(const Element& x, const Element& y);
  void note_difference(const Element& d, std::vector<std::pair<Element, std::uint64_t>>& fresh);
  std::uint64_t index_u64(const Element& e) const;

  const Instance* inst_;
  MeasureBudget budget_;
  bool thin_;
  std::uint64_t steps_done_ = 0;

  std::vector<PairEntry> pairs_;
  std::vector<ZEntry> zlist_;
  std::vector<std::uint64_t> m_;

  std::vector<Element> a_list_;
  ElementSet a_set_;
  ElementSet diff_set_;

  mutable std::uint64_t next_uncovered_ = 0;  // scan pointer over covered_
  std::unordered_set<std::uint64_t> covered_;

  std::vector<Cell> cells_;  // every placed cell, chronological
  std::unique_ptr<RegionMembership> membership_;
  UnitFractionSum ledger_;

  ElementSet exclusions_;         // thin mode only
  std::uint64_t excl_rows_ = 0;   // g-rows built so far
  std::vector<Element> g_cache_;  // g_i by index
};

/// Run N steps, feeding each record to `sink` (may be empty).
Case1Engine run_case1(const Instance& inst, MeasureBudget budget, std::uint64_t steps,
                      bool thin, const std::function<void(const Case1StepRecord&)>& sink);

}  // namespace diffcover
