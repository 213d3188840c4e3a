#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "diffcover/geometry.hpp"
#include "diffcover/instance.hpp"

namespace diffcover {

/// Block n: the pair {x_n, g_n x_n}. When g_n is the identity the block is
/// the single point x_n.
struct Block {
  Element x, g, gx;
  bool single() const { return x == gx; }
};

struct Case2StepRecord {
  std::uint64_t step = 0;  // 1-based; block index = step - 1
  Element g, x, gx;
};

/// The non-precompact construction: every enumerated g_n gets a block whose
/// V-thickening is disjoint from all earlier blocks'. x_n is the least-index
/// admissible element; admissibility is exact cell disjointness plus, in
/// thin mode, avoidance of the finite exclusion set.
class Case2Engine {
 public:
  Case2Engine(const Instance& inst, bool thin);

  Case2StepRecord step();

  const Instance& instance() const { return *inst_; }
  bool thin() const { return thin_; }
  std::uint64_t steps_done() const { return steps_done_; }

  const std::vector<Block>& blocks() const { return blocks_; }
  const std::vector<Cell>& block_cells() const { return cells_; }

  /// All block points in placement order.
  const std::vector<Element>& points() const { return points_; }

 private:
  void extend_exclusions_rows(std::uint64_t upto_row);
  void extend_exclusions_points(const Element& x, const Element& gx, bool single);
  bool admissible(const Element& t, const Element& gt, const ElementSet& excluded) const;

  const Instance* inst_;
  bool thin_;
  bool singleton_cells_;
  std::uint64_t steps_done_ = 0;

  std::vector<Block> blocks_;
  std::vector<Cell> cells_;
  std::vector<Element> points_;
  ElementSet point_set_;  // fast path when V is a singleton

  ElementSet exclusions_;
  std::uint64_t excl_rows_ = 0;
  std::vector<Element> g_cache_;
};

Case2Engine run_case2(const Instance& inst, std::uint64_t steps, bool thin,
                      const std::function<void(const Case2StepRecord&)>& sink);

}  // namespace diffcover
