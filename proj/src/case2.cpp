#include "diffcover/case2.hpp"

#include "diffcover/case1.hpp"  // InvariantViolation

namespace diffcover {

namespace {
constexpr std::uint64_t kScanGuard = 200000000ull;
}

Case2Engine::Case2Engine(const Instance& inst, bool thin) : inst_(&inst), thin_(thin) {
  if (inst.precompact())
    throw ConfigError("case 2 requires a non-precompact instance, got " +
                      inst.descriptor().name);
  const EscapeWitness& w = inst.escape_witness();  // validates the witness exists
  singleton_cells_ = w.v.kind == CellSize::Kind::Singleton;
}

void Case2Engine::extend_exclusions_rows(std::uint64_t upto_row) {
  while (excl_rows_ <= upto_row) {
    const std::uint64_t i = excl_rows_;
    while (g_cache_.size() <= i)
      g_cache_.push_back(inst_->element_at(Index(static_cast<unsigned long>(g_cache_.size()))));
    const Element& gi = g_cache_[i];
    const Element gi_inv = inst_->inverse(gi);
    for (const auto& a : points_) {
      exclusions_.insert(inst_->compose(gi, a));
      exclusions_.insert(inst_->compose(gi_inv, a));
    }
    ++excl_rows_;
  }
}

void Case2Engine::extend_exclusions_points(const Element& x, const Element& gx, bool single) {
  for (std::uint64_t i = 0; i < excl_rows_; ++i) {
    const Element& gi = g_cache_[i];
    const Element gi_inv = inst_->inverse(gi);
    exclusions_.insert(inst_->compose(gi, x));
    exclusions_.insert(inst_->compose(gi_inv, x));
    if (!single) {
      exclusions_.insert(inst_->compose(gi, gx));
      exclusions_.insert(inst_->compose(gi_inv, gx));
    }
  }
}

bool Case2Engine::admissible(const Element& t, const Element& gt,
                             const ElementSet& excluded) const {
  if (!excluded.empty() && (excluded.count(t) || excluded.count(gt))) return false;
  if (singleton_cells_) return !point_set_.count(t) && !point_set_.count(gt);
  const CellSize& v = inst_->escape_witness().v;
  const Cell ct{t, v}, cgt{gt, v};
  for (const auto& c : cells_) {
    if (!inst_->cells_disjoint(ct, c)) return false;
    if (!(t == gt) && !inst_->cells_disjoint(cgt, c)) return false;
  }
  return true;
}

Case2StepRecord Case2Engine::step() {
  const std::uint64_t n = steps_done_;
  const Element g = inst_->element_at(Index(static_cast<unsigned long>(n)));

  static const ElementSet kNoExclusions;
  if (thin_) extend_exclusions_rows(n + 1);
  const ElementSet& excluded = thin_ ? exclusions_ : kNoExclusions;

  Element x;
  if (auto accel = inst_->least_admissible_block(g, std::span<const Cell>(cells_), excluded)) {
    x = std::move(accel->first);
    Element gx_check = inst_->compose(g, x);
    if (!admissible(x, gx_check, excluded))
      throw std::logic_error("accelerated block search returned an inadmissible candidate");
  } else {
    bool found = false;
    for (std::uint64_t i = 0; i < kScanGuard && !found; ++i) {
      Element t = inst_->element_at(Index(static_cast<unsigned long>(i)));
      Element gt = inst_->compose(g, t);
      if (admissible(t, gt, excluded)) {
        x = std::move(t);
        found = true;
      }
    }
    if (!found) throw std::logic_error("block candidate scan guard exhausted");
  }

  Element gx = inst_->compose(g, x);
  if (!(inst_->difference(gx, x) == g))
    throw InvariantViolation("block-coverage", n + 1, "difference(gx, x) != g");

  Block block{x, g, gx};
  const CellSize& v = inst_->escape_witness().v;
  blocks_.push_back(block);
  points_.push_back(x);
  point_set_.insert(x);
  cells_.push_back(Cell{x, v});
  if (!block.single()) {
    points_.push_back(gx);
    point_set_.insert(gx);
    cells_.push_back(Cell{gx, v});
  }
  if (thin_) extend_exclusions_points(x, gx, block.single());

  ++steps_done_;
  return Case2StepRecord{steps_done_, g, x, gx};
}

Case2Engine run_case2(const Instance& inst, std::uint64_t steps, bool thin,
                      const std::function<void(const Case2StepRecord&)>& sink) {
  Case2Engine engine(inst, thin);
  for (std::uint64_t i = 0; i < steps; ++i) {
    Case2StepRecord rec = engine.step();
    if (sink) sink(rec);
  }
  return engine;
}

}  // namespace diffcover
