#include "diffcover/case1.hpp"

#include <algorithm>

namespace diffcover {

namespace {

unsigned ledger_base(const Instance& inst) {
  return inst.descriptor().prime ? *inst.descriptor().prime : 2u;
}

}  // namespace

Case1Engine::Case1Engine(const Instance& inst, MeasureBudget budget, bool thin)
    : inst_(&inst),
      budget_(std::move(budget)),
      thin_(thin),
      ledger_(ledger_base(inst)) {
  if (!inst.precompact())
    throw ConfigError("case 1 requires a precompact instance, got " + inst.descriptor().name);
  if (!budget_.certified())
    throw ConfigError("budget rule " + budget_.rule_id() +
                      " fails its certificate: sum r_i is not provably < 1/6");
  if (!(budget_.sum_bound() < make_rat(1, 6)))
    throw ConfigError("budget certificate does not reach the 1/6 bound");

  // x_0 = y_0 = e with mu(U_0) < r_0; a single cell.
  const Element& e = inst.identity();
  const CellSize u0 = CellSize::ladder(inst.min_rank_measure_below(budget_.cap(0)));
  pairs_.push_back(PairEntry{e, e, u0});
  a_list_.push_back(e);
  a_set_.insert(e);
  diff_set_.insert(e);
  covered_.insert(0);

  cells_.push_back(Cell{e, u0});
  membership_ = inst.make_region_membership();
  membership_->add(cells_.back());
  ledger_.add(u0.level);
  m_.push_back(0);
}

Rat Case1Engine::init_measure() const {
  return inst_->cell_measure(Cell{pairs_.front().x, pairs_.front().u});
}

bool Case1Engine::index_covered(std::uint64_t i) const {
  return i < next_uncovered_ || covered_.count(i) > 0;
}

std::uint64_t Case1Engine::least_uncovered_index() const {
  while (covered_.count(next_uncovered_)) ++next_uncovered_;
  return next_uncovered_;
}

Region Case1Engine::forbidden_region() const {
  Region region;
  region.cells.reserve(2 * pairs_.size() - 1 + zlist_.size());
  for (const auto& p : pairs_) region.cells.push_back(Cell{p.x, p.u});
  for (std::size_t i = 1; i < pairs_.size(); ++i)
    region.cells.push_back(Cell{pairs_[i].y, pairs_[i].u});
  for (const auto& z : zlist_) region.cells.push_back(Cell{z.z, z.v});
  return region;
}

std::uint64_t Case1Engine::index_u64(const Element& e) const {
  Index idx = inst_->index_of(e);
  if (!idx.fits_ulong_p())
    throw std::logic_error("enumeration index exceeds the engine's tracking range");
  return idx.get_ui();
}

void Case1Engine::extend_exclusions_rows(std::uint64_t upto_row) {
  while (excl_rows_ <= upto_row) {
    const std::uint64_t i = excl_rows_;
    while (g_cache_.size() <= i)
      g_cache_.push_back(inst_->element_at(Index(static_cast<unsigned long>(g_cache_.size()))));
    const Element& gi = g_cache_[i];
    const Element gi_inv = inst_->inverse(gi);
    for (const auto& a : a_list_) {
      exclusions_.insert(inst_->compose(gi, a));
      exclusions_.insert(inst_->compose(gi_inv, a));
    }
    ++excl_rows_;
  }
}

void Case1Engine::extend_exclusions_points(const Element& x, const Element& y) {
  for (std::uint64_t i = 0; i < excl_rows_; ++i) {
    const Element& gi = g_cache_[i];
    const Element gi_inv = inst_->inverse(gi);
    for (const Element* w : {&x, &y}) {
      exclusions_.insert(inst_->compose(gi, *w));
      exclusions_.insert(inst_->compose(gi_inv, *w));
    }
  }
}

void Case1Engine::note_difference(const Element& d,
                                  std::vector<std::pair<Element, std::uint64_t>>& fresh) {
  if (!diff_set_.insert(d).second) return;
  const std::uint64_t idx = index_u64(d);
  covered_.insert(idx);
  if (!a_set_.count(d)) fresh.emplace_back(d, idx);
}

Case1StepRecord Case1Engine::step() {
  const std::uint64_t n = steps_done_;

  // mu(B) < 1/2 strictly; with the default budget the ledger stays <= 3/8.
  {
    Rat total = ledger_.value();
    if (!(total < make_rat(1, 2)))
      throw InvariantViolation("measure-bound", n, "mu(B) = " + rat_str(total) + " >= 1/2");
  }

  const std::uint64_t target_idx = least_uncovered_index();
  const Element g = inst_->element_at(Index(static_cast<unsigned long>(target_idx)));

  static const ElementSet kNoExclusions;
  if (thin_) extend_exclusions_rows(n + 1);
  const ElementSet& excluded = thin_ ? exclusions_ : kNoExclusions;

  auto [x, y] = find_difference_pair(*inst_, g, *membership_, excluded);

  const DyadicCap cap = budget_.cap(n + 1);
  std::uint64_t rank = inst_->min_rank_measure_below(cap);
  rank = std::max(rank, inst_->min_rank_avoiding_cells(x, std::span<const Cell>(cells_)));
  rank = std::max(rank, inst_->min_rank_avoiding_cells(y, std::span<const Cell>(cells_)));
  rank = std::max(rank, inst_->min_rank_separating(x, y));
  const CellSize u = CellSize::ladder(rank);

  pairs_.push_back(PairEntry{x, y, u});
  a_list_.push_back(x);
  a_list_.push_back(y);
  a_set_.insert(x);
  a_set_.insert(y);

  UnitFractionSum step_sum(ledger_.base());
  cells_.push_back(Cell{x, u});
  membership_->add(cells_.back());
  cells_.push_back(Cell{y, u});
  membership_->add(cells_.back());
  ledger_.add_multiple(u.level, 2);
  step_sum.add_multiple(u.level, 2);

  if (thin_) extend_exclusions_points(x, y);

  // Every ordered pair involving a new point is a candidate new difference.
  std::vector<std::pair<Element, std::uint64_t>> fresh;
  for (const Element* w : {&x, &y}) {
    for (const auto& a : a_list_) {
      note_difference(inst_->difference(*w, a), fresh);
      note_difference(inst_->difference(a, *w), fresh);
    }
  }
  if (!index_covered(target_idx))
    throw InvariantViolation("cover", n + 1, "target not covered by its own pair");

  // New z entries in enumeration-index order, each fitted against A.
  std::sort(fresh.begin(), fresh.end(),
            [](const auto& l, const auto& r) { return l.second < r.second; });
  std::vector<ZEntry> z_new;
  z_new.reserve(fresh.size());
  for (auto& [z, idx] : fresh) {
    (void)idx;
    const std::uint64_t j = zlist_.size();
    const CellSize v =
        fit_point_neighborhood(*inst_, z, std::span<const Element>(a_list_), budget_.cap(j));
    zlist_.push_back(ZEntry{z, v});
    z_new.push_back(zlist_.back());
    cells_.push_back(Cell{z, v});
    membership_->add(cells_.back());
    ledger_.add(v.level);
    step_sum.add(v.level);
  }

  m_.push_back(zlist_.size());
  ++steps_done_;

  Case1StepRecord rec;
  rec.step = steps_done_;
  rec.target_index = target_idx;
  rec.target = g;
  rec.x = x;
  rec.y = y;
  rec.u = u;
  rec.z_new = std::move(z_new);
  rec.step_measure = step_sum.value();
  rec.cumulative_measure = ledger_.value();
  return rec;
}

Case1Engine run_case1(const Instance& inst, MeasureBudget budget, std::uint64_t steps,
                      bool thin, const std::function<void(const Case1StepRecord&)>& sink) {
  Case1Engine engine(inst, std::move(budget), thin);
  for (std::uint64_t i = 0; i < steps; ++i) {
    Case1StepRecord rec = engine.step();
    if (sink) sink(rec);
  }
  return engine;
}

}  // namespace diffcover
