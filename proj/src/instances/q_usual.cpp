#include <algorithm>

#include "diffcover/enumeration.hpp"
#include "diffcover/instance.hpp"
#include "instances.hpp"

namespace diffcover {

namespace {

constexpr std::uint64_t kRankSearchGuard = 10000000ull;

// The rationals with their usual (metric) topology: not precompact. Witness
// U = [-1, 1], V = [-1/2, 1/2]; V - V = [-1, 1] is contained in U, and FU is
// bounded for finite F while Q is not, so G != FU always.
class QUsualInstance final : public Instance {
 public:
  QUsualInstance()
      : Instance(GroupDescriptor{"q-usual", CaseTag::NonPrecompact, Family::RationalLine,
                                 "signed-calkin-wilf",
                                 "not precompact; usual metric topology on Q",
                                 std::nullopt}),
        witness_{CellSize::free_radius(Rat(1)), CellSize::ladder(0)} {
    set_identity(Element(Rat(0)));
    // V V^-1 inside U, by endpoints: 2 * radius(V) <= radius(U).
    if (!(radius_of(witness_.v) * 2 <= radius_of(witness_.u)))
      throw std::logic_error("escape witness violates V V^-1 within U");
  }

  Element element_at(const Index& i) const override { return Element(signed_rat_at(i)); }
  Index index_of(const Element& x) const override { return signed_rat_index(as_rat(x)); }
  Element compose(const Element& a, const Element& b) const override {
    return Element(Rat(as_rat(a) + as_rat(b)));
  }
  Element inverse(const Element& a) const override { return Element(Rat(-as_rat(a))); }

  std::string format(const Element& x) const override { return rat_str(as_rat(x)); }
  Element parse(std::string_view s) const override { return Element(rat_parse(s)); }

  CellSize separation(const Element& a, const Element& b) const override {
    return CellSize::ladder(min_rank_separating(a, b));
  }

  bool cell_contains(const Cell& cell, const Element& point) const override {
    Rat d = abs(as_rat(point) - as_rat(cell.center));
    return d <= radius_of(cell.size);
  }

  bool cells_disjoint(const Cell& c1, const Cell& c2) const override {
    Rat d = abs(as_rat(c1.center) - as_rat(c2.center));
    return d > radius_of(c1.size) + radius_of(c2.size);
  }

  // No normalized measure exists; the ladder cap bounds the radius instead.
  std::uint64_t min_rank_measure_below(DyadicCap cap) const override { return cap.exp; }

  std::uint64_t min_rank_avoiding_cells(const Element& at,
                                        std::span<const Cell> cells) const override {
    std::uint64_t rank = 0;
    const Rat& x = as_rat(at);
    for (const auto& c : cells) {
      Rat gap = abs(x - as_rat(c.center)) - radius_of(c.size);
      if (sgn(gap) <= 0)
        throw ContractViolation("min_rank_avoiding_cells: point lies inside a cell");
      rank = std::max(rank, min_rank_with([&](std::uint64_t r) {
        return unit_dyadic(r + 1) < gap;
      }));
    }
    return rank;
  }

  std::uint64_t min_rank_separating(const Element& a, const Element& b) const override {
    Rat d = abs(as_rat(a) - as_rat(b));
    if (sgn(d) == 0) throw ContractViolation("min_rank_separating: equal points");
    return min_rank_with([&](std::uint64_t r) { return unit_dyadic(r) < d; });
  }

  std::uint64_t min_rank_avoiding_points(const Element& at,
                                         std::span<const Element> points) const override {
    std::uint64_t rank = 0;
    const Rat& x = as_rat(at);
    for (const auto& pt : points) {
      Rat d = abs(x - as_rat(pt));
      if (sgn(d) == 0) throw ContractViolation("min_rank_avoiding_points: point equals center");
      rank = std::max(rank,
                      min_rank_with([&](std::uint64_t r) { return unit_dyadic(r + 1) < d; }));
    }
    return rank;
  }

  const EscapeWitness& escape_witness() const override { return witness_; }

  Element escape(std::span<const Element> finite_set) const override {
    std::vector<ClosedInterval> forbidden;
    forbidden.reserve(finite_set.size());
    const Rat ru = radius_of(witness_.u);
    for (const auto& f : finite_set) {
      const Rat& c = as_rat(f);
      forbidden.push_back({c - ru, c + ru});
    }
    return Element(least_rational_outside(forbidden, ElementSet{}).first);
  }

  std::optional<std::pair<Element, Index>> least_admissible_block(
      const Element& g, std::span<const Cell> block_cells,
      const ElementSet& excluded) const override {
    // Admissibility of t is a pair of interval constraints per existing
    // cell: the V-cells at t and at g+t must clear it by more than the
    // radius sum. Exclusions shift the same way.
    const Rat rv = radius_of(witness_.v);
    const Rat& gv = as_rat(g);
    std::vector<ClosedInterval> forbidden;
    forbidden.reserve(2 * block_cells.size());
    for (const auto& c : block_cells) {
      const Rat& cc = as_rat(c.center);
      Rat reach = rv + radius_of(c.size);
      forbidden.push_back({cc - reach, cc + reach});
      forbidden.push_back({cc - gv - reach, cc - gv + reach});
    }
    ElementSet shifted_excluded;
    for (const auto& e : excluded) {
      shifted_excluded.insert(e);
      shifted_excluded.insert(Element(Rat(as_rat(e) - gv)));
    }
    auto [value, index] = least_rational_outside(forbidden, shifted_excluded);
    return std::make_pair(Element(std::move(value)), std::move(index));
  }

 private:
  static Rat radius_of(const CellSize& s) {
    switch (s.kind) {
      case CellSize::Kind::Ladder: return unit_dyadic(s.level + 1);
      case CellSize::Kind::Radius: return s.radius;
      case CellSize::Kind::Singleton:
        throw ContractViolation("interval cells have no singleton size");
    }
    throw ContractViolation("bad cell size");
  }

  template <typename Pred>
  static std::uint64_t min_rank_with(Pred pred) {
    if (pred(0)) return 0;
    std::uint64_t hi = 1;
    while (!pred(hi)) {
      hi *= 2;
      if (hi > kRankSearchGuard) throw std::logic_error("rank search guard exhausted");
    }
    std::uint64_t lo = hi / 2 + 1;
    while (lo < hi) {
      std::uint64_t mid = lo + (hi - lo) / 2;
      if (pred(mid))
        hi = mid;
      else
        lo = mid + 1;
    }
    return hi;
  }

  EscapeWitness witness_;
};

}  // namespace

std::unique_ptr<Instance> make_q_usual() {
  return std::make_unique<QUsualInstance>();
}

}  // namespace diffcover
