#include <algorithm>
#include <mutex>
#include <unordered_map>

#include "diffcover/enumeration.hpp"
#include "diffcover/instance.hpp"
#include "diffcover/quadratic.hpp"
#include "instances.hpp"

namespace diffcover {

namespace {

constexpr std::uint64_t kRankSearchGuard = 10000000ull;

// Rotation by phi = (sqrt5 - 1)/2: element n sits at frac(n*phi) on the
// circle R/Z with arc-length measure. All comparisons run in Q(sqrt5);
// distances depend only on the difference of elements, which makes them
// highly cacheable.
class GoldenRotationInstance final : public Instance {
 public:
  GoldenRotationInstance()
      : Instance(GroupDescriptor{"golden-rotation", CaseTag::Precompact,
                                 Family::GoldenCircle, "zigzag",
                                 "circle R/Z with arc length, element n at frac(n*(sqrt5-1)/2)",
                                 std::nullopt}) {
    set_identity(Element(Int(0)));
  }

  Element element_at(const Index& i) const override { return Element(zigzag_at(i)); }
  Index index_of(const Element& x) const override { return zigzag_index(as_int(x)); }
  Element compose(const Element& a, const Element& b) const override {
    return Element(Int(as_int(a) + as_int(b)));
  }
  Element inverse(const Element& a) const override { return Element(Int(-as_int(a))); }

  std::string format(const Element& x) const override { return int_str(as_int(x)); }
  Element parse(std::string_view s) const override { return Element(int_parse(s)); }

  /// Exact circle position frac(n*phi) as an element of Q(sqrt5).
  QRoot5 position(const Int& n) const {
    // n*phi = (-n + n*sqrt5)/2. With u = floor(n*sqrt5), the interval
    // ((u-n)/2, (u-n+1)/2) contains n*phi and no integer, so the floor is
    // fdiv(u - n, 2).
    Int u = floor_mul_sqrt5(n);
    Int f;
    Int un = u - n;
    mpz_fdiv_q_2exp(f.get_mpz_t(), un.get_mpz_t(), 1);
    return QRoot5(make_rat(-n, 2) - Rat(f), make_rat(n, 2));
  }

  CellSize separation(const Element& a, const Element& b) const override {
    return CellSize::ladder(min_rank_separating(a, b));
  }

  bool cell_contains(const Cell& cell, const Element& point) const override {
    Int k = as_int(point) - as_int(cell.center);
    if (k == 0) return true;
    if (cell.size.kind == CellSize::Kind::Ladder)
      return cmp_dist_dyadic(k, cell.size.level + 1) <= 0;
    return dist_entry(k).dist.cmp(radius_of(cell.size)) <= 0;
  }

  bool cells_disjoint(const Cell& c1, const Cell& c2) const override {
    Int k = as_int(c1.center) - as_int(c2.center);
    if (k == 0) return false;
    if (c1.size.kind == CellSize::Kind::Ladder && c2.size.kind == CellSize::Kind::Ladder)
      return cmp_dist_dyadic_sum(k, c1.size.level + 1, c2.size.level + 1) > 0;
    Rat sum = radius_of(c1.size) + radius_of(c2.size);
    return dist_entry(k).dist.cmp(sum) > 0;
  }

  Rat cell_measure(const Cell& cell) const override {
    if (cell.size.kind == CellSize::Kind::Ladder) return unit_dyadic(cell.size.level);
    Rat m = radius_of(cell.size) * 2;
    return m > 1 ? Rat(1) : m;
  }

  std::uint64_t min_rank_measure_below(DyadicCap cap) const override { return cap.exp + 1; }

  std::uint64_t min_rank_avoiding_cells(const Element& at,
                                        std::span<const Cell> cells) const override {
    std::uint64_t rank = 0;
    const Int& x = as_int(at);
    for (const auto& c : cells) {
      Int k = x - as_int(c.center);
      if (k == 0 || !cell_is_avoided(k, c.size))
        throw ContractViolation("min_rank_avoiding_cells: point lies inside a cell");
      rank = std::max(rank, min_rank_with([&](std::uint64_t r) {
        if (c.size.kind == CellSize::Kind::Ladder)
          return cmp_dist_dyadic_sum(k, r + 1, c.size.level + 1) > 0;
        return dist_entry(k).dist.cmp(unit_dyadic(r + 1) + radius_of(c.size)) > 0;
      }));
    }
    return rank;
  }

  std::uint64_t min_rank_separating(const Element& a, const Element& b) const override {
    Int k = as_int(a) - as_int(b);
    if (k == 0) throw ContractViolation("min_rank_separating: equal points");
    return separation_rank(k);
  }

  std::uint64_t min_rank_avoiding_points(const Element& at,
                                         std::span<const Element> points) const override {
    std::uint64_t rank = 0;
    const Int& x = as_int(at);
    for (const auto& pt : points) {
      Int k = x - as_int(pt);
      if (k == 0) throw ContractViolation("min_rank_avoiding_points: point equals center");
      // Avoiding a point at rung r means dist > 2^-(r+1); this is the
      // separation predicate shifted by one.
      rank = std::max(rank, separation_rank(k) - 1);
    }
    return rank;
  }

 private:
  struct DistEntry {
    QRoot5 dist;
    bool above_gate;  // dist > 2^-64
  };

  static Rat radius_of(const CellSize& s) {
    switch (s.kind) {
      case CellSize::Kind::Ladder: return unit_dyadic(s.level + 1);
      case CellSize::Kind::Radius: return s.radius;
      case CellSize::Kind::Singleton:
        throw ContractViolation("circle cells have no singleton size");
    }
    throw ContractViolation("bad cell size");
  }

  bool cell_is_avoided(const Int& k, const CellSize& s) const {
    if (s.kind == CellSize::Kind::Ladder) return cmp_dist_dyadic(k, s.level + 1) > 0;
    return dist_entry(k).dist.cmp(radius_of(s)) > 0;
  }

  DistEntry compute_dist(const Int& k) const {
    QRoot5 p = position(k);
    QRoot5 rest = QRoot5::from_rat(Rat(1)) - p;
    QRoot5 d = p.cmp(rest) <= 0 ? p : rest;
    static const Rat kGate = unit_dyadic(64);
    return DistEntry{d, d.cmp(kGate) > 0};
  }

  const DistEntry& dist_entry(const Int& k) const {
    std::lock_guard<std::mutex> lock(mutex_);
    // Distances are symmetric; canonicalize the key sign.
    Int key = abs(k);
    if (key.fits_slong_p()) {
      auto [it, fresh] = dist_cache_.try_emplace(key.get_si());
      if (fresh) it->second = compute_dist(key);
      return it->second;
    }
    auto [it, fresh] = wide_dist_cache_.try_emplace(key.get_str());
    if (fresh) it->second = compute_dist(key);
    return it->second;
  }

  /// dist(k) <=> 2^-exp.
  int cmp_dist_dyadic(const Int& k, std::uint64_t exp) const {
    const DistEntry& e = dist_entry(k);
    if (exp >= 66 && e.above_gate) return 1;
    return e.dist.cmp(unit_dyadic(exp));
  }

  /// dist(k) <=> 2^-e1 + 2^-e2. The sum s satisfies
  /// 2^-m <= s <= 2^-(m-1) for m = min(e1, e2); bracketing the distance
  /// against those bounds settles almost every query without ever forming a
  /// dyadic with the larger exponent (which can be in the hundreds of
  /// thousands for deep z-cells).
  int cmp_dist_dyadic_sum(const Int& k, std::uint64_t e1, std::uint64_t e2) const {
    const std::uint64_t m = std::min(e1, e2);
    if (m >= 1 && cmp_dist_dyadic(k, m - 1) > 0) return 1;   // dist > 2^-(m-1) >= s
    if (cmp_dist_dyadic(k, m) <= 0) return -1;               // dist <= 2^-m <= s (never equal)
    if (e1 == e2) return -1;                                 // s = 2^-(m-1) >= dist
    // Now 2^-m < dist <= 2^-(m-1) and s = 2^-m + 2^-emax with emax > m.
    const std::uint64_t emax = std::max(e1, e2);
    if (emax >= m + 70) {
      // s < 2^-m + 2^-(m+70); beating that beats s.
      if (dist_entry(k).dist.cmp(unit_dyadic(m) + unit_dyadic(m + 70)) > 0) return 1;
    }
    return dist_entry(k).dist.cmp(unit_dyadic(e1) + unit_dyadic(e2));
  }

  template <typename Pred>
  static std::uint64_t min_rank_with(Pred pred) {
    if (pred(0)) return 0;
    std::uint64_t hi = 1;
    while (!pred(hi)) {
      hi *= 2;
      if (hi > kRankSearchGuard)
        throw std::logic_error("rank search guard exhausted");
    }
    std::uint64_t lo = hi / 2 + 1;  // pred(hi/2) is false
    while (lo < hi) {
      std::uint64_t mid = lo + (hi - lo) / 2;
      if (pred(mid))
        hi = mid;
      else
        lo = mid + 1;
    }
    return hi;
  }

  std::uint64_t separation_rank(const Int& k) const {
    Int key = abs(k);
    const bool narrow = key.fits_slong_p();
    if (narrow) {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = sep_rank_cache_.find(key.get_si());
      if (it != sep_rank_cache_.end()) return it->second;
    }
    const std::uint64_t r =
        min_rank_with([&](std::uint64_t rr) { return cmp_dist_dyadic(k, rr) > 0; });
    if (narrow) {
      std::lock_guard<std::mutex> lock(mutex_);
      sep_rank_cache_.emplace(key.get_si(), r);
    }
    return r;
  }

  mutable std::mutex mutex_;
  mutable std::unordered_map<long, DistEntry> dist_cache_;
  mutable std::unordered_map<std::string, DistEntry> wide_dist_cache_;
  mutable std::unordered_map<long, std::uint64_t> sep_rank_cache_;
};

}  // namespace

std::unique_ptr<Instance> make_golden_rotation() {
  return std::make_unique<GoldenRotationInstance>();
}

}  // namespace diffcover
