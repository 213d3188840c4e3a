#include "diffcover/geometry.hpp"

#include <algorithm>

#include "diffcover/instance.hpp"

namespace diffcover {

bool CellSize::operator==(const CellSize& o) const {
  if (kind != o.kind) return false;
  switch (kind) {
    case Kind::Ladder: return level == o.level;
    case Kind::Radius: return radius == o.radius;
    case Kind::Singleton: return true;
  }
  return false;
}

std::string CellSize::str() const {
  switch (kind) {
    case Kind::Ladder: return "level:" + std::to_string(level);
    case Kind::Radius: return "radius:" + rat_str(radius);
    case Kind::Singleton: return "singleton";
  }
  return {};
}

CellSize CellSize::parse(std::string_view s) {
  if (s == "singleton") return singleton();
  if (s.rfind("level:", 0) == 0) {
    const Int lvl = int_parse(s.substr(6));
    if (lvl < 0 || !lvl.fits_ulong_p()) throw ConfigError("bad cell level: " + std::string(s));
    return ladder(lvl.get_ui());
  }
  if (s.rfind("radius:", 0) == 0) {
    Rat r = rat_parse(s.substr(7));
    if (sgn(r) <= 0) throw ConfigError("cell radius must be positive: " + std::string(s));
    return free_radius(std::move(r));
  }
  throw ConfigError("bad cell size: " + std::string(s));
}

// ---- budget ----------------------------------------------------------------

MeasureBudget MeasureBudget::geometric_default() {
  MeasureBudget b;
  b.rule_id_ = "geom-1/16";
  b.certified_ = true;
  b.sum_bound_ = make_rat(1, 8);  // sum 2^-(i+4) = 1/8
  return b;
}

MeasureBudget MeasureBudget::from_rule(std::string_view rule_id) {
  if (rule_id == "geom-1/16") return geometric_default();
  if (rule_id == "const-1/6") {
    MeasureBudget b;
    b.rule_id_ = "const-1/6";
    b.certified_ = false;  // constant series diverges
    return b;
  }
  throw ConfigError("unknown budget rule: " + std::string(rule_id));
}

const Rat& MeasureBudget::sum_bound() const {
  if (!certified_) throw ContractViolation("budget rule is not certified");
  return sum_bound_;
}

DyadicCap MeasureBudget::cap(std::uint64_t i) const {
  if (!certified_) throw ContractViolation("budget rule is not certified");
  return DyadicCap{i + 4};
}

Rat MeasureBudget::rate(std::uint64_t i) const { return cap(i).value(); }

// ---- generic operations ----------------------------------------------------

namespace {

class LinearMembership final : public RegionMembership {
 public:
  explicit LinearMembership(const Instance& inst) : inst_(inst) {}

  void add(const Cell& cell) override { cells_.push_back(cell); }

  bool contains(const Element& point) const override {
    for (const auto& c : cells_)
      if (inst_.cell_contains(c, point)) return true;
    return false;
  }

 private:
  const Instance& inst_;
  std::vector<Cell> cells_;
};

constexpr std::uint64_t kScanGuard = 200000000ull;

}  // namespace

std::unique_ptr<RegionMembership> Instance::make_region_membership() const {
  return std::make_unique<LinearMembership>(*this);
}

bool region_contains(const Instance& inst, const Region& region, const Element& point) {
  for (const auto& c : region.cells)
    if (inst.cell_contains(c, point)) return true;
  return false;
}

Rat region_measure_bound(const Instance& inst, const Region& region) {
  Rat total(0);
  for (const auto& c : region.cells) total += inst.cell_measure(c);
  return total;
}

std::pair<Element, Element> find_difference_pair(const Instance& inst, const Element& g,
                                                 const RegionMembership& membership,
                                                 const ElementSet& excluded) {
  if (g == inst.identity())
    throw ContractViolation("find_difference_pair: g must not be the identity");
  for (std::uint64_t i = 0; i < kScanGuard; ++i) {
    Element y = inst.element_at(Index(static_cast<unsigned long>(i)));
    if (!excluded.empty() && excluded.count(y)) continue;
    if (membership.contains(y)) continue;
    Element x = inst.compose(g, y);
    if (!excluded.empty() && excluded.count(x)) continue;
    if (membership.contains(x)) continue;
    return {std::move(x), std::move(y)};
  }
  throw std::logic_error("find_difference_pair: scan guard exhausted");
}

std::pair<Element, Element> find_difference_pair(const Instance& inst, const Element& g,
                                                 const Region& forbidden,
                                                 const ElementSet& excluded) {
  auto membership = inst.make_region_membership();
  for (const auto& c : forbidden.cells) membership->add(c);
  return find_difference_pair(inst, g, *membership, excluded);
}

CellSize fit_shared_neighborhood(const Instance& inst, const Element& x, const Element& y,
                                 const Region& forbidden, DyadicCap bound) {
  if (x == y) throw ContractViolation("fit_shared_neighborhood: x == y");
  std::span<const Cell> cells(forbidden.cells);
  std::uint64_t k = inst.min_rank_measure_below(bound);
  k = std::max(k, inst.min_rank_avoiding_cells(x, cells));
  k = std::max(k, inst.min_rank_avoiding_cells(y, cells));
  k = std::max(k, inst.min_rank_separating(x, y));
  const CellSize size = CellSize::ladder(k);
  const Cell cx{x, size}, cy{y, size};
  if (!inst.cells_disjoint(cx, cy))
    throw std::logic_error("fit_shared_neighborhood: disjointness postcondition failed");
  for (const auto& c : forbidden.cells)
    if (!inst.cells_disjoint(cx, c) || !inst.cells_disjoint(cy, c))
      throw std::logic_error("fit_shared_neighborhood: forbidden-cell postcondition failed");
  return size;
}

CellSize fit_point_neighborhood(const Instance& inst, const Element& z,
                                std::span<const Element> avoid, DyadicCap bound) {
  // min_rank_avoiding_points rejects z itself appearing in `avoid`.
  std::uint64_t k = inst.min_rank_measure_below(bound);
  k = std::max(k, inst.min_rank_avoiding_points(z, avoid));
  return CellSize::ladder(k);
}

}  // namespace diffcover
