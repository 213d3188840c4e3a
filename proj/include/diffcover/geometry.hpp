#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "diffcover/element.hpp"

namespace diffcover {

class Instance;

/// Size parameter of a basic closed neighborhood of the identity.
///
/// Ladder sizes carry the rung index of the instance's canonical ladder
/// (p-adic: ball of level k; metric instances: radius (1/2)*2^-k). Free
/// radii exist for ad-hoc cells such as separation witnesses and the escape
/// neighborhood; engine-produced cells are always ladder cells, which keeps
/// traces compact. Singleton is the one-point neighborhood of the discrete
/// instances.
struct CellSize {
  enum class Kind { Ladder, Radius, Singleton };

  Kind kind = Kind::Singleton;
  std::uint64_t level = 0;  // Kind::Ladder
  Rat radius;               // Kind::Radius

  static CellSize ladder(std::uint64_t k) { return {Kind::Ladder, k, Rat(0)}; }
  static CellSize free_radius(Rat r) { return {Kind::Radius, 0, std::move(r)}; }
  static CellSize singleton() { return {Kind::Singleton, 0, Rat(0)}; }

  bool operator==(const CellSize& o) const;

  std::string str() const;  // "level:k" | "radius:num/den" | "singleton"
  static CellSize parse(std::string_view s);
};

/// A translate of a basic closed neighborhood to a group point: the pair
/// (center, size). The center always belongs to the cell.
struct Cell {
  Element center;
  CellSize size;
};

/// Finite ordered union of cells. Membership is decided exactly cell by
/// cell; the measure bound is the plain subadditive sum.
struct Region {
  std::vector<Cell> cells;
};

/// Budget sequence (r_i). The geometric default "geom-1/16" has r_i =
/// 2^-(i+4), so sum r_i = 1/8 < 1/6 in closed form. "const-1/6" exists as a
/// deliberately uncertifiable rule for exercising the rejection path.
class MeasureBudget {
 public:
  static MeasureBudget geometric_default();
  static MeasureBudget from_rule(std::string_view rule_id);  // throws ConfigError

  const std::string& rule_id() const { return rule_id_; }

  /// Closed-form certificate sum r_i < 1/6; false for divergent rules.
  bool certified() const { return certified_; }

  /// Certified upper bound on sum r_i (only when certified()).
  const Rat& sum_bound() const;

  /// r_i as a strict dyadic cap (only when certified()).
  DyadicCap cap(std::uint64_t i) const;

  /// r_i as an exact rational (only when certified()).
  Rat rate(std::uint64_t i) const;

 private:
  std::string rule_id_;
  bool certified_ = false;
  Rat sum_bound_;
};

/// Fast exact membership oracle for a growing region. Semantics are
/// identical to testing every cell; instances may bucket cells to make the
/// candidate scans cheap.
class RegionMembership {
 public:
  virtual ~RegionMembership() = default;
  virtual void add(const Cell& cell) = 0;
  virtual bool contains(const Element& point) const = 0;
};

// ---- generic geometry operations over an instance --------------------------

bool region_contains(const Instance& inst, const Region& region, const Element& point);

/// Subadditive upper bound: sum of exact cell measures (precompact only).
Rat region_measure_bound(const Instance& inst, const Region& region);

/// The pair (x, y) with x = g*y, both outside `forbidden` and `excluded`,
/// minimizing the enumeration index of y. g must not be the identity.
std::pair<Element, Element> find_difference_pair(const Instance& inst, const Element& g,
                                                 const Region& forbidden,
                                                 const ElementSet& excluded);

/// Indexed variant used by the engines: `forbidden_cells` is the region's
/// cell list and `membership` its oracle.
std::pair<Element, Element> find_difference_pair(const Instance& inst, const Element& g,
                                                 const RegionMembership& membership,
                                                 const ElementSet& excluded);

/// Largest ladder size (smallest rung) whose cells at x and y avoid every
/// forbidden cell, avoid each other, and have measure strictly below
/// `bound`. x != y and both lie outside the forbidden region.
CellSize fit_shared_neighborhood(const Instance& inst, const Element& x, const Element& y,
                                 const Region& forbidden, DyadicCap bound);

/// Largest ladder size whose cell at z contains no point of `avoid` and has
/// measure strictly below `bound`. z must not be in `avoid`.
CellSize fit_point_neighborhood(const Instance& inst, const Element& z,
                                std::span<const Element> avoid, DyadicCap bound);

}  // namespace diffcover
