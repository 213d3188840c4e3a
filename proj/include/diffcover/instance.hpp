#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "diffcover/element.hpp"
#include "diffcover/geometry.hpp"

namespace diffcover {

enum class CaseTag { Precompact, NonPrecompact };

/// Geometry family the verifier re-implements its predicates for.
enum class Family { PadicInt, GoldenCircle, RationalLine, DiscretePoints };

struct GroupDescriptor {
  std::string name;          // CLI instance name
  CaseTag tag;
  Family family;
  std::string enumeration;   // name of the fixed enumeration
  std::string completion;    // description of H and its normalization
  std::optional<unsigned> prime;
};

/// Case-2 witness: a neighborhood U of e with G != FU for every finite F,
/// and V with V V^-1 contained in U. Declared per instance, never inferred.
struct EscapeWitness {
  CellSize u;
  CellSize v;
};

/// One concrete countable group together with its completion geometry.
///
/// The enumeration is total and injective with element_at(0) = identity.
/// All operations are pure functions of immutable values and may be called
/// concurrently; internal caches are synchronized.
class Instance {
 public:
  virtual ~Instance() = default;

  const GroupDescriptor& descriptor() const { return desc_; }
  bool precompact() const { return desc_.tag == CaseTag::Precompact; }

  // -- group oracle --
  virtual Element element_at(const Index& i) const = 0;
  virtual Index index_of(const Element& x) const = 0;
  virtual Element compose(const Element& a, const Element& b) const = 0;
  virtual Element inverse(const Element& a) const = 0;
  Element difference(const Element& a, const Element& b) const {
    return compose(a, inverse(b));
  }
  const Element& identity() const { return identity_; }

  virtual std::string format(const Element& x) const = 0;
  virtual Element parse(std::string_view s) const = 0;

  /// A size making cell(a, s) and cell(b, s) disjoint. a != b required.
  virtual CellSize separation(const Element& a, const Element& b) const = 0;

  // -- completion geometry primitives --
  virtual bool cell_contains(const Cell& cell, const Element& point) const = 0;
  virtual bool cells_disjoint(const Cell& c1, const Cell& c2) const = 0;

  /// Exact Haar measure with mu(H) = 1. Precompact instances only.
  virtual Rat cell_measure(const Cell& cell) const;

  /// Smallest ladder rung whose measure is strictly below the cap. For the
  /// metric non-precompact instances the cap bounds the radius instead
  /// (there is no normalized measure to bound).
  virtual std::uint64_t min_rank_measure_below(DyadicCap cap) const;

  /// Smallest rung k such that cell(at, k) is disjoint from every listed
  /// cell. `at` must lie outside all of them.
  virtual std::uint64_t min_rank_avoiding_cells(const Element& at,
                                                std::span<const Cell> cells) const;

  /// Smallest rung k with cell(a, k) and cell(b, k) disjoint. a != b.
  virtual std::uint64_t min_rank_separating(const Element& a, const Element& b) const;

  /// Smallest rung k with cell(at, k) containing none of `points`
  /// (at itself excluded from the list).
  virtual std::uint64_t min_rank_avoiding_points(const Element& at,
                                                 std::span<const Element> points) const;

  /// Membership oracle for a growing region; default is a linear scan.
  virtual std::unique_ptr<RegionMembership> make_region_membership() const;

  // -- case 2 --
  /// Declared witness; non-precompact instances only.
  virtual const EscapeWitness& escape_witness() const;

  /// Least-index g outside F*U (exact membership per instance).
  virtual Element escape(std::span<const Element> finite_set) const;

  /// Least-index t whose block {t, g*t} has V-cells disjoint from all
  /// `block_cells`, with t and g*t outside `excluded`. Instances with an
  /// accelerated search override this; nullopt means "use the generic
  /// enumeration scan".
  virtual std::optional<std::pair<Element, Index>> least_admissible_block(
      const Element& g, std::span<const Cell> block_cells, const ElementSet& excluded) const;

 protected:
  explicit Instance(GroupDescriptor desc) : desc_(std::move(desc)) {}
  void set_identity(Element e) { identity_ = std::move(e); }

 private:
  GroupDescriptor desc_;
  Element identity_;
};

struct InstanceConfig {
  std::string name;               // z-in-zp | golden-rotation | q-usual |
                                  // z-discrete | f2-discrete
  std::optional<unsigned> p;      // z-in-zp only, prime <= 97
};

/// Build a fully wired instance; throws ConfigError for unknown names or
/// invalid primes.
std::unique_ptr<Instance> make_instance(const InstanceConfig& config);

}  // namespace diffcover
