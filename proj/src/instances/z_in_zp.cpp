#include <algorithm>
#include <map>
#include <mutex>

#include "diffcover/enumeration.hpp"
#include "diffcover/instance.hpp"
#include "instances.hpp"

namespace diffcover {

namespace {

// Membership oracle bucketing p-adic balls by level. Levels above the
// threshold behave like points for desk-scale integers: containment of x in
// ball(c, k) needs p^k | x - c, impossible for 0 < |x - c| < 2^k. The
// wide-operand fallback keeps the test exact for arbitrary inputs.
class PadicMembership final : public RegionMembership {
 public:
  PadicMembership(unsigned p, const Instance& inst) : p_(p), inst_(inst) {}

  static constexpr std::uint64_t kBigLevel = 128;

  void add(const Cell& cell) override {
    if (cell.size.kind != CellSize::Kind::Ladder)
      throw ContractViolation("p-adic region cells must be ladder cells");
    const Int& c = as_int(cell.center);
    if (cell.size.level >= kBigLevel) {
      big_centers_.insert(cell.center);
      big_cells_.push_back(cell);
      big_center_bits_ = std::max(big_center_bits_, mpz_sizeinbase(c.get_mpz_t(), 2));
    } else {
      auto& bucket = buckets_[cell.size.level];
      if (bucket.modulus == 0) {
        mpz_ui_pow_ui(bucket.modulus.get_mpz_t(), p_,
                      static_cast<unsigned long>(cell.size.level));
      }
      Int r;
      mpz_fdiv_r(r.get_mpz_t(), c.get_mpz_t(), bucket.modulus.get_mpz_t());
      bucket.residues.insert(Element(std::move(r)));
    }
  }

  bool contains(const Element& point) const override {
    const Int& x = as_int(point);
    for (const auto& [level, bucket] : buckets_) {
      Int r;
      mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), bucket.modulus.get_mpz_t());
      if (bucket.residues.count(Element(std::move(r)))) return true;
    }
    if (big_centers_.count(point)) return true;
    if (!big_cells_.empty()) {
      const std::size_t xbits = mpz_sizeinbase(x.get_mpz_t(), 2);
      if (xbits + 2 >= kBigLevel || big_center_bits_ + 2 >= kBigLevel) {
        for (const auto& c : big_cells_)
          if (inst_.cell_contains(c, point)) return true;
      }
    }
    return false;
  }

 private:
  struct Bucket {
    Int modulus = 0;
    ElementSet residues;
  };

  unsigned p_;
  const Instance& inst_;
  std::map<std::uint64_t, Bucket> buckets_;
  ElementSet big_centers_;
  std::vector<Cell> big_cells_;
  std::size_t big_center_bits_ = 0;
};

class ZInZpInstance final : public Instance {
 public:
  explicit ZInZpInstance(unsigned p)
      : Instance(GroupDescriptor{
            "z-in-zp", CaseTag::Precompact, Family::PadicInt, "zigzag",
            "ring of " + std::to_string(p) + "-adic integers, Haar measure mu(Z_p) = 1",
            p}),
        p_(p),
        ladder_(p) {
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

  CellSize separation(const Element& a, const Element& b) const override {
    return CellSize::ladder(min_rank_separating(a, b));
  }

  bool cell_contains(const Cell& cell, const Element& point) const override {
    const std::uint64_t k = level_of(cell.size);
    Int d = as_int(point) - as_int(cell.center);
    if (d == 0) return true;
    if (k == 0) return true;
    if (mpz_sizeinbase(d.get_mpz_t(), 2) < k) return false;  // |d| < 2^k <= p^k
    return padic_valuation(p_, d) >= k;
  }

  bool cells_disjoint(const Cell& c1, const Cell& c2) const override {
    const std::uint64_t k = std::min(level_of(c1.size), level_of(c2.size));
    Int d = as_int(c1.center) - as_int(c2.center);
    if (d == 0) return false;
    if (k == 0) return false;
    if (mpz_sizeinbase(d.get_mpz_t(), 2) < k) return true;
    return padic_valuation(p_, d) < k;
  }

  Rat cell_measure(const Cell& cell) const override {
    Int den;
    mpz_ui_pow_ui(den.get_mpz_t(), p_, static_cast<unsigned long>(level_of(cell.size)));
    return make_rat(1, den);
  }

  std::uint64_t min_rank_measure_below(DyadicCap cap) const override {
    std::lock_guard<std::mutex> lock(mutex_);
    return ladder_.min_exp_exceeding_pow2(cap.exp);
  }

  std::uint64_t min_rank_avoiding_cells(const Element& at,
                                        std::span<const Cell> cells) const override {
    std::uint64_t rank = 0;
    const Int& x = as_int(at);
    for (const auto& c : cells) {
      Int d = x - as_int(c.center);
      if (d == 0) throw ContractViolation("min_rank_avoiding_cells: point is a cell center");
      const std::uint64_t v = padic_valuation(p_, d);
      if (v >= level_of(c.size))
        throw ContractViolation("min_rank_avoiding_cells: point lies inside a cell");
      rank = std::max(rank, v + 1);
    }
    return rank;
  }

  std::uint64_t min_rank_separating(const Element& a, const Element& b) const override {
    Int d = as_int(a) - as_int(b);
    if (d == 0) throw ContractViolation("min_rank_separating: equal points");
    return padic_valuation(p_, d) + 1;
  }

  std::uint64_t min_rank_avoiding_points(const Element& at,
                                         std::span<const Element> points) const override {
    std::uint64_t rank = 0;
    const Int& x = as_int(at);
    Int d;
    for (const auto& pt : points) {
      d = x - as_int(pt);
      if (d == 0) throw ContractViolation("min_rank_avoiding_points: point equals center");
      // Most differences are units; skip the valuation loop for them.
      if (mpz_fdiv_ui(d.get_mpz_t(), p_) != 0) {
        rank = std::max<std::uint64_t>(rank, 1);
        continue;
      }
      rank = std::max(rank, padic_valuation(p_, d) + 1);
    }
    return rank;
  }

  std::unique_ptr<RegionMembership> make_region_membership() const override {
    return std::make_unique<PadicMembership>(p_, *this);
  }

 private:
  std::uint64_t level_of(const CellSize& s) const {
    if (s.kind != CellSize::Kind::Ladder)
      throw ContractViolation("p-adic cells are ladder cells");
    return s.level;
  }

  unsigned p_;
  mutable std::mutex mutex_;
  mutable PrimePowerLadder ladder_;
};

}  // namespace

std::unique_ptr<Instance> make_z_in_zp(unsigned p) {
  return std::make_unique<ZInZpInstance>(p);
}

}  // namespace diffcover
