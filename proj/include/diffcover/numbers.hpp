#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <stdexcept>

#include <gmpxx.h>

namespace diffcover {

using Int = mpz_class;
using Rat = mpq_class;

// Thrown when a caller violates a documented precondition.
struct ContractViolation : std::logic_error {
  using std::logic_error::logic_error;
};

// Thrown for invalid run configuration (CLI exit code 2).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Canonical rational from integer numerator/denominator, den > 0 enforced.
Rat make_rat(const Int& num, const Int& den);

/// Serialized form used everywhere in traces: "num/den", lowest terms,
/// sign on the numerator ("0/1", "-3/4", "2/1").
std::string rat_str(const Rat& q);

/// Parse the "num/den" form; a bare integer "n" is accepted as n/1.
Rat rat_parse(std::string_view s);

std::string int_str(const Int& v);
Int int_parse(std::string_view s);

/// 2^-exp as an exact rational.
Rat unit_dyadic(std::uint64_t exp);

/// A strictly positive bound of the form 2^-exp. All budget rates in the
/// system are of this shape, which keeps bound comparisons exact and cheap
/// even when exp reaches a few hundred thousand.
struct DyadicCap {
  std::uint64_t exp = 0;
  Rat value() const { return unit_dyadic(exp); }
};

/// p-adic valuation of d != 0.
std::uint64_t padic_valuation(unsigned p, const Int& d);

/// floor(sqrt(n)) for n >= 0.
Int floor_sqrt(const Int& n);

/// floor(b * sqrt(5)) for integer b (exact; sqrt(5) is irrational so the
/// negative case needs the -1 shift).
Int floor_mul_sqrt5(const Int& b);

/// Exact comparison base^k <=> 2^m without materializing big powers on the
/// fast path. Monotone callers (levels that mostly increase) amortize to a
/// handful of limb operations per query; the power is kept incrementally.
class PrimePowerLadder {
 public:
  explicit PrimePowerLadder(unsigned base);

  /// true iff base^k > 2^m.
  bool pow_exceeds_pow2(std::uint64_t k, std::uint64_t m);

  /// Smallest k with base^k > 2^m.
  std::uint64_t min_exp_exceeding_pow2(std::uint64_t m);

  unsigned base() const { return base_; }

 private:
  void advance_to(std::uint64_t k);

  unsigned base_;
  Int pow_ = 1;
  std::uint64_t k_ = 0;
};

/// Exact running sum of unit fractions base^-level. Value is num / base^exp.
/// Additions with non-decreasing levels are cheap; smaller levels cost one
/// power of the difference.
class UnitFractionSum {
 public:
  explicit UnitFractionSum(unsigned base) : base_(base) {}

  void add(std::uint64_t level);
  void add_multiple(std::uint64_t level, std::uint64_t count);

  /// Exact value as a canonical rational.
  Rat value() const;

  bool empty() const { return num_ == 0; }
  unsigned base() const { return base_; }

 private:
  unsigned base_;
  Int num_ = 0;
  std::uint64_t exp_ = 0;
};

/// FNV-1a 64-bit, rendered as 16 hex digits; used for config digests.
std::string fnv1a_hex(std::string_view data);

}  // namespace diffcover
