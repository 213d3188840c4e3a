#pragma once

#include "diffcover/numbers.hpp"

namespace diffcover {

/// Element of the real quadratic field Q(sqrt(5)): value a + b*sqrt(5) with
/// rational coefficients. Signs, comparisons and floors are decided exactly;
/// no floating point is involved anywhere.
class QRoot5 {
 public:
  QRoot5() = default;
  QRoot5(Rat a, Rat b) : a_(std::move(a)), b_(std::move(b)) {}
  static QRoot5 from_rat(Rat a) { return QRoot5(std::move(a), Rat(0)); }

  const Rat& rational_part() const { return a_; }
  const Rat& root_part() const { return b_; }

  QRoot5 operator+(const QRoot5& o) const { return {a_ + o.a_, b_ + o.b_}; }
  QRoot5 operator-(const QRoot5& o) const { return {a_ - o.a_, b_ - o.b_}; }
  QRoot5 operator-() const { return {-a_, -b_}; }
  QRoot5 operator+(const Rat& r) const { return {a_ + r, b_}; }
  QRoot5 operator-(const Rat& r) const { return {a_ - r, b_}; }

  bool operator==(const QRoot5& o) const { return a_ == o.a_ && b_ == o.b_; }

  /// -1, 0, +1. Mixed-sign cases compare a^2 against 5 b^2; exact zero with
  /// b != 0 is impossible (sqrt(5) is irrational) but handled defensively.
  int sign() const;

  int cmp(const QRoot5& o) const { return (*this - o).sign(); }

  /// Compare against a rational. When `q` is positive with at least ~70 more
  /// bits in its denominator than its numerator (the tiny budget radii), a
  /// cheap exact test against 2^-64 usually settles the comparison without
  /// forming the big cross products.
  int cmp(const Rat& q) const;

  QRoot5 abs() const { return sign() < 0 ? -*this : *this; }

  /// Exact floor.
  Int floor() const;

  std::string str() const;  // "a+b*sqrt5" with rationals, for diagnostics

 private:
  Rat a_, b_;
};

}  // namespace diffcover
