#include "diffcover/numbers.hpp"

#include <cctype>

namespace diffcover {

Rat make_rat(const Int& num, const Int& den) {
  if (den <= 0) throw ContractViolation("make_rat: denominator must be positive");
  Rat q(num, den);
  q.canonicalize();
  return q;
}

std::string rat_str(const Rat& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rat rat_parse(std::string_view s) {
  const auto slash = s.find('/');
  Int num, den;
  if (slash == std::string_view::npos) {
    num = int_parse(s);
    den = 1;
  } else {
    num = int_parse(s.substr(0, slash));
    den = int_parse(s.substr(slash + 1));
  }
  if (den <= 0) throw ConfigError("rational denominator must be positive: " + std::string(s));
  return make_rat(num, den);
}

std::string int_str(const Int& v) { return v.get_str(); }

Int int_parse(std::string_view s) {
  if (s.empty()) throw ConfigError("empty integer literal");
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) throw ConfigError("bad integer literal: " + std::string(s));
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i])))
      throw ConfigError("bad integer literal: " + std::string(s));
  return Int(std::string(s), 10);
}

Rat unit_dyadic(std::uint64_t exp) {
  Int den = 1;
  mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), exp);
  return make_rat(1, den);
}

std::uint64_t padic_valuation(unsigned p, const Int& d) {
  if (d == 0) throw ContractViolation("padic_valuation: zero argument");
  Int a = abs(d);
  std::uint64_t v = 0;
  if (p == 2) {
    v = mpz_scan1(a.get_mpz_t(), 0);
    return v;
  }
  while (mpz_fdiv_ui(a.get_mpz_t(), p) == 0) {
    mpz_divexact_ui(a.get_mpz_t(), a.get_mpz_t(), p);
    ++v;
  }
  return v;
}

Int floor_sqrt(const Int& n) {
  if (n < 0) throw ContractViolation("floor_sqrt: negative argument");
  Int r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

Int floor_mul_sqrt5(const Int& b) {
  if (b == 0) return 0;
  Int t = floor_sqrt(5 * b * b);
  if (b > 0) return t;
  return -t - 1;  // b*sqrt(5) is irrational, so the floor shifts by one
}

PrimePowerLadder::PrimePowerLadder(unsigned base) : base_(base) {
  if (base < 2) throw ContractViolation("PrimePowerLadder: base must be >= 2");
}

void PrimePowerLadder::advance_to(std::uint64_t k) {
  while (k_ < k) {
    pow_ *= base_;
    ++k_;
  }
  while (k_ > k) {
    mpz_divexact_ui(pow_.get_mpz_t(), pow_.get_mpz_t(), base_);
    --k_;
  }
}

bool PrimePowerLadder::pow_exceeds_pow2(std::uint64_t k, std::uint64_t m) {
  if (base_ == 2) return k > m;
  advance_to(k);
  // bit length b satisfies 2^(b-1) <= pow < 2^b; for odd bases pow is never
  // an exact power of two (except pow = 1), so pow > 2^m iff b >= m + 1.
  const std::uint64_t bits = mpz_sizeinbase(pow_.get_mpz_t(), 2);
  if (k == 0) return false;  // pow == 1
  return bits >= m + 1;
}

std::uint64_t PrimePowerLadder::min_exp_exceeding_pow2(std::uint64_t m) {
  if (base_ == 2) return m + 1;
  // Walk from the cached exponent; callers move monotonically in practice.
  std::uint64_t k = k_;
  if (pow_exceeds_pow2(k, m)) {
    while (k > 0 && pow_exceeds_pow2(k - 1, m)) --k;
    return k;
  }
  while (!pow_exceeds_pow2(k + 1, m)) ++k;
  return k + 1;
}

void UnitFractionSum::add(std::uint64_t level) { add_multiple(level, 1); }

void UnitFractionSum::add_multiple(std::uint64_t level, std::uint64_t count) {
  if (count == 0) return;
  Int term(static_cast<unsigned long>(count));
  if (level >= exp_) {
    Int scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), base_, static_cast<unsigned long>(level - exp_));
    num_ *= scale;
    num_ += term;
    exp_ = level;
  } else {
    Int scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), base_, static_cast<unsigned long>(exp_ - level));
    num_ += term * scale;
  }
}

Rat UnitFractionSum::value() const {
  Int den;
  mpz_ui_pow_ui(den.get_mpz_t(), base_, static_cast<unsigned long>(exp_));
  return make_rat(num_, den);
}

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

}  // namespace diffcover
