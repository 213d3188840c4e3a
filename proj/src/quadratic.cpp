#include "diffcover/quadratic.hpp"

namespace diffcover {

int QRoot5::sign() const {
  const int sa = sgn(a_);
  const int sb = sgn(b_);
  if (sb == 0) return sa;
  if (sa == 0) return sb;
  if (sa == sb) return sa;
  // Opposite signs: compare |a| and |b|*sqrt(5) via squares.
  Rat a2 = a_ * a_;
  Rat b25 = b_ * b_ * 5;
  const int c = ::cmp(a2, b25);
  if (c == 0) return 0;  // unreachable for rational a, b with b != 0
  return c > 0 ? sa : sb;
}

int QRoot5::cmp(const Rat& q) const {
  // Fast gate for tiny positive q = num/den: if q < 2^-65 and this > 2^-64,
  // the answer is +1 without touching the wide denominator.
  if (sgn(q) > 0) {
    const std::size_t nbits = mpz_sizeinbase(q.get_num().get_mpz_t(), 2);
    const std::size_t dbits = mpz_sizeinbase(q.get_den().get_mpz_t(), 2);
    if (dbits > nbits + 66) {
      // q = num/den < 2^nbits / 2^(dbits-1) <= 2^-65.
      static const Rat kGate = unit_dyadic(64);
      if ((*this - kGate).sign() > 0) return 1;
    }
  }
  return (*this - QRoot5::from_rat(q)).sign();
}

Int QRoot5::floor() const {
  if (sgn(b_) == 0) {
    Int f;
    mpz_fdiv_q(f.get_mpz_t(), a_.get_num().get_mpz_t(), a_.get_den().get_mpz_t());
    return f;
  }
  // Common denominator D > 0: value = (A + B*sqrt5) / D with integer A, B.
  Int da = a_.get_den(), db = b_.get_den();
  Int g;
  mpz_lcm(g.get_mpz_t(), da.get_mpz_t(), db.get_mpz_t());
  Int A = a_.get_num() * (g / da);
  Int B = b_.get_num() * (g / db);
  Int t = floor_mul_sqrt5(B);  // t <= B*sqrt5 < t+1
  Int f;
  Int numer = A + t;
  mpz_fdiv_q(f.get_mpz_t(), numer.get_mpz_t(), g.get_mpz_t());
  // The enclosing interval has width 1/D; at most one correction step.
  while ((*this - QRoot5::from_rat(Rat(f + 1))).sign() >= 0) ++f;
  return f;
}

std::string QRoot5::str() const {
  return rat_str(a_) + "+" + rat_str(b_) + "*sqrt5";
}

}  // namespace diffcover
