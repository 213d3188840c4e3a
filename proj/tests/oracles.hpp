#pragma once

// Independent oracles the implementation is checked against. Everything in
// here is deliberately naive: direct recurrences, residue enumeration,
// linear scans. None of it shares code with the decision procedures under
// test beyond the raw number types.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "diffcover/element.hpp"
#include "diffcover/instance.hpp"

#include <mpfr.h>

namespace oracles {

using diffcover::Element;
using diffcover::ElementSet;
using diffcover::Instance;
using diffcover::Int;
using diffcover::Rat;

/// Calkin-Wilf sequence by the direct recurrence q' = 1/(2 floor(q) + 1 - q),
/// starting from q_1 = 1.
inline std::vector<Rat> cw_sequence(std::size_t count) {
  std::vector<Rat> out;
  out.reserve(count);
  Rat q(1);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(q);
    Int fl;
    mpz_fdiv_q(fl.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    Rat denom = Rat(2 * fl) + 1 - q;
    q = 1 / denom;
  }
  return out;
}

inline unsigned long upow(unsigned p, unsigned e) {
  unsigned long r = 1;
  for (unsigned i = 0; i < e; ++i) r *= p;
  return r;
}

/// All residues mod p^m lying in the ball of a given level around center.
inline std::vector<unsigned long> ball_residues(unsigned p, unsigned long center,
                                                unsigned level, unsigned m) {
  const unsigned long pk = upow(p, level);
  const unsigned long pm = upow(p, m);
  std::vector<unsigned long> out;
  for (unsigned long x = center % pk; x < pm; x += pk) out.push_back(x);
  return out;
}

/// Characteristic vector of the ball over Z/p^m.
inline std::vector<bool> ball_bitmap(unsigned p, unsigned long center, unsigned level,
                                     unsigned m) {
  std::vector<bool> in(upow(p, m), false);
  for (unsigned long r : ball_residues(p, center, level, m)) in[r] = true;
  return in;
}

/// Ball disjointness by enumerating one ball's residues mod p^m and testing
/// them against the other's characteristic vector.
inline bool balls_disjoint_by_residues(unsigned p, unsigned long c1, unsigned l1,
                                       unsigned long c2, unsigned l2, unsigned m) {
  auto in2 = ball_bitmap(p, c2, l2, m);
  for (unsigned long r : ball_residues(p, c1, l1, m))
    if (in2[r]) return false;
  return true;
}

/// Sign of a + b*sqrt(5) evaluated in ~100 decimal digits of precision.
/// Returns nullopt if the value is too close to zero to call at this
/// precision (never happens for the generated test inputs).
inline std::optional<int> mpfr_sign_sqrt5(const Rat& a, const Rat& b) {
  constexpr mpfr_prec_t kPrec = 340;  // ~102 decimal digits
  mpfr_t x, y, r5, gate;
  mpfr_inits2(kPrec, x, y, r5, gate, static_cast<mpfr_ptr>(nullptr));
  mpfr_set_ui(r5, 5, MPFR_RNDN);
  mpfr_sqrt(r5, r5, MPFR_RNDN);
  mpfr_set_q(x, a.get_mpq_t(), MPFR_RNDN);
  mpfr_set_q(y, b.get_mpq_t(), MPFR_RNDN);
  mpfr_mul(y, y, r5, MPFR_RNDN);
  mpfr_add(x, x, y, MPFR_RNDN);
  std::optional<int> result;
  mpfr_set_ui_2exp(gate, 1, -300, MPFR_RNDN);
  mpfr_abs(y, x, MPFR_RNDN);
  if (mpfr_cmp(y, gate) > 0) result = mpfr_sgn(x) > 0 ? 1 : -1;
  mpfr_clears(x, y, r5, gate, static_cast<mpfr_ptr>(nullptr));
  return result;
}

/// Least-index element scan: first enumerated element passing `pred`.
template <typename Pred>
Element scan_least(const Instance& inst, Pred pred, std::uint64_t limit = 1000000) {
  for (std::uint64_t i = 0; i < limit; ++i) {
    Element e = inst.element_at(diffcover::Index(static_cast<unsigned long>(i)));
    if (pred(e)) return e;
  }
  throw std::logic_error("oracle scan exhausted");
}

}  // namespace oracles
