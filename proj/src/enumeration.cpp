#include "diffcover/enumeration.hpp"

#include <algorithm>
#include <cstddef>

namespace diffcover {

// ---- integers -------------------------------------------------------------

Int zigzag_at(const Index& i) {
  if (i < 0) throw ContractViolation("zigzag_at: negative index");
  if (mpz_odd_p(i.get_mpz_t())) return (i + 1) / 2;
  return -(i / 2);
}

Index zigzag_index(const Int& n) {
  if (n > 0) return 2 * n - 1;
  return -2 * n;
}

// ---- Calkin-Wilf ----------------------------------------------------------

Rat cw_at(const Index& k) {
  if (k < 1) throw ContractViolation("cw_at: index must be >= 1");
  Int a = 1, b = 1;
  const std::size_t bits = mpz_sizeinbase(k.get_mpz_t(), 2);
  for (std::size_t pos = bits - 1; pos-- > 0;) {
    if (mpz_tstbit(k.get_mpz_t(), static_cast<mp_bitcnt_t>(pos)))
      a += b;  // right child (a+b)/b
    else
      b += a;  // left child a/(a+b)
  }
  return make_rat(a, b);
}

Index cw_index(const Rat& q) {
  if (sgn(q) <= 0) throw ContractViolation("cw_index: argument must be positive");
  Int a = q.get_num(), b = q.get_den();
  // Climb to the root, recording runs of identical moves (last move first).
  std::vector<std::pair<int, Int>> runs;
  while (!(a == 1 && b == 1)) {
    if (a < b) {
      Int c = (b - 1) / a;
      b -= c * a;
      runs.emplace_back(0, c);
    } else {
      Int c = (a - 1) / b;
      a -= c * b;
      runs.emplace_back(1, c);
    }
  }
  Index n = 1;
  for (auto it = runs.rbegin(); it != runs.rend(); ++it) {
    const unsigned long c = it->second.get_ui();
    mpz_mul_2exp(n.get_mpz_t(), n.get_mpz_t(), c);
    if (it->first == 1) {
      Int ones = 1;
      mpz_mul_2exp(ones.get_mpz_t(), ones.get_mpz_t(), c);
      n += ones - 1;
    }
  }
  return n;
}

Rat signed_rat_at(const Index& i) {
  if (i < 0) throw ContractViolation("signed_rat_at: negative index");
  if (i == 0) return Rat(0);
  if (mpz_odd_p(i.get_mpz_t())) return cw_at((i + 1) / 2);
  return -cw_at(i / 2);
}

Index signed_rat_index(const Rat& q) {
  const int s = sgn(q);
  if (s == 0) return 0;
  if (s > 0) return 2 * cw_index(q) - 1;
  return 2 * cw_index(-q);
}

// ---- free group on two generators -----------------------------------------

namespace {

constexpr char kLetters[4] = {'a', 'A', 'b', 'B'};

int letter_code(char c) {
  switch (c) {
    case 'a': return 0;
    case 'A': return 1;
    case 'b': return 2;
    case 'B': return 3;
    default: throw ContractViolation(std::string("bad word letter: ") + c);
  }
}

int letter_inverse(int code) { return code ^ 1; }

Int pow3(std::size_t e) {
  Int r;
  mpz_ui_pow_ui(r.get_mpz_t(), 3, static_cast<unsigned long>(e));
  return r;
}

// First enumeration index of words of length L >= 1: 1 + 2*(3^(L-1) - 1)*2/...
// count(l) = 4*3^(l-1), so start(L) = 1 + sum_{l<L} count(l) = 2*3^(L-1) - 1.
Int f2_start(std::size_t len) { return 2 * pow3(len - 1) - 1; }

}  // namespace

bool f2_is_reduced(const Word& w) {
  for (std::size_t i = 0; i + 1 < w.size(); ++i)
    if (letter_code(w[i]) == letter_inverse(letter_code(w[i + 1]))) return false;
  return true;
}

Word f2_at(const Index& i) {
  if (i < 0) throw ContractViolation("f2_at: negative index");
  if (i == 0) return Word();
  std::size_t len = 1;
  while (f2_start(len + 1) <= i) ++len;
  Int r = i - f2_start(len);
  Int block = pow3(len - 1);
  Int first = r / block;
  Int rem = r % block;
  Word w;
  w.reserve(len);
  int prev = static_cast<int>(first.get_ui());
  w.push_back(kLetters[prev]);
  for (std::size_t pos = 1; pos < len; ++pos) {
    block /= 3;
    int d = static_cast<int>(Int(rem / block).get_ui());
    rem %= block;
    const int banned = letter_inverse(prev);
    int code = -1;
    for (int c = 0, seen = 0; c < 4; ++c) {
      if (c == banned) continue;
      if (seen++ == d) { code = c; break; }
    }
    w.push_back(kLetters[code]);
    prev = code;
  }
  return w;
}

Index f2_index(const Word& w) {
  if (w.empty()) return 0;
  if (!f2_is_reduced(w)) throw ContractViolation("f2_index: word not reduced");
  const std::size_t len = w.size();
  Int r = letter_code(w[0]);
  for (std::size_t pos = 1; pos < len; ++pos) {
    const int banned = letter_inverse(letter_code(w[pos - 1]));
    const int code = letter_code(w[pos]);
    int d = 0;
    for (int c = 0; c < code; ++c)
      if (c != banned) ++d;
    r = r * 3 + d;
  }
  return f2_start(len) + r;
}

Word f2_inverse(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it)
    out.push_back(kLetters[letter_inverse(letter_code(*it))]);
  return out;
}

Word f2_compose(const Word& u, const Word& v) {
  std::size_t i = u.size(), j = 0;
  while (i > 0 && j < v.size() &&
         letter_code(u[i - 1]) == letter_inverse(letter_code(v[j]))) {
    --i;
    ++j;
  }
  Word out = u.substr(0, i);
  out.append(v, j, Word::npos);
  return out;
}

// ---- Stern-Brocot search ---------------------------------------------------

namespace {

struct MergedIntervals {
  std::vector<ClosedInterval> parts;  // disjoint, non-touching, sorted

  bool contains(const Rat& x) const {
    auto it = std::upper_bound(parts.begin(), parts.end(), x,
                               [](const Rat& v, const ClosedInterval& iv) { return v < iv.lo; });
    if (it == parts.begin()) return false;
    --it;
    return x <= it->hi;
  }

  /// Whether the open interval (lo, hi) is wholly inside the union.
  /// hi_infinite marks the unbounded right spine of the tree.
  bool covers_open(const Rat& lo, const Rat& hi, bool hi_infinite) const {
    if (hi_infinite) return false;
    auto it = std::upper_bound(parts.begin(), parts.end(), lo,
                               [](const Rat& v, const ClosedInterval& iv) { return v < iv.lo; });
    if (it == parts.begin()) return false;
    --it;
    return lo >= it->lo && hi <= it->hi;
  }
};

MergedIntervals merge_intervals(std::vector<ClosedInterval> in) {
  MergedIntervals out;
  std::sort(in.begin(), in.end(),
            [](const ClosedInterval& x, const ClosedInterval& y) { return x.lo < y.lo; });
  for (auto& iv : in) {
    if (iv.hi < iv.lo) throw ContractViolation("interval with hi < lo");
    if (!out.parts.empty() && iv.lo <= out.parts.back().hi) {
      if (iv.hi > out.parts.back().hi) out.parts.back().hi = iv.hi;
    } else {
      out.parts.push_back(std::move(iv));
    }
  }
  return out;
}

constexpr std::size_t kMaxSearchDepth = 10000;

struct SbSearch {
  const MergedIntervals& blocked;
  const ElementSet& excluded;
  int sign;  // evaluate exclusion at sign * value
  std::optional<Index> best;

  void prune_or_visit(Int ln, Int ld, Int rn, Int rd, std::size_t depth, const Index& rsum,
                      const Index& pow2d) {
    if (depth > kMaxSearchDepth)
      throw std::logic_error("Stern-Brocot search exceeded depth bound");
    if (best && pow2d >= *best) return;  // every index below is >= 2^depth
    // Subtree spans the open interval (ln/ld, rn/rd); rd == 0 means +inf.
    const bool hi_inf = (rd == 0);
    Rat lo = make_rat(ln, ld);
    Rat hi = hi_inf ? Rat(0) : make_rat(rn, rd);
    if (blocked.covers_open(lo, hi, hi_inf)) return;
    Int mn = ln + rn, md = ld + rd;
    Rat value = make_rat(mn, md);
    if (!blocked.contains(value)) {
      Element probe = sign > 0 ? Element(value) : Element(Rat(-value));
      if (excluded.find(probe) == excluded.end()) {
        Index n = pow2d + rsum;
        if (!best || n < *best) best = n;
      }
    }
    Index pow_next = pow2d * 2;
    prune_or_visit(ln, ld, mn, md, depth + 1, rsum, pow_next);        // left, bit 0
    prune_or_visit(mn, md, rn, rd, depth + 1, rsum + pow2d, pow_next);  // right, bit 1
  }
};

/// Least Calkin-Wilf index k with cw(k) outside `blocked` and sign*cw(k)
/// not excluded; nullopt only if the search space is fully blocked (cannot
/// happen for bounded forbidden sets).
std::optional<Index> least_cw_index(const MergedIntervals& blocked, const ElementSet& excluded,
                                    int sign) {
  SbSearch search{blocked, excluded, sign, std::nullopt};
  search.prune_or_visit(0, 1, 1, 0, 0, 0, 1);
  return search.best;
}

}  // namespace

std::pair<Rat, Index> least_rational_outside(const std::vector<ClosedInterval>& forbidden,
                                             const ElementSet& excluded) {
  MergedIntervals merged = merge_intervals(forbidden);
  const Rat zero(0);
  if (!merged.contains(zero) && excluded.find(Element(zero)) == excluded.end())
    return {zero, Index(0)};

  // Positive candidates use the intervals as-is; negative ones mirror them.
  std::optional<Index> kpos = least_cw_index(merged, excluded, +1);

  std::vector<ClosedInterval> mirrored;
  mirrored.reserve(merged.parts.size());
  for (const auto& iv : merged.parts) mirrored.push_back({-iv.hi, -iv.lo});
  MergedIntervals merged_neg = merge_intervals(std::move(mirrored));
  std::optional<Index> kneg = least_cw_index(merged_neg, excluded, -1);

  std::optional<Index> best;
  if (kpos) best = 2 * *kpos - 1;
  if (kneg) {
    Index n = 2 * *kneg;
    if (!best || n < *best) best = n;
  }
  if (!best) throw std::logic_error("no admissible rational found");
  return {signed_rat_at(*best), *best};
}

}  // namespace diffcover
