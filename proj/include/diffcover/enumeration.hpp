#pragma once

#include <optional>
#include <vector>

#include "diffcover/element.hpp"

namespace diffcover {

// ---- integers: 0, 1, -1, 2, -2, ... -------------------------------------

Int zigzag_at(const Index& i);
Index zigzag_index(const Int& n);

// ---- positive rationals in Calkin-Wilf order -----------------------------
// cw_at(1) = 1, cw_at(2) = 1/2, cw_at(3) = 2, cw_at(4) = 1/3, ...

Rat cw_at(const Index& k);          // k >= 1
Index cw_index(const Rat& q);       // q > 0, canonical

// ---- all rationals: 0, +q1, -q1, +q2, -q2, ... ---------------------------

Rat signed_rat_at(const Index& i);
Index signed_rat_index(const Rat& q);

// ---- reduced words over {a, A, b, B}, length-lexicographic ---------------
// 0 -> "", 1 -> "a", 2 -> "A", 3 -> "b", 4 -> "B", 5 -> "aa", ...

Word f2_at(const Index& i);
Index f2_index(const Word& w);

bool f2_is_reduced(const Word& w);
Word f2_compose(const Word& u, const Word& v);
Word f2_inverse(const Word& w);

// ---- least-index rational avoiding a forbidden set -----------------------

/// Closed interval [lo, hi] on the rational line (lo <= hi).
struct ClosedInterval {
  Rat lo, hi;
};

/// The rational with the least signed-Calkin-Wilf index that lies outside
/// every closed interval in `forbidden` and is not one of `excluded`.
///
/// The admissible set is open-minus-finitely-many-points and nonempty (the
/// forbidden region is bounded), so the search always terminates. It walks
/// the Stern-Brocot tree with interval pruning rather than scanning the
/// enumeration, because the first admissible rational can sit exponentially
/// deep in the enumeration while its tree depth stays linear.
std::pair<Rat, Index> least_rational_outside(const std::vector<ClosedInterval>& forbidden,
                                             const ElementSet& excluded);

}  // namespace diffcover
