#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "diffcover/instance.hpp"
#include "diffcover/quadratic.hpp"
#include "oracles.hpp"

using namespace diffcover;

namespace {

std::unique_ptr<Instance> zp(unsigned p) { return make_instance({"z-in-zp", p}); }

Element elem(const Instance& inst, const char* s) { return inst.parse(s); }

}  // namespace

TEST_CASE("factory validates configuration") {
  CHECK_THROWS_AS(make_instance({"z-in-zp", 6}), ConfigError);
  CHECK_THROWS_AS(make_instance({"z-in-zp", 101}), ConfigError);
  CHECK_THROWS_AS(make_instance({"z-in-zp", std::nullopt}), ConfigError);
  CHECK_THROWS_AS(make_instance({"golden-rotation", 3}), ConfigError);
  CHECK_THROWS_AS(make_instance({"does-not-exist", std::nullopt}), ConfigError);
  CHECK(make_instance({"z-in-zp", 97})->precompact());
  CHECK(!make_instance({"q-usual", std::nullopt})->precompact());
}

TEST_CASE("instance enumerations are total, injective, and invert on 10^4 indices") {
  for (const char* name : {"z-in-zp", "golden-rotation", "q-usual", "z-discrete",
                           "f2-discrete"}) {
    auto inst = make_instance(
        {name, std::string(name) == "z-in-zp" ? std::optional<unsigned>(2) : std::nullopt});
    CHECK(inst->element_at(0) == inst->identity());
    ElementSet seen;
    for (unsigned long i = 0; i < 10000; ++i) {
      Element e = inst->element_at(Index(i));
      CHECK(seen.insert(e).second);
      CHECK(inst->index_of(e) == Index(i));
    }
  }
}

TEST_CASE("group axioms hold exactly on random triples from the first 10^3 indices") {
  std::mt19937 rng(424242);
  std::uniform_int_distribution<unsigned long> pick(0, 999);
  for (const char* name : {"z-in-zp", "golden-rotation", "q-usual", "f2-discrete"}) {
    auto inst = make_instance(
        {name, std::string(name) == "z-in-zp" ? std::optional<unsigned>(3) : std::nullopt});
    const Element& e = inst->identity();
    for (int t = 0; t < 300; ++t) {
      Element a = inst->element_at(Index(pick(rng)));
      Element b = inst->element_at(Index(pick(rng)));
      Element c = inst->element_at(Index(pick(rng)));
      CHECK(inst->compose(inst->compose(a, b), c) == inst->compose(a, inst->compose(b, c)));
      CHECK(inst->compose(a, e) == a);
      CHECK(inst->compose(e, a) == a);
      CHECK(inst->compose(a, inst->inverse(a)) == e);
      CHECK((inst->difference(a, b) == e) == (a == b));
    }
  }
}

TEST_CASE("difference examples") {
  auto z2 = zp(2);
  CHECK(z2->difference(elem(*z2, "5"), elem(*z2, "3")) == elem(*z2, "2"));
  auto f2 = make_instance({"f2-discrete", std::nullopt});
  CHECK(f2->difference(elem(*f2, "ab"), elem(*f2, "b")) == elem(*f2, "a"));
  auto q = make_instance({"q-usual", std::nullopt});
  CHECK(q->difference(elem(*q, "1/2"), elem(*q, "1/3")) == elem(*q, "1/6"));
}

TEST_CASE("separation witnesses produce disjoint cells") {
  auto z2 = zp(2);
  // 1 vs 3: congruent mod 2 but not mod 4, so the witness is level 2.
  CellSize s = z2->separation(elem(*z2, "1"), elem(*z2, "3"));
  CHECK(s == CellSize::ladder(2));
  CHECK_THROWS_AS(z2->separation(elem(*z2, "1"), elem(*z2, "1")), ContractViolation);

  auto q = make_instance({"q-usual", std::nullopt});
  CellSize sq = q->separation(elem(*q, "0/1"), elem(*q, "1/1"));
  CHECK(sq == CellSize::ladder(1));  // radius 1/4, strictly under half the distance

  auto f2 = make_instance({"f2-discrete", std::nullopt});
  CHECK(f2->separation(elem(*f2, "a"), elem(*f2, "b")) == CellSize::singleton());

  std::mt19937 rng(99);
  std::uniform_int_distribution<unsigned long> pick(0, 800);
  for (const char* name : {"z-in-zp", "golden-rotation", "q-usual", "z-discrete"}) {
    auto inst = make_instance(
        {name, std::string(name) == "z-in-zp" ? std::optional<unsigned>(5) : std::nullopt});
    for (int t = 0; t < 250; ++t) {
      Element a = inst->element_at(Index(pick(rng)));
      Element b = inst->element_at(Index(pick(rng)));
      if (a == b) continue;
      CellSize w = inst->separation(a, b);
      CHECK(inst->cells_disjoint(Cell{a, w}, Cell{b, w}));
    }
  }
}

TEST_CASE("p-adic ball measures") {
  auto z2 = zp(2);
  CHECK(z2->cell_measure(Cell{elem(*z2, "0"), CellSize::ladder(5)}) == make_rat(1, 32));
  auto z3 = zp(3);
  CHECK(z3->cell_measure(Cell{elem(*z3, "0"), CellSize::ladder(0)}) == Rat(1));
  auto q = make_instance({"q-usual", std::nullopt});
  CHECK_THROWS_AS(q->cell_measure(Cell{elem(*q, "0/1"), CellSize::ladder(1)}),
                  ContractViolation);
}

TEST_CASE("circle arc measures") {
  auto rot = make_instance({"golden-rotation", std::nullopt});
  CHECK(rot->cell_measure(Cell{elem(*rot, "0"), CellSize::free_radius(make_rat(1, 100))}) ==
        make_rat(1, 50));
  CHECK(rot->cell_measure(Cell{elem(*rot, "0"), CellSize::ladder(0)}) == Rat(1));
  CHECK(rot->cell_measure(Cell{elem(*rot, "0"), CellSize::ladder(7)}) == make_rat(1, 128));
}

TEST_CASE("p-adic disjointness matches residue enumeration exhaustively") {
  // Both predicates factor through the center difference, so centers 0 and d
  // cover every center pair. Same-level pairs are exhausted for all k <= 8
  // and all differences mod p^k; mixed levels run on a residue stride.
  for (unsigned p : {2u, 3u, 5u}) {
    auto inst = zp(p);
    const unsigned kmax = 8;
    std::uint64_t failures = 0;
    for (unsigned k = 0; k <= kmax; ++k) {
      const unsigned m = std::min(kmax, k + 2);
      const unsigned long pk = oracles::upow(p, k);
      for (unsigned long d = 0; d < pk; ++d) {
        const bool expected = oracles::balls_disjoint_by_residues(p, 0, k, d, k, m);
        const bool got =
            inst->cells_disjoint(Cell{Element(Int(0)), CellSize::ladder(k)},
                                 Cell{Element(Int(static_cast<long>(d))), CellSize::ladder(k)});
        if (expected != got) ++failures;
      }
    }
    for (unsigned l1 = 0; l1 <= kmax; ++l1)
      for (unsigned l2 = 0; l2 <= kmax; ++l2) {
        const unsigned m = std::max({l1, l2, 1u});
        const unsigned long pm = oracles::upow(p, m);
        const unsigned long stride = pm < 400 ? 1 : pm / 397;
        for (unsigned long d = 0; d < pm; d += stride) {
          const bool expected = oracles::balls_disjoint_by_residues(p, 0, l1, d, l2, m);
          const bool got = inst->cells_disjoint(
              Cell{Element(Int(0)), CellSize::ladder(l1)},
              Cell{Element(Int(static_cast<long>(d))), CellSize::ladder(l2)});
          if (expected != got) ++failures;
        }
      }
    CHECK(failures == 0);
  }
}

TEST_CASE("p-adic membership matches residue enumeration") {
  for (unsigned p : {2u, 3u, 5u}) {
    auto inst = zp(p);
    const unsigned m = p == 5 ? 5 : 6;
    const unsigned long pm = oracles::upow(p, m);
    std::uint64_t failures = 0;
    for (unsigned level = 0; level <= m; ++level)
      for (unsigned long c = 0; c < pm; c += 7) {
        auto in_ball = oracles::ball_bitmap(p, c, level, m);
        const Cell cell{Element(Int(static_cast<long>(c))), CellSize::ladder(level)};
        for (unsigned long x = 0; x < pm; ++x) {
          const bool got = inst->cell_contains(cell, Element(Int(static_cast<long>(x))));
          if (in_ball[x] != got) ++failures;
        }
      }
    CHECK(failures == 0);
  }
}

TEST_CASE("spec'd p-adic disjointness cases") {
  auto z2 = zp(2);
  CHECK(z2->cells_disjoint(Cell{elem(*z2, "1"), CellSize::ladder(3)},
                           Cell{elem(*z2, "2"), CellSize::ladder(3)}));
  CHECK(!z2->cells_disjoint(Cell{elem(*z2, "1"), CellSize::ladder(2)},
                            Cell{elem(*z2, "5"), CellSize::ladder(3)}));
}

TEST_CASE("golden rotation positions are pairwise distinct and float-consistent") {
  auto rot = make_instance({"golden-rotation", std::nullopt});
  // Distinctness of frac(n*phi) for |n| <= 1000 via exact circle distance:
  // disjoint singleton-radius arcs witness distinct positions.
  for (long n = -1000; n <= 1000; ++n) {
    if (n == 0) continue;
    CHECK(rot->cells_disjoint(Cell{Element(Int(n)), CellSize::free_radius(make_rat(1, 100000000))},
                              Cell{Element(Int(0)), CellSize::free_radius(make_rat(1, 100000000))}));
  }
}

TEST_CASE("golden rotation membership examples") {
  auto rot = make_instance({"golden-rotation", std::nullopt});
  // Element 1 sits at phi = 0.618...; the closed arc of radius 1/32 around
  // the identity's position misses it.
  Region r{{Cell{elem(*rot, "0"), CellSize::free_radius(make_rat(1, 32))}}};
  CHECK(!region_contains(*rot, r, elem(*rot, "1")));
  CHECK(region_contains(*rot, r, elem(*rot, "0")));
  // Distance phi-to-0 is 1 - phi = 0.38...; arcs of radius 1/10 are disjoint.
  CHECK(rot->cells_disjoint(Cell{elem(*rot, "0"), CellSize::free_radius(make_rat(1, 10))},
                            Cell{elem(*rot, "1"), CellSize::free_radius(make_rat(1, 10))}));
  // ... but arcs of radius 1/5 overlap (sum 2/5 > 0.3819).
  CHECK(!rot->cells_disjoint(Cell{elem(*rot, "0"), CellSize::free_radius(make_rat(1, 5))},
                             Cell{elem(*rot, "1"), CellSize::free_radius(make_rat(1, 5))}));
}

TEST_CASE("escape witnesses and escape scans") {
  auto q = make_instance({"q-usual", std::nullopt});
  const EscapeWitness& w = q->escape_witness();
  CHECK(w.u == CellSize::free_radius(Rat(1)));
  CHECK(w.v == CellSize::ladder(0));

  CHECK(q->escape({}) == elem(*q, "0/1"));
  // F = {0, 1}: the least-index rational farther than 1 from both is -2.
  std::vector<Element> f{elem(*q, "0/1"), elem(*q, "1/1")};
  Element got = q->escape(f);
  CHECK(got == elem(*q, "-2/1"));
  Element scan = oracles::scan_least(*q, [&](const Element& g) {
    const Rat& v = as_rat(g);
    return abs(v - Rat(0)) > 1 && abs(v - Rat(1)) > 1;
  });
  CHECK(got == scan);

  auto zd = make_instance({"z-discrete", std::nullopt});
  std::vector<Element> fz{zd->identity()};
  CHECK(zd->escape(fz) == zd->element_at(1));
  CHECK_THROWS_AS(zp(2)->escape(fz), ContractViolation);
}

TEST_CASE("escape output re-checked against the witness") {
  auto q = make_instance({"q-usual", std::nullopt});
  std::mt19937 rng(5);
  std::uniform_int_distribution<unsigned long> pick(0, 200);
  for (int t = 0; t < 50; ++t) {
    std::vector<Element> f;
    for (int i = 0; i < 5; ++i) f.push_back(q->element_at(Index(pick(rng))));
    Element g = q->escape(f);
    for (const auto& fe : f) CHECK(abs(as_rat(g) - as_rat(fe)) > 1);
  }
}
