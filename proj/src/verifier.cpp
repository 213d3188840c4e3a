#include "diffcover/verifier.hpp"

#include <algorithm>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "diffcover/quadratic.hpp"

namespace diffcover {

namespace {

// ---------------------------------------------------------------------------
// Verifier-owned geometric predicates. These deliberately do not call the
// instances' geometry methods: the p-adic tests decide by explicit residue
// divisibility, the circle tests reduce differences to [-1/2, 1/2) and rank
// distances by doubling, and the interval tests compare endpoints.
// ---------------------------------------------------------------------------

class GeoCheck {
 public:
  explicit GeoCheck(const Instance& inst)
      : inst_(inst), family_(inst.descriptor().family) {
    if (inst.descriptor().prime) p_ = *inst.descriptor().prime;
  }

  bool contains(const Cell& cell, const Element& point) {
    switch (family_) {
      case Family::PadicInt: {
        const std::uint64_t level = ladder_level(cell.size);
        mpz_sub(scratch_.get_mpz_t(), as_int(point).get_mpz_t(), as_int(cell.center).get_mpz_t());
        if (scratch_ == 0) return true;
        return divisible_by_power(scratch_, level);
      }
      case Family::GoldenCircle: {
        Int k = as_int(point) - as_int(cell.center);
        if (k == 0) return true;
        if (cell.size.kind == CellSize::Kind::Radius)
          return circle_dist(k).cmp(cell.size.radius) <= 0;
        // dist <= 2^-(L+1)  iff  L+1 < rank.
        return ladder_level(cell.size) + 1 < dist_rank(k);
      }
      case Family::RationalLine: {
        const Rat& x = as_rat(point);
        const Rat& c = as_rat(cell.center);
        Rat r = line_radius(cell.size);
        return c - r <= x && x <= c + r;
      }
      case Family::DiscretePoints:
        return cell.center == point;
    }
    throw ContractViolation("bad family");
  }

  bool disjoint(const Cell& c1, const Cell& c2) {
    switch (family_) {
      case Family::PadicInt: {
        const std::uint64_t m = std::min(ladder_level(c1.size), ladder_level(c2.size));
        mpz_sub(scratch_.get_mpz_t(), as_int(c1.center).get_mpz_t(),
                as_int(c2.center).get_mpz_t());
        if (scratch_ == 0 || m == 0) return false;
        return !divisible_by_power(scratch_, m);
      }
      case Family::GoldenCircle: {
        Int k = as_int(c1.center) - as_int(c2.center);
        if (k == 0) return false;
        if (c1.size.kind == CellSize::Kind::Ladder && c2.size.kind == CellSize::Kind::Ladder) {
          const std::uint64_t mn = std::min(c1.size.level, c2.size.level);
          const std::uint64_t rank = dist_rank(k);
          // Radius sum s lies in (2^-(mn+1), 2^-mn]; dist in (2^-rank, 2^-(rank-1)].
          if (mn >= rank) return true;
          if (mn + 2 <= rank) return false;
          return circle_dist(k).cmp(unit_dyadic(c1.size.level + 1) +
                                    unit_dyadic(c2.size.level + 1)) > 0;
        }
        Rat sum = circle_radius(c1.size) + circle_radius(c2.size);
        return circle_dist(k).cmp(sum) > 0;
      }
      case Family::RationalLine: {
        const Rat& a = as_rat(c1.center);
        const Rat& b = as_rat(c2.center);
        Rat r1 = line_radius(c1.size), r2 = line_radius(c2.size);
        return a + r1 < b - r2 || b + r2 < a - r1;
      }
      case Family::DiscretePoints:
        return !(c1.center == c2.center);
    }
    throw ContractViolation("bad family");
  }

  /// measure(size) < 2^-cap, exactly. Ladder cells only.
  bool measure_below(const CellSize& size, std::uint64_t cap) {
    const std::uint64_t level = ladder_level(size);
    if (family_ == Family::PadicInt) {
      if (!rate_ladder_) rate_ladder_.emplace(p_);
      return rate_ladder_->pow_exceeds_pow2(level, cap);
    }
    if (family_ == Family::GoldenCircle) return level > cap;  // measure 2^-level
    throw ContractViolation("measure_below: instance is not precompact");
  }

  /// Exact measure of a ladder cell.
  Rat ladder_measure(std::uint64_t level) const {
    if (family_ == Family::PadicInt) {
      Int den;
      mpz_ui_pow_ui(den.get_mpz_t(), p_, static_cast<unsigned long>(level));
      return make_rat(1, den);
    }
    if (family_ == Family::GoldenCircle) return unit_dyadic(level);
    throw ContractViolation("ladder_measure: instance is not precompact");
  }

  unsigned measure_base() const { return family_ == Family::PadicInt ? p_ : 2u; }

  static std::uint64_t ladder_level(const CellSize& s) {
    if (s.kind != CellSize::Kind::Ladder)
      throw ContractViolation("expected a ladder cell size");
    return s.level;
  }

 private:
  bool divisible_by_power(const Int& d, std::uint64_t level) {
    if (level == 0) return true;
    // |d| < p^level excludes divisibility outright; 2^bits is a lower bound
    // on p^level.
    if (mpz_sizeinbase(d.get_mpz_t(), 2) <= level) return false;
    Int& pw = pow_cache_[level];
    if (pw == 0) mpz_ui_pow_ui(pw.get_mpz_t(), p_, static_cast<unsigned long>(level));
    return mpz_divisible_p(d.get_mpz_t(), pw.get_mpz_t());
  }

  const QRoot5& circle_position(const Int& n) {
    auto it = pos_cache_.find(n.get_str());
    if (it != pos_cache_.end()) return it->second;
    // n * phi with phi = (sqrt5 - 1)/2, reduced mod 1 by the generic floor.
    QRoot5 v(make_rat(-n, 2), make_rat(n, 2));
    QRoot5 frac = v - Rat(v.floor());
    return pos_cache_.emplace(n.get_str(), std::move(frac)).first->second;
  }

  const QRoot5& circle_dist(const Int& k) {
    auto it = dist_cache_.find(k.get_str());
    if (it != dist_cache_.end()) return it->second;
    // Reduce the position difference to [-1/2, 1/2) and take |.|.
    QRoot5 delta = circle_position(k);
    static const Rat kHalf = make_rat(1, 2);
    Int shift = (delta + kHalf).floor();
    QRoot5 reduced = delta - Rat(shift);
    return dist_cache_.emplace(k.get_str(), reduced.abs()).first->second;
  }

  /// Minimal r >= 0 with dist(k) > 2^-r, found by doubling.
  std::uint64_t dist_rank(const Int& k) {
    auto it = rank_cache_.find(k.get_str());
    if (it != rank_cache_.end()) return it->second;
    QRoot5 d = circle_dist(k);
    if (d.sign() <= 0) throw ContractViolation("dist_rank: zero distance");
    static const Rat kOne(1);
    std::uint64_t r = 0;
    QRoot5 doubled = d;
    while (!(doubled.cmp(kOne) > 0)) {
      doubled = doubled + doubled;
      if (++r > 4000000) throw std::logic_error("dist_rank: distance vanishingly small");
    }
    rank_cache_.emplace(k.get_str(), r);
    return r;
  }

  Rat circle_radius(const CellSize& s) const {
    if (s.kind == CellSize::Kind::Ladder) return unit_dyadic(s.level + 1);
    if (s.kind == CellSize::Kind::Radius) return s.radius;
    throw ContractViolation("circle cells have no singleton size");
  }

  Rat line_radius(const CellSize& s) const {
    if (s.kind == CellSize::Kind::Ladder) return unit_dyadic(s.level + 1);
    if (s.kind == CellSize::Kind::Radius) return s.radius;
    throw ContractViolation("interval cells have no singleton size");
  }

  const Instance& inst_;
  Family family_;
  unsigned p_ = 0;
  Int scratch_;
  std::unordered_map<std::uint64_t, Int> pow_cache_;
  std::unordered_map<std::string, QRoot5> pos_cache_;
  std::unordered_map<std::string, QRoot5> dist_cache_;
  std::unordered_map<std::string, std::uint64_t> rank_cache_;
  std::optional<PrimePowerLadder> rate_ladder_;
};

std::string check_digest(const std::string& check, const Instance& inst, std::uint64_t a,
                         std::uint64_t b) {
  return fnv1a_hex(check + "|" + inst.descriptor().name + "|" + std::to_string(a) + "|" +
                   std::to_string(b));
}

Certificate make_pass(std::string check, std::uint64_t stage, const Instance& inst,
                      OrderedJson values) {
  Certificate c;
  c.check = std::move(check);
  c.stage = stage;
  c.inputs_digest = check_digest(c.check, inst, stage, values.size());
  c.pass = true;
  c.values = std::move(values);
  c.witness = nullptr;
  return c;
}

Certificate make_fail(std::string check, std::uint64_t stage, const Instance& inst,
                      OrderedJson values, OrderedJson witness) {
  Certificate c;
  c.check = std::move(check);
  c.stage = stage;
  c.inputs_digest = check_digest(c.check, inst, stage, values.size());
  c.pass = false;
  c.values = std::move(values);
  c.witness = std::move(witness);
  return c;
}

}  // namespace

OrderedJson Certificate::json() const {
  OrderedJson j;
  j["check"] = check;
  j["stage"] = stage;
  j["inputs_digest"] = inputs_digest;
  j["verdict"] = pass ? "pass" : "fail";
  j["values"] = values;
  j["witness"] = witness;
  return j;
}

bool Report::all_pass() const {
  return std::all_of(certs_.begin(), certs_.end(),
                     [](const Certificate& c) { return c.pass; });
}

void Report::print_table(std::ostream& out) const {
  out << std::left << std::setw(8) << "verdict" << std::setw(20) << "check" << std::setw(10)
      << "stage" << "detail\n";
  for (const auto& c : certs_) {
    std::string detail;
    if (!c.pass)
      detail = "witness: " + c.witness.dump();
    else if (!c.values.empty())
      detail = c.values.dump();
    if (detail.size() > 160) detail = detail.substr(0, 157) + "...";
    out << std::left << std::setw(8) << (c.pass ? "PASS" : "FAIL") << std::setw(20) << c.check
        << std::setw(10) << c.stage << detail << "\n";
  }
}

void Report::write_jsonl(std::ostream& out) const {
  for (const auto& c : certs_) out << c.json().dump() << "\n";
}

std::vector<Element> Case1View::points() const {
  std::vector<Element> pts;
  pts.reserve(2 * pairs.size());
  pts.push_back(pairs.front().x);
  for (std::size_t i = 1; i < pairs.size(); ++i) {
    pts.push_back(pairs[i].x);
    pts.push_back(pairs[i].y);
  }
  return pts;
}

std::vector<Element> Case2View::points() const {
  std::vector<Element> pts;
  for (const auto& b : blocks) {
    pts.push_back(b.x);
    if (!b.single()) pts.push_back(b.gx);
  }
  return pts;
}

Case1View view_of(const Case1Engine& engine) {
  return Case1View{&engine.instance(), engine.budget(), engine.pairs(), engine.zlist()};
}

Case2View view_of(const Case2Engine& engine) {
  return Case2View{&engine.instance(), engine.blocks()};
}

Case1View view_of_trace(const ParsedTrace& trace) {
  if (trace.case_no != 1) throw ContractViolation("not a case-1 trace");
  Case1View view;
  view.inst = trace.instance.get();
  view.budget = MeasureBudget::from_rule(trace.config.budget_rule);
  view.pairs.push_back(PairEntry{view.inst->identity(), view.inst->identity(), *trace.u0});
  for (const auto& rec : trace.case1_steps) {
    view.pairs.push_back(PairEntry{rec.x, rec.y, rec.u});
    for (const auto& z : rec.z_new) view.zlist.push_back(z);
  }
  return view;
}

Case2View view_of_trace_case2(const ParsedTrace& trace) {
  if (trace.case_no != 2) throw ContractViolation("not a case-2 trace");
  Case2View view;
  view.inst = trace.instance.get();
  for (const auto& rec : trace.case2_steps)
    view.blocks.push_back(Block{rec.x, rec.g, rec.gx});
  return view;
}

ElementSet brute_difference_set(const Instance& inst, std::span<const Element> points) {
  ElementSet diffs;
  for (const auto& a : points) {
    Element a_inv = inst.inverse(a);
    for (const auto& b : points) diffs.insert(inst.compose(b, a_inv));
  }
  return diffs;
}

namespace {

Certificate cover_impl(const Instance& inst, std::span<const Element> points, std::uint64_t k,
                       const char* name) {
  ElementSet diffs = brute_difference_set(inst, points);
  for (std::uint64_t i = 0; i <= k; ++i) {
    Element g = inst.element_at(Index(static_cast<unsigned long>(i)));
    if (!diffs.count(g)) {
      OrderedJson witness;
      witness["uncovered_index"] = i;
      witness["uncovered"] = inst.format(g);
      return make_fail(name, k, inst,
                       OrderedJson{{"points", points.size()}, {"differences", diffs.size()}},
                       std::move(witness));
    }
  }
  return make_pass(name, k, inst,
                   OrderedJson{{"points", points.size()},
                               {"differences", diffs.size()},
                               {"covered_prefix", k + 1}});
}

}  // namespace

Certificate check_cover(const Case1View& view, std::uint64_t k) {
  return cover_impl(*view.inst, view.points(), k, "cover");
}

Certificate check_cover(const Case2View& view) {
  const Instance& inst = *view.inst;
  for (std::size_t n = 0; n < view.blocks.size(); ++n) {
    const Block& b = view.blocks[n];
    Element gn = inst.element_at(Index(static_cast<unsigned long>(n)));
    if (!(b.g == gn))
      return make_fail("cover", n, inst, OrderedJson{{"blocks", view.blocks.size()}},
                       OrderedJson{{"block", n}, {"g", inst.format(b.g)},
                                   {"expected", inst.format(gn)}});
    if (!(inst.difference(b.gx, b.x) == b.g))
      return make_fail("cover", n, inst, OrderedJson{{"blocks", view.blocks.size()}},
                       OrderedJson{{"block", n},
                                   {"x", inst.format(b.x)},
                                   {"gx", inst.format(b.gx)},
                                   {"g", inst.format(b.g)}});
  }
  if (view.blocks.empty())
    return make_pass("cover", 0, inst, OrderedJson{{"blocks", 0}});
  auto points = view.points();
  return cover_impl(inst, points, view.blocks.size() - 1, "cover");
}

Certificate check_disjointness(const Case1View& view) {
  const Instance& inst = *view.inst;
  GeoCheck geo(inst);
  std::vector<Cell> xcells, ycells;
  for (const auto& p : view.pairs) xcells.push_back(Cell{p.x, p.u});
  for (const auto& p : view.pairs) ycells.push_back(Cell{p.y, p.u});
  std::uint64_t tested = 0;
  auto fail = [&](const char* fam, std::size_t i, std::size_t j, const Cell& a, const Cell& b) {
    OrderedJson witness;
    witness["family"] = fam;
    witness["i"] = i;
    witness["j"] = j;
    witness["cell_i"] = cell_json(inst, a.center, a.size);
    witness["cell_j"] = cell_json(inst, b.center, b.size);
    return make_fail("disjointness", std::max(i, j), inst,
                     OrderedJson{{"pairs", view.pairs.size()}, {"tested", tested}},
                     std::move(witness));
  };
  for (std::size_t i = 0; i < xcells.size(); ++i)
    for (std::size_t j = i + 1; j < xcells.size(); ++j) {
      ++tested;
      if (!geo.disjoint(xcells[i], xcells[j])) return fail("x", i, j, xcells[i], xcells[j]);
    }
  for (std::size_t i = 0; i < ycells.size(); ++i)
    for (std::size_t j = i + 1; j < ycells.size(); ++j) {
      ++tested;
      if (!geo.disjoint(ycells[i], ycells[j])) return fail("y", i, j, ycells[i], ycells[j]);
    }
  for (std::size_t i = 1; i < xcells.size(); ++i)
    for (std::size_t j = 1; j < ycells.size(); ++j) {
      ++tested;
      if (!geo.disjoint(xcells[i], ycells[j])) return fail("xy", i, j, xcells[i], ycells[j]);
    }
  return make_pass("disjointness", view.pairs.empty() ? 0 : view.pairs.size() - 1, inst,
                   OrderedJson{{"pairs", view.pairs.size()}, {"tested", tested}});
}

Certificate check_disjointness(const Case2View& view) {
  const Instance& inst = *view.inst;
  GeoCheck geo(inst);
  const CellSize& v = inst.escape_witness().v;
  std::vector<std::vector<Cell>> blocks;
  for (const auto& b : view.blocks) {
    std::vector<Cell> cells{Cell{b.x, v}};
    if (!b.single()) cells.push_back(Cell{b.gx, v});
    blocks.push_back(std::move(cells));
  }
  std::uint64_t tested = 0;
  for (std::size_t i = 0; i < blocks.size(); ++i)
    for (std::size_t j = i + 1; j < blocks.size(); ++j)
      for (const auto& ci : blocks[i])
        for (const auto& cj : blocks[j]) {
          ++tested;
          if (!geo.disjoint(ci, cj)) {
            OrderedJson witness;
            witness["block_i"] = i;
            witness["block_j"] = j;
            witness["cell_i"] = cell_json(inst, ci.center, ci.size);
            witness["cell_j"] = cell_json(inst, cj.center, cj.size);
            return make_fail("disjointness", j, inst,
                             OrderedJson{{"blocks", blocks.size()}, {"tested", tested}},
                             std::move(witness));
          }
        }
  return make_pass("disjointness", view.blocks.empty() ? 0 : view.blocks.size() - 1, inst,
                   OrderedJson{{"blocks", blocks.size()}, {"tested", tested}});
}

Certificate check_z_separation(const Case1View& view) {
  const Instance& inst = *view.inst;
  GeoCheck geo(inst);
  auto points = view.points();
  for (std::size_t j = 0; j < view.zlist.size(); ++j) {
    const ZEntry& entry = view.zlist[j];
    const Cell zcell{entry.z, entry.v};
    for (const auto& a : points) {
      if (geo.contains(zcell, a)) {
        OrderedJson witness;
        witness["z_index"] = j;
        witness["cell"] = cell_json(inst, entry.z, entry.v);
        witness["point_of_A"] = inst.format(a);
        return make_fail("z-separation", j, inst,
                         OrderedJson{{"z_entries", view.zlist.size()}}, std::move(witness));
      }
    }
    if (!geo.measure_below(entry.v, view.budget.cap(j).exp)) {
      OrderedJson witness;
      witness["z_index"] = j;
      witness["cell"] = cell_json(inst, entry.z, entry.v);
      witness["measure"] = rat_str(geo.ladder_measure(GeoCheck::ladder_level(entry.v)));
      witness["rate"] = rat_str(view.budget.rate(j));
      return make_fail("z-separation", j, inst,
                       OrderedJson{{"z_entries", view.zlist.size()}}, std::move(witness));
    }
  }
  return make_pass("z-separation", view.zlist.size(), inst,
                   OrderedJson{{"z_entries", view.zlist.size()}, {"points", points.size()}});
}

Certificate check_budget(const Case1View& view) {
  const Instance& inst = *view.inst;
  GeoCheck geo(inst);
  // Every cell strictly under its rate.
  for (std::size_t i = 0; i < view.pairs.size(); ++i) {
    if (!geo.measure_below(view.pairs[i].u, view.budget.cap(i).exp)) {
      OrderedJson witness;
      witness["pair"] = i;
      witness["measure"] =
          rat_str(geo.ladder_measure(GeoCheck::ladder_level(view.pairs[i].u)));
      witness["rate"] = rat_str(view.budget.rate(i));
      return make_fail("budget", i, inst, OrderedJson{{"pairs", view.pairs.size()}},
                       std::move(witness));
    }
  }
  for (std::size_t j = 0; j < view.zlist.size(); ++j) {
    if (!geo.measure_below(view.zlist[j].v, view.budget.cap(j).exp)) {
      OrderedJson witness;
      witness["z_index"] = j;
      return make_fail("budget", j, inst, OrderedJson{{"z_entries", view.zlist.size()}},
                       std::move(witness));
    }
  }
  // Exact total: group by level, accumulate in ascending level order.
  std::map<std::uint64_t, std::uint64_t> counts;
  counts[GeoCheck::ladder_level(view.pairs.front().u)] += 1;
  for (std::size_t i = 1; i < view.pairs.size(); ++i)
    counts[GeoCheck::ladder_level(view.pairs[i].u)] += 2;
  for (const auto& z : view.zlist) counts[GeoCheck::ladder_level(z.v)] += 1;
  UnitFractionSum total(geo.measure_base());
  for (const auto& [level, count] : counts) total.add_multiple(level, count);
  Rat value = total.value();
  OrderedJson values;
  values["cells"] = 2 * view.pairs.size() - 1 + view.zlist.size();
  values["total_measure"] = rat_str(value);
  if (!(value < make_rat(1, 2)))
    return make_fail("budget", view.pairs.size() - 1, inst, values,
                     OrderedJson{{"total_measure", rat_str(value)}, {"bound", "1/2"}});
  return make_pass("budget", view.pairs.size() - 1, inst, std::move(values));
}

Certificate check_separation(const Case2View& view) {
  const Instance& inst = *view.inst;
  GeoCheck geo(inst);
  auto points = view.points();
  std::uint64_t tested = 0;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      ++tested;
      CellSize s = inst.separation(points[i], points[j]);
      if (!geo.disjoint(Cell{points[i], s}, Cell{points[j], s})) {
        OrderedJson witness;
        witness["a"] = inst.format(points[i]);
        witness["b"] = inst.format(points[j]);
        witness["size"] = s.str();
        return make_fail("separation", j, inst, OrderedJson{{"points", points.size()}},
                         std::move(witness));
      }
    }
  return make_pass("separation", points.size(), inst,
                   OrderedJson{{"points", points.size()}, {"tested", tested}});
}

Certificate check_thin(const Instance& inst, std::span<const Element> points_n1,
                       std::span<const Element> points_n2, std::uint64_t first_k) {
  // Ordered-pair counts per target g: |{(a, b) : b a^-1 = g}|.
  auto counts_for = [&](std::span<const Element> pts, const ElementSet& targets) {
    ElementMap<std::uint64_t> counts;
    for (const auto& a : pts) {
      Element a_inv = inst.inverse(a);
      for (const auto& b : pts) {
        Element d = inst.compose(b, a_inv);
        if (targets.count(d)) ++counts[d];
      }
    }
    return counts;
  };
  ElementSet targets;
  std::vector<Element> glist;
  for (std::uint64_t i = 1; i <= first_k; ++i) {
    Element g = inst.element_at(Index(static_cast<unsigned long>(i)));
    targets.insert(g);
    glist.push_back(std::move(g));
  }
  auto c1 = counts_for(points_n1, targets);
  auto c2 = counts_for(points_n2, targets);
  OrderedJson values;
  values["first_k"] = first_k;
  values["points_n1"] = points_n1.size();
  values["points_n2"] = points_n2.size();
  OrderedJson table = OrderedJson::array();
  bool stable = true;
  Element first_bad;
  std::uint64_t bad1 = 0, bad2 = 0;
  for (const auto& g : glist) {
    const std::uint64_t a = c1.count(g) ? c1.at(g) : 0;
    const std::uint64_t b = c2.count(g) ? c2.at(g) : 0;
    OrderedJson row;
    row["g"] = inst.format(g);
    row["count_n1"] = a;
    row["count_n2"] = b;
    table.push_back(std::move(row));
    if (a != b && stable) {
      stable = false;
      first_bad = g;
      bad1 = a;
      bad2 = b;
    }
  }
  values["counts"] = std::move(table);
  if (!stable) {
    OrderedJson witness;
    witness["g"] = inst.format(first_bad);
    witness["count_n1"] = bad1;
    witness["count_n2"] = bad2;
    return make_fail("thin", first_k, inst, std::move(values), std::move(witness));
  }
  return make_pass("thin", first_k, inst, std::move(values));
}

// ---------------------------------------------------------------------------
// Trace verification
// ---------------------------------------------------------------------------

namespace {

void check_header_digest(const ParsedTrace& trace, Report& report) {
  const Instance& inst = *trace.instance;
  const std::string expected = config_digest(trace.config, trace.case_no);
  const std::string found = trace.header.at("config_digest").get<std::string>();
  if (found != expected) {
    report.add(make_fail("header", 1, inst,
                         OrderedJson{{"expected_digest", expected}},
                         OrderedJson{{"found_digest", found}}));
  } else {
    report.add(make_pass("header", 1, inst, OrderedJson{{"config_digest", found}}));
  }
}

void check_case1_relations(const ParsedTrace& trace, Report& report) {
  const Instance& inst = *trace.instance;
  std::uint64_t prev_target = 0;
  for (const auto& rec : trace.case1_steps) {
    if (rec.target_index == 0) {
      report.add(make_fail("pair-relation", rec.step, inst, OrderedJson{},
                           OrderedJson{{"target_index", 0},
                                       {"reason", "identity is never targeted"}}));
      return;
    }
    Element expected_target = inst.element_at(Index(static_cast<unsigned long>(rec.target_index)));
    if (!(expected_target == rec.target)) {
      report.add(make_fail("pair-relation", rec.step, inst, OrderedJson{},
                           OrderedJson{{"target", inst.format(rec.target)},
                                       {"element_at_index", inst.format(expected_target)}}));
      return;
    }
    if (rec.step > 1 && rec.target_index <= prev_target) {
      report.add(make_fail("pair-relation", rec.step, inst, OrderedJson{},
                           OrderedJson{{"target_index", rec.target_index},
                                       {"previous", prev_target}}));
      return;
    }
    prev_target = rec.target_index;
    if (!(inst.difference(rec.x, rec.y) == rec.target)) {
      report.add(make_fail("pair-relation", rec.step, inst, OrderedJson{},
                           OrderedJson{{"x", inst.format(rec.x)},
                                       {"y", inst.format(rec.y)},
                                       {"target", inst.format(rec.target)}}));
      return;
    }
  }
  report.add(make_pass("pair-relation", trace.case1_steps.size(), *trace.instance,
                       OrderedJson{{"steps", trace.case1_steps.size()}}));
}

void check_z_completeness(const Case1View& view, Report& report) {
  const Instance& inst = *view.inst;
  auto points = view.points();
  ElementSet a_set(points.begin(), points.end());
  ElementSet diffs = brute_difference_set(inst, points);
  ElementSet zset;
  for (const auto& z : view.zlist) {
    if (!zset.insert(z.z).second) {
      report.add(make_fail("z-completeness", 0, inst, OrderedJson{},
                           OrderedJson{{"duplicate_z", inst.format(z.z)}}));
      return;
    }
  }
  for (const auto& z : view.zlist) {
    if (a_set.count(z.z) || !diffs.count(z.z)) {
      report.add(make_fail("z-completeness", 0, inst, OrderedJson{},
                           OrderedJson{{"z", inst.format(z.z)},
                                       {"in_A", a_set.count(z.z) > 0},
                                       {"in_difference_set", diffs.count(z.z) > 0}}));
      return;
    }
  }
  for (const auto& d : diffs) {
    if (!a_set.count(d) && !zset.count(d)) {
      report.add(make_fail("z-completeness", 0, inst, OrderedJson{},
                           OrderedJson{{"missing_z", inst.format(d)}}));
      return;
    }
  }
  report.add(make_pass("z-completeness", view.zlist.size(), inst,
                       OrderedJson{{"z_entries", view.zlist.size()},
                                   {"differences", diffs.size()}}));
}

void check_measure_ledger(const ParsedTrace& trace, Report& report) {
  const Instance& inst = *trace.instance;
  GeoCheck geo(inst);
  UnitFractionSum cumulative(geo.measure_base());
  const std::uint64_t u0_level = GeoCheck::ladder_level(*trace.u0);
  cumulative.add(u0_level);
  if (!(geo.ladder_measure(u0_level) == *trace.init_measure)) {
    report.add(make_fail("measure-ledger", 0, inst, OrderedJson{},
                         OrderedJson{{"recorded", rat_str(*trace.init_measure)},
                                     {"recomputed", rat_str(geo.ladder_measure(u0_level))}}));
    return;
  }
  for (const auto& rec : trace.case1_steps) {
    UnitFractionSum step_sum(geo.measure_base());
    step_sum.add_multiple(GeoCheck::ladder_level(rec.u), 2);
    cumulative.add_multiple(GeoCheck::ladder_level(rec.u), 2);
    for (const auto& z : rec.z_new) {
      step_sum.add(GeoCheck::ladder_level(z.v));
      cumulative.add(GeoCheck::ladder_level(z.v));
    }
    if (!(step_sum.value() == rec.step_measure) ||
        !(cumulative.value() == rec.cumulative_measure)) {
      report.add(make_fail("measure-ledger", rec.step, inst, OrderedJson{},
                           OrderedJson{{"recorded_step", rat_str(rec.step_measure)},
                                       {"recomputed_step", rat_str(step_sum.value())},
                                       {"recorded_cumulative", rat_str(rec.cumulative_measure)},
                                       {"recomputed_cumulative", rat_str(cumulative.value())}}));
      return;
    }
  }
  report.add(make_pass("measure-ledger", trace.case1_steps.size(), inst,
                       OrderedJson{{"cumulative", rat_str(cumulative.value())}}));
}

void check_replay(const ParsedTrace& trace, const std::vector<std::string>& lines,
                  Report& report) {
  const Instance& inst = *trace.instance;
  std::vector<std::string> regenerated;
  regenerated.reserve(lines.size());
  try {
    MeasureBudget budget = MeasureBudget::from_rule(trace.config.budget_rule);
    if (trace.case_no == 1) {
      Case1Engine engine(inst, budget, trace.config.thin);
      regenerated.push_back(dump_line(trace_header(trace.config, inst, &engine)));
      for (std::uint64_t i = 0; i < trace.config.steps; ++i)
        regenerated.push_back(dump_line(case1_record(inst, engine.step())));
    } else {
      Case2Engine engine(inst, trace.config.thin);
      regenerated.push_back(dump_line(trace_header(trace.config, inst, nullptr)));
      for (std::uint64_t i = 0; i < trace.config.steps; ++i)
        regenerated.push_back(dump_line(case2_record(inst, engine.step())));
    }
  } catch (const std::exception& e) {
    report.add(make_fail("replay", 0, inst, OrderedJson{},
                         OrderedJson{{"engine_error", e.what()}}));
    return;
  }
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i] != regenerated[i]) {
      report.add(make_fail("replay", i + 1, inst, OrderedJson{{"lines", lines.size()}},
                           OrderedJson{{"line", i + 1},
                                       {"found", lines[i].substr(0, 200)},
                                       {"regenerated", regenerated[i].substr(0, 200)}}));
      return;
    }
  }
  report.add(make_pass("replay", lines.size(), inst, OrderedJson{{"lines", lines.size()}}));
}

}  // namespace

Report verify_trace(const std::vector<std::string>& lines) {
  Report report;
  ParsedTrace trace = parse_trace(lines);
  check_header_digest(trace, report);
  if (trace.case_no == 1) {
    Case1View view = view_of_trace(trace);
    check_case1_relations(trace, report);
    check_z_completeness(view, report);
    report.add(check_cover(view, trace.config.steps));
    report.add(check_disjointness(view));
    report.add(check_z_separation(view));
    report.add(check_budget(view));
    check_measure_ledger(trace, report);
  } else {
    Case2View view = view_of_trace_case2(trace);
    report.add(check_cover(view));
    report.add(check_disjointness(view));
    report.add(check_separation(view));
  }
  check_replay(trace, lines, report);
  return report;
}

// ---------------------------------------------------------------------------
// Mutation suite
// ---------------------------------------------------------------------------

std::vector<MutationKind> all_mutations() {
  return {MutationKind::CenterPerturb,   MutationKind::SizePerturb,
          MutationKind::MeasurePerturb,  MutationKind::DropZEntry,
          MutationKind::ReorderRecords,  MutationKind::TruncateMidLine,
          MutationKind::TruncateWholeRecord, MutationKind::HeaderTamper,
          MutationKind::CoverageTamper};
}

std::string mutation_name(MutationKind kind) {
  switch (kind) {
    case MutationKind::CenterPerturb: return "center-perturb";
    case MutationKind::SizePerturb: return "size-perturb";
    case MutationKind::MeasurePerturb: return "measure-perturb";
    case MutationKind::DropZEntry: return "drop-z-entry";
    case MutationKind::ReorderRecords: return "reorder-records";
    case MutationKind::TruncateMidLine: return "truncate-mid-line";
    case MutationKind::TruncateWholeRecord: return "truncate-whole-record";
    case MutationKind::HeaderTamper: return "header-tamper";
    case MutationKind::CoverageTamper: return "coverage-tamper";
  }
  return "unknown";
}

namespace {

std::vector<std::string> split_lines(const std::string& raw) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < raw.size()) {
    std::size_t end = raw.find('\n', start);
    if (end == std::string::npos) end = raw.size();
    if (end > start) lines.push_back(raw.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) {
    out += l;
    out += '\n';
  }
  return out;
}

OrderedJson parse_line_or_throw(const std::string& line) {
  OrderedJson j = OrderedJson::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    throw ContractViolation("mutation: line is not a JSON object");
  return j;
}

std::size_t first_record_with_z(const std::vector<std::string>& lines) {
  for (std::size_t i = 1; i < lines.size(); ++i) {
    OrderedJson j = parse_line_or_throw(lines[i]);
    if (j.contains("z_new") && !j.at("z_new").empty()) return i;
  }
  throw ContractViolation("mutation: trace has no record with z entries");
}

}  // namespace

std::string apply_mutation(const std::string& raw_trace, MutationKind kind) {
  std::vector<std::string> lines = split_lines(raw_trace);
  if (lines.size() < 3) throw ContractViolation("mutation: trace too short");
  switch (kind) {
    case MutationKind::CenterPerturb: {
      OrderedJson j = parse_line_or_throw(lines[1]);
      j["U"]["center"] = j.at("y");
      lines[1] = j.dump();
      return join_lines(lines);
    }
    case MutationKind::SizePerturb: {
      OrderedJson j = parse_line_or_throw(lines[1]);
      CellSize s = CellSize::parse(j.at("U").at("size").get<std::string>());
      s.level = s.level > 0 ? s.level - 1 : s.level + 1;
      j["U"]["size"] = s.str();
      lines[1] = j.dump();
      return join_lines(lines);
    }
    case MutationKind::MeasurePerturb: {
      OrderedJson j = parse_line_or_throw(lines.back());
      Rat m = rat_parse(j.at("measures").at("cumulative").get<std::string>());
      Rat bumped = make_rat(m.get_num() + m.get_den(), m.get_den());
      j["measures"]["cumulative"] = rat_str(bumped);
      lines.back() = j.dump();
      return join_lines(lines);
    }
    case MutationKind::DropZEntry: {
      const std::size_t i = first_record_with_z(lines);
      OrderedJson j = parse_line_or_throw(lines[i]);
      auto& zs = j.at("z_new");
      zs.erase(zs.size() - 1);
      lines[i] = j.dump();
      return join_lines(lines);
    }
    case MutationKind::ReorderRecords: {
      std::swap(lines[1], lines[2]);
      return join_lines(lines);
    }
    case MutationKind::TruncateMidLine: {
      std::string out = join_lines(lines);
      return out.substr(0, out.size() - lines.back().size() / 2 - 1);
    }
    case MutationKind::TruncateWholeRecord: {
      lines.pop_back();
      return join_lines(lines);
    }
    case MutationKind::HeaderTamper: {
      OrderedJson j = parse_line_or_throw(lines[0]);
      j["thin"] = !j.at("thin").get<bool>();
      lines[0] = j.dump();
      return join_lines(lines);
    }
    case MutationKind::CoverageTamper: {
      OrderedJson j = parse_line_or_throw(lines[1]);
      j["target_index"] = j.at("target_index").get<std::uint64_t>() + 1;
      lines[1] = j.dump();
      return join_lines(lines);
    }
  }
  throw ContractViolation("unknown mutation");
}

}  // namespace diffcover
