#include "diffcover/enumeration.hpp"
#include "diffcover/instance.hpp"
#include "instances.hpp"

namespace diffcover {

namespace {

constexpr std::uint64_t kEscapeScanGuard = 200000000ull;

// Shared scaffolding for the discrete instances: cells are singletons, the
// escape witness is U = V = {e}, and escape(F) is a plain enumeration scan
// since FU = F.
class DiscreteInstance : public Instance {
 public:
  explicit DiscreteInstance(GroupDescriptor desc)
      : Instance(std::move(desc)), witness_{CellSize::singleton(), CellSize::singleton()} {}

  CellSize separation(const Element& a, const Element& b) const override {
    if (a == b) throw ContractViolation("separation: equal points");
    return CellSize::singleton();
  }

  bool cell_contains(const Cell& cell, const Element& point) const override {
    require_singleton(cell.size);
    return cell.center == point;
  }

  bool cells_disjoint(const Cell& c1, const Cell& c2) const override {
    require_singleton(c1.size);
    require_singleton(c2.size);
    return !(c1.center == c2.center);
  }

  const EscapeWitness& escape_witness() const override { return witness_; }

  Element escape(std::span<const Element> finite_set) const override {
    ElementSet blocked;
    for (const auto& f : finite_set) blocked.insert(f);
    for (std::uint64_t i = 0; i < kEscapeScanGuard; ++i) {
      Element g = element_at(Index(static_cast<unsigned long>(i)));
      if (!blocked.count(g)) return g;
    }
    throw std::logic_error("escape: scan guard exhausted");
  }

 private:
  static void require_singleton(const CellSize& s) {
    if (s.kind != CellSize::Kind::Singleton)
      throw ContractViolation("discrete cells are singletons");
  }

  EscapeWitness witness_;
};

class ZDiscreteInstance final : public DiscreteInstance {
 public:
  ZDiscreteInstance()
      : DiscreteInstance(GroupDescriptor{"z-discrete", CaseTag::NonPrecompact,
                                         Family::DiscretePoints, "zigzag",
                                         "not precompact; discrete topology on Z",
                                         std::nullopt}) {
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
};

class F2DiscreteInstance final : public DiscreteInstance {
 public:
  F2DiscreteInstance()
      : DiscreteInstance(GroupDescriptor{"f2-discrete", CaseTag::NonPrecompact,
                                         Family::DiscretePoints, "length-lex",
                                         "not precompact; discrete topology on F2",
                                         std::nullopt}) {
    set_identity(Element(Word()));
  }

  Element element_at(const Index& i) const override { return Element(f2_at(i)); }
  Index index_of(const Element& x) const override { return f2_index(as_word(x)); }
  Element compose(const Element& a, const Element& b) const override {
    return Element(f2_compose(as_word(a), as_word(b)));
  }
  Element inverse(const Element& a) const override {
    return Element(f2_inverse(as_word(a)));
  }

  std::string format(const Element& x) const override { return as_word(x); }
  Element parse(std::string_view s) const override {
    Word w(s);
    if (!f2_is_reduced(w)) throw ConfigError("word is not reduced: " + w);
    return Element(std::move(w));
  }
};

}  // namespace

std::unique_ptr<Instance> make_z_discrete() {
  return std::make_unique<ZDiscreteInstance>();
}

std::unique_ptr<Instance> make_f2_discrete() {
  return std::make_unique<F2DiscreteInstance>();
}

}  // namespace diffcover
