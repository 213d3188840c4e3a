#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <variant>

#include "diffcover/numbers.hpp"

namespace diffcover {

/// Reduced word over {a, a^-1, b, b^-1}, stored as letters a, A, b, B.
/// The empty string is the identity.
using Word = std::string;

/// Canonical element of one concrete group instance. Which alternative is
/// live is fixed per instance: Int for the integer-backed groups (including
/// the rotation, whose circle embedding lives in the geometry), Rat for the
/// rationals, Word for the free group. Equality is structural on the
/// canonical value; mixing elements of different instances is a contract
/// violation the instances cannot detect for same-typed values.
using Element = std::variant<Int, Rat, Word>;

/// Enumeration index. Indices stay tiny in constructions over the integer
/// groups but reach hundreds of bits for rationals picked deep in the
/// Calkin-Wilf order, so this is a big integer.
using Index = mpz_class;

inline bool holds_int(const Element& e) { return std::holds_alternative<Int>(e); }
inline bool holds_rat(const Element& e) { return std::holds_alternative<Rat>(e); }
inline bool holds_word(const Element& e) { return std::holds_alternative<Word>(e); }

inline const Int& as_int(const Element& e) {
  if (!holds_int(e)) throw ContractViolation("element is not integer-valued");
  return std::get<Int>(e);
}
inline const Rat& as_rat(const Element& e) {
  if (!holds_rat(e)) throw ContractViolation("element is not rational-valued");
  return std::get<Rat>(e);
}
inline const Word& as_word(const Element& e) {
  if (!holds_word(e)) throw ContractViolation("element is not a word");
  return std::get<Word>(e);
}

std::size_t hash_int(const Int& v);
std::size_t hash_rat(const Rat& v);

struct ElementHash {
  std::size_t operator()(const Element& e) const;
};

using ElementSet = std::unordered_set<Element, ElementHash>;

template <typename V>
using ElementMap = std::unordered_map<Element, V, ElementHash>;

}  // namespace diffcover
