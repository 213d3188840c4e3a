#include "diffcover/element.hpp"

#include <functional>

namespace diffcover {

std::size_t hash_int(const Int& v) {
  // Residue mod a large prime mixes all limbs; sign folded in separately.
  const unsigned long r = mpz_fdiv_ui(v.get_mpz_t(), 2147483647ul);
  std::size_t h = std::hash<unsigned long>{}(r);
  if (sgn(v) < 0) h = ~h;
  return h;
}

std::size_t hash_rat(const Rat& v) {
  std::size_t h = hash_int(Int(v.get_num()));
  h ^= hash_int(Int(v.get_den())) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}

std::size_t ElementHash::operator()(const Element& e) const {
  switch (e.index()) {
    case 0:
      return hash_int(std::get<Int>(e));
    case 1:
      return hash_rat(std::get<Rat>(e)) ^ 0x517cc1b727220a95ull;
    default:
      return std::hash<Word>{}(std::get<Word>(e)) ^ 0x2545f4914f6cdd1dull;
  }
}

}  // namespace diffcover
