#include <array>
#include <algorithm>

#include "diffcover/instance.hpp"
#include "instances.hpp"

namespace diffcover {

// Default implementations for instance families the operation does not
// apply to; concrete instances override what they support.

Rat Instance::cell_measure(const Cell&) const {
  throw ContractViolation("cell_measure: instance is not precompact");
}

std::uint64_t Instance::min_rank_measure_below(DyadicCap) const {
  throw ContractViolation("instance has no size ladder");
}

std::uint64_t Instance::min_rank_avoiding_cells(const Element&, std::span<const Cell>) const {
  throw ContractViolation("instance has no size ladder");
}

std::uint64_t Instance::min_rank_separating(const Element&, const Element&) const {
  throw ContractViolation("instance has no size ladder");
}

std::uint64_t Instance::min_rank_avoiding_points(const Element&,
                                                 std::span<const Element>) const {
  throw ContractViolation("instance has no size ladder");
}

const EscapeWitness& Instance::escape_witness() const {
  throw ContractViolation("escape witness: instance is precompact");
}

Element Instance::escape(std::span<const Element>) const {
  throw ContractViolation("escape: instance is precompact");
}

std::optional<std::pair<Element, Index>> Instance::least_admissible_block(
    const Element&, std::span<const Cell>, const ElementSet&) const {
  return std::nullopt;
}

namespace {

constexpr std::array<unsigned, 25> kSupportedPrimes = {
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47,
    53, 59, 61, 67, 71, 73, 79, 83, 89, 97};

}  // namespace

std::unique_ptr<Instance> make_instance(const InstanceConfig& config) {
  if (config.name == "z-in-zp") {
    if (!config.p) throw ConfigError("z-in-zp requires --p <prime>");
    const unsigned p = *config.p;
    if (std::find(kSupportedPrimes.begin(), kSupportedPrimes.end(), p) ==
        kSupportedPrimes.end())
      throw ConfigError("p must be prime and at most 97, got " + std::to_string(p));
    return make_z_in_zp(p);
  }
  if (config.p)
    throw ConfigError("--p applies only to z-in-zp");
  if (config.name == "golden-rotation") return make_golden_rotation();
  if (config.name == "q-usual") return make_q_usual();
  if (config.name == "z-discrete") return make_z_discrete();
  if (config.name == "f2-discrete") return make_f2_discrete();
  throw ConfigError("unknown instance: " + config.name);
}

}  // namespace diffcover
