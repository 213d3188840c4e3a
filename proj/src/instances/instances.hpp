#pragma once

#include <memory>

#include "diffcover/instance.hpp"

namespace diffcover {

std::unique_ptr<Instance> make_z_in_zp(unsigned p);
std::unique_ptr<Instance> make_golden_rotation();
std::unique_ptr<Instance> make_q_usual();
std::unique_ptr<Instance> make_z_discrete();
std::unique_ptr<Instance> make_f2_discrete();

}  // namespace diffcover
