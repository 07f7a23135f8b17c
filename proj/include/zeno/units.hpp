#pragma once

#include <numbers>

namespace zeno {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Config and CSV values are cyclic MHz; everything inside the library is rad/us.
constexpr double to_angular(double cyclic_mhz) { return kTwoPi * cyclic_mhz; }
constexpr double to_cyclic(double rad_per_us) { return rad_per_us / kTwoPi; }

}  // namespace zeno
