#pragma once

#include <numbers>

namespace mertenslab::constants {

// Euler-Mascheroni constant, 20 significant digits.
inline constexpr double euler_gamma = 0.57721566490153286061;

// Meissel-Mertens constant as quoted to ten decimals in the literature.
inline constexpr double meissel_mertens = 0.2614972128;

inline constexpr double log2 = std::numbers::ln2;
inline constexpr double pi_squared_over_6 = std::numbers::pi * std::numbers::pi / 6.0;
inline constexpr double pi_fourth_over_90 =
    std::numbers::pi * std::numbers::pi * std::numbers::pi * std::numbers::pi / 90.0;

}  // namespace mertenslab::constants
