#pragma once

#include <cmath>

// Reference values computed outside the library.
namespace oracle {
// Smooth fit for the zero-sum example reduces to l^2 - l + 0.2 = 0 with r = 1 - l.
inline const double zero_sum_l = (1.0 - std::sqrt(0.2)) / 2.0;
inline const double zero_sum_r = 1.0 - zero_sum_l;
// Brute-force alternating best responses (dense grid plus bounded scalar search) in Python.
constexpr double global_stable_l = 0.051413089625;
constexpr double global_stable_r = 0.935293037767;
constexpr double g2_l1 = 0.2698916602;
constexpr double g2_l2 = 0.4096978899;
constexpr double g2_r = 0.7696149866;
constexpr double g2_middle_utility = 1.613419;
}  // namespace oracle
