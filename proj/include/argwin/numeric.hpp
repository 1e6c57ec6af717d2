#pragma once

#include <string>

namespace argwin::numeric {

// Riemann zeta for real s > 1, Euler-Maclaurin accelerated partial sums.
// Relative error is near machine epsilon for s in (1, 30].
double riemann_zeta(double s);

// Normalizer of the discrete power law on k >= k_min:
//   Z = zeta(alpha) - sum_{k=1}^{k_min-1} k^-alpha.
double truncated_zeta(double alpha, int k_min);

// Locale-independent shortest round-trip formatting ('.' decimal always).
std::string format_double(double value);

// Clamps to [0,1]; the excess beyond the bound must stay within `slack`
// (arithmetic noise), otherwise this aborts via assert in debug builds.
double clamp_probability(double value, double slack = 1e-12);

} // namespace argwin::numeric
