#include "argwin/numeric.hpp"

#include <cassert>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace argwin::numeric {

double riemann_zeta(double s) {
    assert(s > 1.0);
    constexpr int M = 32;
    double total = 0.0;
    for (int n = 1; n < M; ++n)
        total += std::pow(static_cast<double>(n), -s);
    const double m = static_cast<double>(M);
    total += std::pow(m, 1.0 - s) / (s - 1.0);
    total += 0.5 * std::pow(m, -s);
    // Bernoulli correction terms B2, B4, B6, B8.
    total += (1.0 / 12.0) * s * std::pow(m, -s - 1.0);
    total += (-1.0 / 720.0) * s * (s + 1.0) * (s + 2.0) * std::pow(m, -s - 3.0);
    total += (1.0 / 30240.0) * s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) *
             std::pow(m, -s - 5.0);
    total += (-1.0 / 1209600.0) * s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) *
             (s + 5.0) * (s + 6.0) * std::pow(m, -s - 7.0);
    return total;
}

double truncated_zeta(double alpha, int k_min) {
    double z = riemann_zeta(alpha);
    for (int k = 1; k < k_min; ++k)
        z -= std::pow(static_cast<double>(k), -alpha);
    return z;
}

std::string format_double(double value) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

double clamp_probability(double value, [[maybe_unused]] double slack) {
    if (value < 0.0) {
        assert(value > -slack);
        return 0.0;
    }
    if (value > 1.0) {
        assert(value < 1.0 + slack);
        return 1.0;
    }
    return value;
}

} // namespace argwin::numeric
