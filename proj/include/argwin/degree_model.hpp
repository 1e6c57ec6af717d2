#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "argwin/errors.hpp"
#include "argwin/rng.hpp"

namespace argwin {

// In-degree distributions used by the recurrence solver and the
// homogeneous tree generator.
//
//  - Poisson(lambda):      p(k) = e^-lambda lambda^k / k!
//  - PowerLaw(alpha,kmin): p(k) = k^-alpha / (zeta(alpha) - sum_{k<kmin} k^-alpha),
//                          support k >= kmin
//  - Empirical(histogram): arbitrary finite pmf
class DegreeModel {
public:
    struct Poisson {
        double lambda;
    };
    struct PowerLaw {
        double alpha;
        int k_min;
    };
    struct Empirical {
        std::vector<std::pair<int, double>> pmf;  // sorted by k
    };

    static DegreeModel poisson(double lambda);
    static DegreeModel power_law(double alpha, int k_min);
    static DegreeModel empirical(std::vector<std::pair<int, double>> histogram);

    double pmf(int k) const;
    double leaf_probability() const { return pmf(0); }

    // E[x^K] for x in [0,1]. Infinite-support series are truncated once the
    // remaining mass (or the geometric bound on the remainder) drops below
    // 1e-12; `terms_used` reports the truncation point.
    double pgf(double x, long* terms_used = nullptr) const;

    // Draw one in-degree. Poisson inverts by sequential search; PowerLaw and
    // Empirical invert a precomputed cumulative table.
    int sample(rng::Stream& stream) const;

    std::string describe() const;

    const Poisson* as_poisson() const { return std::get_if<Poisson>(&model_); }
    const PowerLaw* as_power_law() const { return std::get_if<PowerLaw>(&model_); }
    const Empirical* as_empirical() const { return std::get_if<Empirical>(&model_); }

private:
    DegreeModel() = default;

    std::variant<Poisson, PowerLaw, Empirical> model_;
    // Inverse-CDF table for PowerLaw/Empirical sampling; cdf_[i] is the
    // cumulative mass of k = first_k_ + i.
    std::vector<double> cdf_;
    int first_k_ = 0;
    double normalizer_ = 1.0;  // PowerLaw Z
};

// Sample count values from a discrete power law; oracle helper for the
// fitter and generator tests.
std::vector<int> sample_power_law(double alpha, int k_min, long count, rng::Stream& stream);

} // namespace argwin
