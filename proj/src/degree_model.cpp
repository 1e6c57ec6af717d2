#include "argwin/degree_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "argwin/numeric.hpp"

namespace argwin {

namespace {

constexpr double kSeriesTailBound = 1e-12;
constexpr size_t kMaxTableSize = 1 << 16;

} // namespace

DegreeModel DegreeModel::poisson(double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw Error(ErrorCode::invalid_parameter, "Poisson lambda must be finite and > 0");
    DegreeModel m;
    m.model_ = Poisson{lambda};
    return m;
}

DegreeModel DegreeModel::power_law(double alpha, int k_min) {
    if (!(alpha > 1.0) || !std::isfinite(alpha))
        throw Error(ErrorCode::invalid_parameter, "power-law alpha must be > 1");
    if (k_min < 1)
        throw Error(ErrorCode::invalid_parameter, "power-law k_min must be >= 1");
    DegreeModel m;
    m.model_ = PowerLaw{alpha, k_min};
    m.normalizer_ = numeric::truncated_zeta(alpha, k_min);
    m.first_k_ = k_min;
    // Cumulative table until the analytic tail bound dips below 1e-10 or
    // the table cap is hit; draws past the end land on the last entry.
    double cum = 0.0;
    for (int k = k_min; m.cdf_.size() < kMaxTableSize; ++k) {
        cum += std::pow(static_cast<double>(k), -alpha) / m.normalizer_;
        m.cdf_.push_back(cum);
        const double tail =
            std::pow(static_cast<double>(k), 1.0 - alpha) / ((alpha - 1.0) * m.normalizer_);
        if (tail < 1e-10) break;
    }
    return m;
}

DegreeModel DegreeModel::empirical(std::vector<std::pair<int, double>> histogram) {
    if (histogram.empty())
        throw Error(ErrorCode::invalid_parameter, "empirical histogram is empty");
    std::sort(histogram.begin(), histogram.end());
    double total = 0.0;
    for (auto& [k, p] : histogram) {
        if (k < 0 || p < 0.0)
            throw Error(ErrorCode::invalid_parameter, "empirical histogram entries must be k >= 0, p >= 0");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw Error(ErrorCode::invalid_parameter, "empirical probabilities must sum to 1");
    for (auto& [k, p] : histogram) p /= total;

    DegreeModel m;
    double cum = 0.0;
    for (auto& [k, p] : histogram) {
        cum += p;
        m.cdf_.push_back(cum);
    }
    m.first_k_ = histogram.front().first;
    m.model_ = Empirical{std::move(histogram)};
    return m;
}

double DegreeModel::pmf(int k) const {
    if (k < 0) return 0.0;
    if (const auto* p = as_poisson()) {
        // e^-lambda lambda^k / k! computed iteratively in log-free form.
        double value = std::exp(-p->lambda);
        for (int i = 1; i <= k; ++i) value *= p->lambda / static_cast<double>(i);
        return value;
    }
    if (const auto* pl = as_power_law()) {
        if (k < pl->k_min) return 0.0;
        return std::pow(static_cast<double>(k), -pl->alpha) / normalizer_;
    }
    const auto& pmf = as_empirical()->pmf;
    auto it = std::lower_bound(pmf.begin(), pmf.end(), std::make_pair(k, -1.0));
    if (it != pmf.end() && it->first == k) return it->second;
    return 0.0;
}

double DegreeModel::pgf(double x, long* terms_used) const {
    if (x < 0.0 || x > 1.0 + 1e-12)
        throw Error(ErrorCode::invalid_probability, "pgf argument outside [0,1]");
    x = std::min(x, 1.0);
    if (x == 1.0) {
        if (terms_used) *terms_used = 0;
        return 1.0;
    }

    if (const auto* e = as_empirical()) {
        double total = 0.0;
        for (auto [k, p] : e->pmf) total += p * std::pow(x, k);
        if (terms_used) *terms_used = static_cast<long>(e->pmf.size());
        return total;
    }

    // Series sum_k x^k p(k); stop once the remaining pmf mass, scaled by the
    // current power of x, is below the tail bound (the remainder is at most
    // mass_left * x^k for x < 1).
    double total = 0.0;
    double mass_left = 1.0;
    long k = 0;
    double x_pow = 1.0;
    const int start = as_power_law() ? as_power_law()->k_min : 0;
    for (k = 0; k < start; ++k) x_pow *= x;
    constexpr long kMaxTerms = 5000000;
    for (; k < kMaxTerms; ++k) {
        const double p = pmf(static_cast<int>(k));
        total += x_pow * p;
        mass_left -= p;
        if (mass_left * x_pow < kSeriesTailBound) break;
        x_pow *= x;
    }
    if (k == kMaxTerms) total += 0.5 * mass_left * x_pow;  // split the remainder bound
    if (terms_used) *terms_used = k;
    return numeric::clamp_probability(total, 1e-9);
}

int DegreeModel::sample(rng::Stream& stream) const {
    if (const auto* p = as_poisson()) {
        const double u = stream.next_unit();
        double prob = std::exp(-p->lambda);
        double cum = prob;
        int k = 0;
        const int cap = static_cast<int>(p->lambda + 60.0 * std::sqrt(p->lambda) + 60.0);
        while (u >= cum && k < cap) {
            ++k;
            prob *= p->lambda / static_cast<double>(k);
            cum += prob;
        }
        return k;
    }
    const double u = stream.next_unit();
    auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) --it;  // sub-1e-10 tail collapses onto the last entry
    return first_k_ + static_cast<int>(it - cdf_.begin());
}

std::string DegreeModel::describe() const {
    std::ostringstream out;
    if (const auto* p = as_poisson())
        out << "poisson(lambda=" << numeric::format_double(p->lambda) << ")";
    else if (const auto* pl = as_power_law())
        out << "powerlaw(alpha=" << numeric::format_double(pl->alpha)
            << ",k_min=" << pl->k_min << ")";
    else
        out << "empirical(" << as_empirical()->pmf.size() << " bins)";
    return out.str();
}

std::vector<int> sample_power_law(double alpha, int k_min, long count, rng::Stream& stream) {
    const DegreeModel model = DegreeModel::power_law(alpha, k_min);
    std::vector<int> out;
    out.reserve(static_cast<size_t>(count));
    for (long i = 0; i < count; ++i) out.push_back(model.sample(stream));
    return out;
}

} // namespace argwin
