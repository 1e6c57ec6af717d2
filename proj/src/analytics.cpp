#include "argwin/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "argwin/numeric.hpp"

namespace argwin {

namespace {

void check_q(double q) {
    if (!(q >= 0.0 && q <= 1.0))
        throw Error(ErrorCode::invalid_probability, "q must lie in [0,1]");
}

double mix(double q, double p_next) { return q * p_next + (1.0 - q) * (1.0 - p_next); }

} // namespace

const char* to_string(ProfileVariant v) {
    switch (v) {
    case ProfileVariant::full: return "full";
    case ProfileVariant::leaf_removed: return "leaf_removed";
    case ProfileVariant::upper_bound: return "upper_bound";
    case ProfileVariant::lower_bound: return "lower_bound";
    }
    return "full";
}

std::optional<double> LevelProbabilityProfile::at(int level) const {
    for (const auto& [h, p] : values)
        if (h == level) return p;
    return std::nullopt;
}

double LevelProbabilityProfile::interior_amplitude() const {
    // Pairs among levels 0..depth-1 only, so the jump to the forced p_N = 1
    // never enters and full/leaf-removed profiles compare like for like.
    double amplitude = 0.0;
    for (int h = 0; h + 1 <= depth - 1; ++h) {
        const auto a = at(h);
        const auto b = at(h + 1);
        if (a && b) amplitude = std::max(amplitude, std::abs(*a - *b));
    }
    return amplitude;
}

bool LevelProbabilityProfile::constant_one(double tol) const {
    for (const auto& [h, p] : values)
        if (std::abs(p - 1.0) > tol) return false;
    return true;
}

std::string LevelProbabilityProfile::to_csv() const {
    std::ostringstream out;
    out << "variant,level,distance_from_max,p\n";
    for (const auto& [h, p] : values)
        out << to_string(variant) << ',' << h << ',' << depth - h << ','
            << numeric::format_double(p) << '\n';
    return out.str();
}

std::string LevelProbabilityProfile::to_json() const {
    nlohmann::json values_json = nlohmann::json::array();
    for (const auto& [h, p] : values)
        values_json.push_back({{"level", h}, {"distance_from_max", depth - h}, {"p", p}});
    return nlohmann::json{{"variant", to_string(variant)},
                          {"depth", depth},
                          {"series_terms", series_terms},
                          {"values", std::move(values_json)}}
        .dump(2);
}

LevelProbabilityProfile solve_recurrence(const DegreeModel& model, int depth, double q) {
    check_q(q);
    if (depth < 1)
        throw Error(ErrorCode::invalid_parameter, "depth must be >= 1");

    LevelProbabilityProfile profile;
    profile.variant = ProfileVariant::full;
    profile.depth = depth;
    std::vector<double> p(static_cast<size_t>(depth) + 1, 0.0);
    p[static_cast<size_t>(depth)] = 1.0;
    for (int h = depth - 1; h >= 0; --h) {
        long terms = 0;
        const double rho = mix(q, p[static_cast<size_t>(h + 1)]);
        p[static_cast<size_t>(h)] =
            numeric::clamp_probability(model.pgf(numeric::clamp_probability(rho), &terms));
        profile.series_terms = std::max(profile.series_terms, terms);
    }
    for (int h = 0; h <= depth; ++h)
        profile.values.emplace_back(h, p[static_cast<size_t>(h)]);
    return profile;
}

LevelProbabilityProfile poisson_recurrence_closed_form(double lambda, int depth, double q) {
    check_q(q);
    LevelProbabilityProfile profile;
    profile.variant = ProfileVariant::full;
    profile.depth = depth;
    std::vector<double> p(static_cast<size_t>(depth) + 1, 0.0);
    p[static_cast<size_t>(depth)] = 1.0;
    for (int h = depth - 1; h >= 0; --h)
        p[static_cast<size_t>(h)] =
            std::exp(-lambda * (1.0 - mix(q, p[static_cast<size_t>(h + 1)])));
    for (int h = 0; h <= depth; ++h)
        profile.values.emplace_back(h, p[static_cast<size_t>(h)]);
    return profile;
}

namespace {

LevelProbabilityProfile solve_no_leaves_impl(std::span<const DegreeModel> per_level,
                                             double q) {
    check_q(q);
    const int depth = static_cast<int>(per_level.size());
    if (depth < 1)
        throw Error(ErrorCode::missing_leaf_profile,
                    "leaf-removed recurrence needs at least one level model");

    LevelProbabilityProfile profile;
    profile.variant = ProfileVariant::leaf_removed;
    profile.depth = depth;
    std::vector<double> p(static_cast<size_t>(depth), 0.0);
    double p_next = 1.0;       // unused at the first step: the level below N is all leaves
    double leaf_next = 1.0;    // p(0|N) = 1
    for (int h = depth - 1; h >= 0; --h) {
        const DegreeModel& model = per_level[static_cast<size_t>(h)];
        const double leaf_here = model.leaf_probability();
        if (leaf_here >= 1.0)
            throw Error(ErrorCode::missing_leaf_profile,
                        "level " + std::to_string(h) + " has leaf probability 1");
        const double child_win = leaf_next + (1.0 - leaf_next) * p_next;
        const double rho = numeric::clamp_probability(mix(q, child_win));
        long terms = 0;
        // sum_{k>=1} rho^k p(k) = pgf(rho) - p(0), normalized to the
        // non-leaf population.
        const double series = model.pgf(rho, &terms) - leaf_here;
        p[static_cast<size_t>(h)] =
            numeric::clamp_probability(series / (1.0 - leaf_here), 1e-9);
        profile.series_terms = std::max(profile.series_terms, terms);
        p_next = p[static_cast<size_t>(h)];
        leaf_next = leaf_here;
    }
    for (int h = 0; h < depth; ++h)
        profile.values.emplace_back(h, p[static_cast<size_t>(h)]);
    return profile;
}

} // namespace

LevelProbabilityProfile solve_recurrence_no_leaves(const DegreeModel& model, int depth,
                                                   double q) {
    if (depth < 1)
        throw Error(ErrorCode::invalid_parameter, "depth must be >= 1");
    std::vector<DegreeModel> per_level(static_cast<size_t>(depth), model);
    return solve_no_leaves_impl(per_level, q);
}

LevelProbabilityProfile solve_recurrence_no_leaves(std::span<const DegreeModel> per_level,
                                                   double q) {
    return solve_no_leaves_impl(per_level, q);
}

const char* to_string(Regime r) {
    switch (r) {
    case Regime::oscillatory: return "oscillatory";
    case Regime::flat: return "flat";
    case Regime::monotone_decay: return "monotone_decay";
    }
    return "flat";
}

std::string RegimeReport::to_json() const {
    nlohmann::json order = nlohmann::json::array();
    for (const auto& entry : recommended_order) {
        nlohmann::json item{{"key", entry.key}};
        item["p"] = entry.p ? nlohmann::json(*entry.p) : nlohmann::json(nullptr);
        order.push_back(std::move(item));
    }
    return nlohmann::json{{"q", q},
                          {"regime", to_string(regime)},
                          {"index", keys_are_levels ? "level" : "distance_from_max"},
                          {"order", std::move(order)}}
        .dump(2);
}

RegimeReport classify_regime(double q, double epsilon, int depth) {
    check_q(q);
    RegimeReport report;
    report.q = q;
    report.keys_are_levels = true;

    auto push_levels = [&](auto&& accept) {
        for (int d = 0; d <= depth; ++d)
            if (accept(d)) report.recommended_order.push_back({depth - d, std::nullopt});
    };

    if (std::abs(q - 0.5) <= epsilon) {
        report.regime = Regime::flat;
        // No special order beyond the guaranteed-winning deepest level.
        push_levels([](int) { return true; });
    } else if (q < 0.5) {
        report.regime = Regime::oscillatory;
        push_levels([](int d) { return d % 2 == 0; });
        push_levels([](int d) { return d % 2 == 1; });
    } else {
        report.regime = Regime::monotone_decay;
        push_levels([](int) { return true; });
    }
    return report;
}

double regime_epsilon_for_estimate(double q_hat, long edge_count) {
    if (edge_count <= 0)
        throw Error(ErrorCode::no_edges, "regime tolerance needs at least one edge");
    return 1.96 * std::sqrt(q_hat * (1.0 - q_hat) / static_cast<double>(edge_count));
}

double CobwebTrace::oscillation_amplitude() const {
    double amplitude = 0.0;
    double previous = 1.0;
    for (const auto& [x, y] : points) {
        amplitude = std::max(amplitude, std::abs(y - previous));
        previous = y;
    }
    return amplitude;
}

std::string CobwebTrace::to_csv() const {
    std::ostringstream out;
    out << "x,y\n";
    for (const auto& [x, y] : points)
        out << numeric::format_double(x) << ',' << numeric::format_double(y) << '\n';
    return out.str();
}

std::string CobwebTrace::to_json() const {
    nlohmann::json points_json = nlohmann::json::array();
    for (const auto& [x, y] : points) points_json.push_back({x, y});
    return nlohmann::json{{"leaf_probability", leaf_probability},
                          {"q", q},
                          {"points", std::move(points_json)}}
        .dump(2);
}

BoundProfiles bound_profiles(double leaf_probability, int depth, double q) {
    check_q(q);
    if (!(leaf_probability >= 0.0 && leaf_probability < 1.0))
        throw Error(ErrorCode::invalid_probability, "leaf probability must lie in [0,1)");
    if (depth < 1)
        throw Error(ErrorCode::invalid_parameter, "depth must be >= 1");

    BoundProfiles out;
    out.trace.leaf_probability = leaf_probability;
    out.trace.q = q;
    out.upper.variant = ProfileVariant::upper_bound;
    out.upper.depth = depth;
    out.lower.variant = ProfileVariant::lower_bound;
    out.lower.depth = depth;

    std::vector<double> p(static_cast<size_t>(depth) + 1, 0.0);
    p[static_cast<size_t>(depth)] = 1.0;
    for (int h = depth - 1; h >= 0; --h) {
        const double input = p[static_cast<size_t>(h + 1)];
        const double output = numeric::clamp_probability(
            leaf_probability + mix(q, input) * (1.0 - leaf_probability));
        p[static_cast<size_t>(h)] = output;
        out.trace.points.emplace_back(input, output);
    }
    for (int h = 0; h <= depth; ++h) {
        out.upper.values.emplace_back(h, p[static_cast<size_t>(h)]);
        out.lower.values.emplace_back(h, h == depth ? 1.0 : leaf_probability);
    }
    return out;
}

std::optional<double> DistanceKeyedProfile::at(int key) const {
    for (const auto& [d, p] : values)
        if (d == key) return p;
    return std::nullopt;
}

std::string DistanceKeyedProfile::to_csv() const {
    std::ostringstream out;
    out << "distance_from_max,p\n";
    for (const auto& [d, p] : values)
        out << d << ',' << numeric::format_double(p) << '\n';
    return out.str();
}

DistanceKeyedProfile approx_no_leaves(std::span<const TreeLevelObservables> trees,
                                      std::span<const double> per_tree_q,
                                      const ApproxNoLeavesOptions& options) {
    if (trees.empty())
        throw Error(ErrorCode::insufficient_levels, "no trees to approximate from");
    if (!options.q_override && per_tree_q.size() != trees.size())
        throw Error(ErrorCode::invalid_parameter,
                    "per-tree q list must match the tree list");

    int max_key = 0;
    for (const auto& t : trees) max_key = std::max(max_key, t.keys() - 1);
    if (max_key < 1)
        throw Error(ErrorCode::insufficient_levels,
                    "approximation needs at least one level above the leaves");

    DistanceKeyedProfile profile;
    double p_nl_prev = 1.0;  // placeholder; multiplied by zero at the first step
    for (int d = 1; d <= max_key; ++d) {
        double sum = 0.0;
        long contributing = 0;
        for (size_t t = 0; t < trees.size(); ++t) {
            const auto& obs = trees[t];
            if (obs.keys() <= d || !obs.populated(d) || !obs.populated(d - 1)) continue;
            const double q =
                options.q_override ? *options.q_override : per_tree_q[t];
            if (obs.nodes[static_cast<size_t>(d)] == obs.leaves[static_cast<size_t>(d)])
                continue;  // no rebutted nodes at this key in this tree
            const double leaf_below = obs.leaf_hat(d - 1);
            const double child_win = leaf_below + (1.0 - leaf_below) * p_nl_prev;
            const double bracket =
                q * child_win + (1.0 - q) * (1.0 - leaf_below) * (1.0 - p_nl_prev);
            // Exponent: mean reply count of the rebutted nodes. The plain
            // all-node mean dips below 1 on leaf-heavy levels, which both
            // violates the k >= 1 range the recurrence sums over and drags
            // the predicted probability toward 1.
            sum += std::pow(numeric::clamp_probability(bracket),
                            obs.mean_in_degree_non_leaf[static_cast<size_t>(d)]);
            ++contributing;
        }
        if (contributing < options.min_tree_threshold) break;
        const double value = numeric::clamp_probability(sum / static_cast<double>(contributing));
        profile.values.emplace_back(d, value);
        p_nl_prev = value;
    }
    if (profile.values.empty())
        throw Error(ErrorCode::insufficient_levels, "no reportable keys above the leaf level");
    return profile;
}

RegimeReport recommend_sampling(std::span<const std::pair<int, double>> profile,
                                double q_hat, StructureHint hint, double epsilon) {
    if (profile.empty())
        throw Error(ErrorCode::insufficient_levels, "recommendation needs a profile");

    RegimeReport report = classify_regime(q_hat, epsilon, 0);
    report.recommended_order.clear();
    report.keys_are_levels = false;

    std::vector<std::pair<int, double>> keyed(profile.begin(), profile.end());
    std::sort(keyed.begin(), keyed.end());

    if (hint == StructureHint::scale_free || q_hat > 0.4) {
        // Descending probability; stable sort keeps deeper levels (smaller
        // distance keys) first among ties.
        std::stable_sort(keyed.begin(), keyed.end(),
                         [](const auto& a, const auto& b) { return a.second > b.second; });
        for (const auto& [d, p] : keyed) report.recommended_order.push_back({d, p});
    } else {
        // Homogeneous aggressive discussions: even distances from the
        // deepest level first, then odd ones.
        for (const auto& [d, p] : keyed)
            if (d % 2 == 0) report.recommended_order.push_back({d, p});
        for (const auto& [d, p] : keyed)
            if (d % 2 == 1) report.recommended_order.push_back({d, p});
    }
    return report;
}

} // namespace argwin
