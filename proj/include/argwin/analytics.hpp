#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "argwin/degree_model.hpp"
#include "argwin/estimators.hpp"

namespace argwin {

enum class ProfileVariant { full, leaf_removed, upper_bound, lower_bound };

const char* to_string(ProfileVariant v);

// Winning probability per level. `full` and the bounds cover levels 0..N
// (with p_N = 1); `leaf_removed` covers 0..N-1 since the deepest level has
// no rebutted nodes.
struct LevelProbabilityProfile {
    ProfileVariant variant = ProfileVariant::full;
    int depth = 0;
    std::vector<std::pair<int, double>> values;  // (level h, p) ascending by h
    long series_terms = 0;  // truncation point of the widest series sum

    std::optional<double> at(int level) const;
    // Largest |p_h - p_{h+1}| between interior levels (h, h+1 <= max interior
    // level); the amplitude measure used for oscillation comparisons.
    double interior_amplitude() const;
    bool constant_one(double tol = 1e-12) const;

    // variant,level,distance_from_max,p
    std::string to_csv() const;
    std::string to_json() const;
};

// Backward solve of  p_h = sum_k [q p_{h+1} + (1-q)(1-p_{h+1})]^k p(k),
// p_N = 1. The bracket is the degree model's PGF argument, so each step is
// one PGF evaluation.
LevelProbabilityProfile solve_recurrence(const DegreeModel& model, int depth, double q);

// Closed form for Poisson models: p_h = exp(-lambda (1 - q p_{h+1} -
// (1-q)(1-p_{h+1}))); cross-check for the series solver.
LevelProbabilityProfile poisson_recurrence_closed_form(double lambda, int depth, double q);

// Leaf-removed recurrence: the deepest-level winning probability of nodes
// that received at least one reply,
//   p^nl_h = sum_{k>=1} rho^k p(k|h) / (1 - p(0|h)),
//   rho    = q [p(0|h+1) + (1-p(0|h+1)) p^nl_{h+1}]
//            + (1-q) (1-p(0|h+1)) (1 - p^nl_{h+1}).
// The 1/(1-p(0|h)) normalizer makes p^nl a genuine conditional probability,
// so on homogeneous models p_h = p(0) + (1-p(0)) p^nl_h exactly.
LevelProbabilityProfile solve_recurrence_no_leaves(const DegreeModel& model, int depth,
                                                   double q);
// General form with one model per level 0..N-1 (level N is forced leaves).
LevelProbabilityProfile solve_recurrence_no_leaves(std::span<const DegreeModel> per_level,
                                                   double q);

enum class Regime { oscillatory, flat, monotone_decay };

const char* to_string(Regime r);

// Sampling recommendation: regime plus the order in which levels should be
// read. Orders are either absolute levels h (analytic profiles, index_kind
// "level") or distances from the deepest level (ensemble statistics,
// index_kind "distance_from_max").
struct RegimeReport {
    double q = 0.5;
    Regime regime = Regime::flat;
    bool keys_are_levels = true;
    struct Entry {
        int key;
        std::optional<double> p;  // attached probability, when known
    };
    std::vector<Entry> recommended_order;

    std::string to_json() const;
};

// Regime from q against 1/2 with tolerance epsilon; the order covers levels
// 0..depth. Oscillatory regimes list even distances from the deepest level
// first, then odd ones.
RegimeReport classify_regime(double q, double epsilon, int depth);

// 1.96 sqrt(q(1-q)/E): sampling noise of an estimated support fraction, used
// as the regime tolerance so noise cannot flip the classification.
double regime_epsilon_for_estimate(double q_hat, long edge_count);

// Iterates of the saturated upper bound, paired as (input p_{h+1}, output
// p_h) for cobweb plotting; the first input is 1.
struct CobwebTrace {
    double leaf_probability = 0.0;
    double q = 0.5;
    std::vector<std::pair<double, double>> points;

    // Largest jump |y_i - y_{i-1}| between successive iterates (y_0 = 1).
    double oscillation_amplitude() const;
    std::string to_csv() const;  // x,y
    std::string to_json() const;
};

struct BoundProfiles {
    LevelProbabilityProfile upper;  // p^max_h iteration from p_N = 1
    LevelProbabilityProfile lower;  // constant p(0) below level N
    CobwebTrace trace;
};

// p^max_h = p(0) + [q p^max_{h+1} + (1-q)(1-p^max_{h+1})](1 - p(0)),
// p^min_h = p(0).
BoundProfiles bound_profiles(double leaf_probability, int depth, double q);

// Monte-Carlo approximation of the leaf-removed recurrence from per-tree
// observables: at each distance key the per-tree expression
//   [q (lf + (1-lf) p^nl) + (1-q)(1-lf)(1-p^nl)]^(mean in-degree)
// is evaluated with that tree's leaf fraction lf one level deeper and
// averaged across trees. `q_override` substitutes a common q for the
// per-tree support fractions (at q = 1/2 the expression collapses to
// <q^k_hat>). Returned as a distance-keyed profile over keys >= 1.
struct ApproxNoLeavesOptions {
    std::optional<double> q_override;
    int min_tree_threshold = 1;
};

struct DistanceKeyedProfile {
    std::vector<std::pair<int, double>> values;  // (distance key, p)

    std::optional<double> at(int key) const;
    std::string to_csv() const;  // distance_from_max,p
};

DistanceKeyedProfile approx_no_leaves(std::span<const TreeLevelObservables> trees,
                                      std::span<const double> per_tree_q,
                                      const ApproxNoLeavesOptions& options = {});

enum class StructureHint { homogeneous, scale_free };

// Level reading order for a distance-keyed winning-probability profile.
// Scale-free structures (and supportive discussions, q-hat > 0.4) read
// levels by descending probability, deepest first among ties; homogeneous
// aggressive discussions read levels by parity of the distance from the
// deepest level.
RegimeReport recommend_sampling(std::span<const std::pair<int, double>> profile,
                                double q_hat, StructureHint hint, double epsilon = 1e-9);

} // namespace argwin
