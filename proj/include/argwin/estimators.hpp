#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "argwin/generators.hpp"
#include "argwin/semantics.hpp"

namespace argwin {

// Per-tree level statistics, keyed by distance d from the deepest level
// (d = alignment_depth - h). Key 0 is the all-leaf deepest level. Fixed-N
// homogeneous ensembles align on the nominal depth, so keys of trees that
// went extinct early stay comparable across the ensemble; everything else
// aligns on the tree's own depth. Keys a short tree never reaches have a
// zero node count and drop out of aggregation.
struct TreeLevelObservables {
    int depth = 0;  // alignment depth
    std::vector<long> nodes;      // node count per key
    std::vector<long> winners;    // state +1 count per key
    std::vector<long> leaves;     // in-degree 0 count per key
    std::vector<double> mean_in_degree;           // over all nodes at the key
    std::vector<double> mean_in_degree_non_leaf;  // over rebutted nodes only; 0 if none

    int keys() const { return static_cast<int>(nodes.size()); }
    bool populated(int d) const { return nodes[static_cast<size_t>(d)] > 0; }
    double p_hat(int d) const;
    double leaf_hat(int d) const;
    // (winners - leaves) / (nodes - leaves); absent where all nodes are leaves.
    std::optional<double> p_no_leaves_hat(int d) const;
    // Signed mean of the +1/-1 states, (W-L)/(W+L) in [-1,1]; diagnostic only.
    double signed_mean(int d) const;
};

// `alignment_depth` < 0 aligns on the tree's own depth.
TreeLevelObservables tree_level_stats(const ReplyTree& tree, const StateAssignment& states,
                                      int alignment_depth = -1);

struct LevelStats {
    int distance_from_max = 0;
    long n_trees = 0;
    long n_nodes = 0;
    double p_win = 0.0;
    double p_leaf = 0.0;
    std::optional<double> p_win_no_leaves;
    double mean_in_degree = 0.0;
    double signed_mean = 0.0;
};

struct EnsembleStats {
    WinningRule rule;
    int min_tree_threshold = 10;
    std::string source;  // generator parameters or ingest origin
    std::vector<LevelStats> levels;  // ordered by key, filtered by threshold

    const LevelStats* at_distance(int d) const;
    // distance_from_max,n_trees,n_nodes,p_win,p_leaf,p_win_no_leaves,mean_in_degree
    // (plus a trailing signed_mean column when diagnostics are on).
    std::string to_csv(bool signed_mean_column = false) const;
    std::string to_json() const;
};

// Running per-key sums of per-tree fractions. Adding trees in index order
// keeps float sums, and hence output bytes, independent of thread count;
// merge() is associative only up to float rounding.
class LevelAggregator {
public:
    void add(const TreeLevelObservables& tree_stats);
    void merge(const LevelAggregator& later);  // `later` holds higher-indexed trees
    long tree_count() const { return trees_; }

    EnsembleStats finish(const WinningRule& rule, int min_tree_threshold,
                         std::string source) const;

private:
    struct Accum {
        long n_trees = 0;
        long n_nodes = 0;
        long n_trees_no_leaves = 0;
        double sum_p = 0.0;
        double sum_leaf = 0.0;
        double sum_p_no_leaves = 0.0;
        double sum_mean_in_degree = 0.0;
        double sum_signed = 0.0;
    };
    std::vector<Accum> by_key_;
    long trees_ = 0;
};

// Generates the ensemble, propagates states and folds the per-level
// statistics, farming trees out to `jobs` workers in index-ordered chunks.
// Per-tree observables are retained only when `keep_per_tree` is set.
struct SimulationResult {
    EnsembleStats stats;
    std::vector<TreeLevelObservables> per_tree;  // empty unless requested
    long short_trees = 0;  // homogeneous trees extinct before the target depth
    long realized_support_edges = 0;
    long realized_edges = 0;
};

SimulationResult run_ensemble(const EnsembleSpec& spec, const WinningRule& rule,
                              int min_tree_threshold, int jobs, bool keep_per_tree = false);

// Stats for already-materialized trees (ingested corpora).
EnsembleStats aggregate_trees(std::span<const ReplyTree> trees, const WinningRule& rule,
                              int min_tree_threshold, std::string source,
                              std::vector<TreeLevelObservables>* per_tree = nullptr);

} // namespace argwin
