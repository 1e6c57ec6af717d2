#include "argwin/estimators.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "argwin/numeric.hpp"

namespace argwin {

double TreeLevelObservables::p_hat(int d) const {
    return static_cast<double>(winners[static_cast<size_t>(d)]) /
           static_cast<double>(nodes[static_cast<size_t>(d)]);
}

double TreeLevelObservables::leaf_hat(int d) const {
    return static_cast<double>(leaves[static_cast<size_t>(d)]) /
           static_cast<double>(nodes[static_cast<size_t>(d)]);
}

std::optional<double> TreeLevelObservables::p_no_leaves_hat(int d) const {
    const long n = nodes[static_cast<size_t>(d)];
    const long l = leaves[static_cast<size_t>(d)];
    if (l == n) return std::nullopt;
    // Leaves always win, so winners - leaves counts the rebutted winners.
    return static_cast<double>(winners[static_cast<size_t>(d)] - l) /
           static_cast<double>(n - l);
}

double TreeLevelObservables::signed_mean(int d) const {
    const long n = nodes[static_cast<size_t>(d)];
    const long w = winners[static_cast<size_t>(d)];
    return static_cast<double>(2 * w - n) / static_cast<double>(n);
}

TreeLevelObservables tree_level_stats(const ReplyTree& tree, const StateAssignment& states,
                                      int alignment_depth) {
    TreeLevelObservables out;
    out.depth = std::max(alignment_depth, tree.depth());
    const size_t keys = static_cast<size_t>(out.depth) + 1;
    out.nodes.assign(keys, 0);
    out.winners.assign(keys, 0);
    out.leaves.assign(keys, 0);
    out.mean_in_degree.assign(keys, 0.0);
    out.mean_in_degree_non_leaf.assign(keys, 0.0);

    for (int v = 0; v < tree.size(); ++v) {
        const size_t d = static_cast<size_t>(out.depth - tree.node(v).level);
        ++out.nodes[d];
        if (states.winning(v)) ++out.winners[d];
        if (tree.is_leaf(v)) ++out.leaves[d];
        out.mean_in_degree[d] += static_cast<double>(tree.in_degree(v));
    }
    for (size_t d = 0; d < keys; ++d) {
        if (out.nodes[d] == 0) continue;
        const long rebutted = out.nodes[d] - out.leaves[d];
        if (rebutted > 0)
            out.mean_in_degree_non_leaf[d] = out.mean_in_degree[d] / static_cast<double>(rebutted);
        out.mean_in_degree[d] /= static_cast<double>(out.nodes[d]);
    }
    return out;
}

void LevelAggregator::add(const TreeLevelObservables& t) {
    if (by_key_.size() < static_cast<size_t>(t.keys()))
        by_key_.resize(static_cast<size_t>(t.keys()));
    for (int d = 0; d < t.keys(); ++d) {
        if (!t.populated(d)) continue;
        Accum& acc = by_key_[static_cast<size_t>(d)];
        ++acc.n_trees;
        acc.n_nodes += t.nodes[static_cast<size_t>(d)];
        acc.sum_p += t.p_hat(d);
        acc.sum_leaf += t.leaf_hat(d);
        acc.sum_mean_in_degree += t.mean_in_degree[static_cast<size_t>(d)];
        acc.sum_signed += t.signed_mean(d);
        if (auto pnl = t.p_no_leaves_hat(d)) {
            ++acc.n_trees_no_leaves;
            acc.sum_p_no_leaves += *pnl;
        }
    }
    ++trees_;
}

void LevelAggregator::merge(const LevelAggregator& later) {
    if (by_key_.size() < later.by_key_.size()) by_key_.resize(later.by_key_.size());
    for (size_t d = 0; d < later.by_key_.size(); ++d) {
        Accum& acc = by_key_[d];
        const Accum& other = later.by_key_[d];
        acc.n_trees += other.n_trees;
        acc.n_nodes += other.n_nodes;
        acc.n_trees_no_leaves += other.n_trees_no_leaves;
        acc.sum_p += other.sum_p;
        acc.sum_leaf += other.sum_leaf;
        acc.sum_p_no_leaves += other.sum_p_no_leaves;
        acc.sum_mean_in_degree += other.sum_mean_in_degree;
        acc.sum_signed += other.sum_signed;
    }
    trees_ += later.trees_;
}

EnsembleStats LevelAggregator::finish(const WinningRule& rule, int min_tree_threshold,
                                      std::string source) const {
    if (trees_ == 0)
        throw Error(ErrorCode::empty_ensemble, "no trees aggregated");
    EnsembleStats out;
    out.rule = rule;
    out.min_tree_threshold = min_tree_threshold;
    out.source = std::move(source);
    for (size_t d = 0; d < by_key_.size(); ++d) {
        const Accum& acc = by_key_[d];
        if (acc.n_trees < min_tree_threshold) continue;
        LevelStats level;
        level.distance_from_max = static_cast<int>(d);
        level.n_trees = acc.n_trees;
        level.n_nodes = acc.n_nodes;
        const double trees = static_cast<double>(acc.n_trees);
        level.p_win = acc.sum_p / trees;
        level.p_leaf = acc.sum_leaf / trees;
        level.mean_in_degree = acc.sum_mean_in_degree / trees;
        level.signed_mean = acc.sum_signed / trees;
        if (acc.n_trees_no_leaves > 0)
            level.p_win_no_leaves =
                acc.sum_p_no_leaves / static_cast<double>(acc.n_trees_no_leaves);
        out.levels.push_back(level);
    }
    return out;
}

const LevelStats* EnsembleStats::at_distance(int d) const {
    for (const auto& level : levels)
        if (level.distance_from_max == d) return &level;
    return nullptr;
}

std::string EnsembleStats::to_csv(bool signed_mean_column) const {
    std::ostringstream out;
    out << "distance_from_max,n_trees,n_nodes,p_win,p_leaf,p_win_no_leaves,mean_in_degree";
    if (signed_mean_column) out << ",signed_mean";
    out << '\n';
    for (const auto& level : levels) {
        out << level.distance_from_max << ',' << level.n_trees << ',' << level.n_nodes << ','
            << numeric::format_double(level.p_win) << ','
            << numeric::format_double(level.p_leaf) << ',';
        if (level.p_win_no_leaves) out << numeric::format_double(*level.p_win_no_leaves);
        out << ',' << numeric::format_double(level.mean_in_degree);
        if (signed_mean_column) out << ',' << numeric::format_double(level.signed_mean);
        out << '\n';
    }
    return out.str();
}

std::string EnsembleStats::to_json() const {
    nlohmann::json levels_json = nlohmann::json::array();
    for (const auto& level : levels) {
        nlohmann::json entry{
            {"distance_from_max", level.distance_from_max},
            {"n_trees", level.n_trees},
            {"n_nodes", level.n_nodes},
            {"p_win", level.p_win},
            {"p_leaf", level.p_leaf},
            {"mean_in_degree", level.mean_in_degree},
            {"signed_mean", level.signed_mean},
        };
        entry["p_win_no_leaves"] =
            level.p_win_no_leaves ? nlohmann::json(*level.p_win_no_leaves)
                                  : nlohmann::json(nullptr);
        levels_json.push_back(std::move(entry));
    }
    return nlohmann::json{{"rule", rule.name()},
                          {"min_tree_threshold", min_tree_threshold},
                          {"source", source},
                          {"levels", std::move(levels_json)}}
        .dump(2);
}

SimulationResult run_ensemble(const EnsembleSpec& spec, const WinningRule& rule,
                              int min_tree_threshold, int jobs, bool keep_per_tree) {
    spec.validate();
    jobs = std::max(1, jobs);

    SimulationResult result;
    LevelAggregator aggregator;

    const int alignment_depth =
        spec.kind == GeneratorKind::homogeneous_depth ? spec.depth : -1;

    struct PerTree {
        TreeLevelObservables observables;
        long support_edges = 0;
        long edges = 0;
    };

    constexpr long kChunk = 256;
    std::vector<PerTree> chunk_data;
    for (long begin = 0; begin < spec.tree_count; begin += kChunk) {
        const long end = std::min(spec.tree_count, begin + kChunk);
        chunk_data.assign(static_cast<size_t>(end - begin), PerTree{});

        auto work = [&](long index) {
            const ReplyTree tree = ensemble_tree(spec, index);
            const StateAssignment states = propagate_states(tree, rule);
            PerTree& slot = chunk_data[static_cast<size_t>(index - begin)];
            slot.observables = tree_level_stats(tree, states, alignment_depth);
            slot.support_edges = tree.support_edge_count();
            slot.edges = tree.edge_count();
        };

        if (jobs == 1 || end - begin == 1) {
            for (long t = begin; t < end; ++t) work(t);
        } else {
            std::atomic<long> cursor{begin};
            std::exception_ptr failure;
            std::mutex failure_mutex;
            auto worker = [&] {
                try {
                    for (long t = cursor.fetch_add(1); t < end; t = cursor.fetch_add(1))
                        work(t);
                } catch (...) {
                    const std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    cursor.store(end);
                }
            };
            std::vector<std::thread> pool;
            const long thread_count = std::min<long>(jobs, end - begin);
            pool.reserve(static_cast<size_t>(thread_count));
            for (long i = 0; i < thread_count; ++i) pool.emplace_back(worker);
            for (auto& th : pool) th.join();
            if (failure) std::rethrow_exception(failure);
        }

        // Sequential fold in tree-index order keeps the result independent
        // of how work was scheduled above.
        for (auto& slot : chunk_data) {
            aggregator.add(slot.observables);
            if (alignment_depth >= 0 && !slot.observables.populated(0)) ++result.short_trees;
            result.realized_support_edges += slot.support_edges;
            result.realized_edges += slot.edges;
            if (keep_per_tree) result.per_tree.push_back(std::move(slot.observables));
        }
    }

    result.stats = aggregator.finish(rule, min_tree_threshold, spec.describe());
    return result;
}

EnsembleStats aggregate_trees(std::span<const ReplyTree> trees, const WinningRule& rule,
                              int min_tree_threshold, std::string source,
                              std::vector<TreeLevelObservables>* per_tree) {
    LevelAggregator aggregator;
    for (const ReplyTree& tree : trees) {
        const StateAssignment states = propagate_states(tree, rule);
        TreeLevelObservables observables = tree_level_stats(tree, states);
        aggregator.add(observables);
        if (per_tree) per_tree->push_back(std::move(observables));
    }
    return aggregator.finish(rule, min_tree_threshold, std::move(source));
}

} // namespace argwin
