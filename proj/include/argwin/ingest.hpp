#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "argwin/reply_tree.hpp"

namespace argwin {

struct CleaningOptions {
    int min_size = 20;   // trees below this node count are dropped
    bool strict = true;  // strict: deleted/empty-text nodes drop the whole tree;
                         // lenient: the affected subtree is pruned instead
};

struct CleaningReport {
    long trees_in = 0;
    long removed_small = 0;
    long removed_malformed = 0;
    long trees_out = 0;
    std::vector<double> q_hat;          // per retained tree, load order
    std::vector<std::string> file_errors;  // unparsable documents, etc.

    std::string to_json() const;
};

struct LoadedCorpus {
    std::vector<ReplyTree> trees;
    std::vector<std::string> names;  // source file stem per retained tree
    CleaningReport report;
};

// Loads every *.json tree document under `path` (sorted by filename),
// validates, cleans and reports. Unreadable or malformed files are recorded
// in the report rather than aborting the load.
LoadedCorpus load_corpus(const std::string& path, const CleaningOptions& options = {});

// Support classes from the per-tree support fraction; the gaps between the
// named bands surface as `unclassified`.
enum class SupportClass { low, balanced, high, unclassified };

const char* to_string(SupportClass c);
SupportClass classify_support(double q_hat);  // low <= 0.2, 0.4 <= balanced <= 0.6, high >= 0.8

// Partition of tree indices by support class. Root-only trees (no edges)
// are skipped and reported via `skipped`.
std::map<SupportClass, std::vector<size_t>> bin_by_support(std::span<const ReplyTree> trees,
                                                           std::vector<size_t>* skipped = nullptr);

struct PowerLawFit {
    double alpha = 0.0;
    int k_min = 1;
    double ks_distance = 1.0;
    long n_tail = 0;

    std::string to_json() const;
};

// Discrete maximum-likelihood power-law fit over the truncated-zeta model,
// scanning cutoff candidates and keeping the one with the smallest
// Kolmogorov-Smirnov distance between empirical and fitted tail CDFs.
// Requires >= 50 samples with k >= 1; cutoffs leaving a tail below 25
// samples are not considered.
PowerLawFit fit_power_law(std::span<const int> in_degrees);

// Pools the in-degrees k >= 1 of every node across the corpus (leaves are
// excluded: the fitted model's support starts at k_min >= 1).
std::vector<int> pool_in_degrees(std::span<const ReplyTree> trees);

} // namespace argwin
