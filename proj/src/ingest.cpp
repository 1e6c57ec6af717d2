#include "argwin/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <filesystem>
#include <set>

#include <json.hpp>

#include "argwin/numeric.hpp"
#include "argwin/tree_json.hpp"

namespace argwin {

namespace fs = std::filesystem;

std::string CleaningReport::to_json() const {
    return nlohmann::json{{"trees_in", trees_in},
                          {"removed_small", removed_small},
                          {"removed_malformed", removed_malformed},
                          {"trees_out", trees_out},
                          {"q_hat", q_hat},
                          {"file_errors", file_errors}}
        .dump(2);
}

namespace {

// Drops every record in the subtrees rooted at flagged nodes. Returns false
// (reject the tree) when the root itself is flagged.
bool prune_flagged(const TreeDocument& doc, std::vector<TreeRecord>& out) {
    std::set<std::string> removed;
    // Parent chains can appear in any order; sweep until stable.
    bool grew = true;
    std::set<std::string> flagged;
    for (const auto& entry : doc.nodes)
        if (entry.deleted || entry.empty_text) flagged.insert(entry.record.id);
    while (grew) {
        grew = false;
        for (const auto& entry : doc.nodes) {
            const std::string& id = entry.record.id;
            if (removed.count(id)) continue;
            const bool self = flagged.count(id) > 0;
            const bool parent_gone =
                entry.record.parent && removed.count(*entry.record.parent) > 0;
            if (self || parent_gone) {
                removed.insert(id);
                grew = true;
            }
        }
    }
    out.clear();
    for (const auto& entry : doc.nodes) {
        if (removed.count(entry.record.id)) continue;
        if (!entry.record.parent.has_value() && flagged.count(entry.record.id))
            return false;
        out.push_back(entry.record);
    }
    for (const auto& rec : out)
        if (!rec.parent.has_value()) return true;
    return false;  // root was pruned away
}

} // namespace

LoadedCorpus load_corpus(const std::string& path, const CleaningOptions& options) {
    if (!fs::exists(path) || !fs::is_directory(path))
        throw Error(ErrorCode::unreadable_path, "'" + path + "' is not a readable directory");

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path))
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    LoadedCorpus corpus;
    for (const auto& file : files) {
        ++corpus.report.trees_in;
        TreeDocument doc;
        try {
            doc = read_tree_document(file.string());
        } catch (const Error& e) {
            ++corpus.report.removed_malformed;
            corpus.report.file_errors.push_back(file.filename().string() + ": " + e.what());
            continue;
        }

        bool has_flagged = false;
        for (const auto& entry : doc.nodes)
            if (entry.deleted || entry.empty_text) has_flagged = true;

        std::vector<TreeRecord> records;
        if (has_flagged && options.strict) {
            ++corpus.report.removed_malformed;
            continue;
        } else if (has_flagged) {
            if (!prune_flagged(doc, records)) {
                ++corpus.report.removed_malformed;
                continue;
            }
        } else {
            records = doc.records();
        }

        ReplyTree tree;
        try {
            tree = ReplyTree::build(std::move(records));
        } catch (const Error& e) {
            ++corpus.report.removed_malformed;
            corpus.report.file_errors.push_back(file.filename().string() + ": " + e.what());
            continue;
        }
        if (tree.size() < options.min_size) {
            ++corpus.report.removed_small;
            continue;
        }
        corpus.report.q_hat.push_back(
            tree.edge_count() > 0 ? estimate_q(tree)
                                  : std::numeric_limits<double>::quiet_NaN());
        corpus.trees.push_back(std::move(tree));
        corpus.names.push_back(file.stem().string());
    }
    corpus.report.trees_out = static_cast<long>(corpus.trees.size());
    return corpus;
}

const char* to_string(SupportClass c) {
    switch (c) {
    case SupportClass::low: return "low";
    case SupportClass::balanced: return "balanced";
    case SupportClass::high: return "high";
    case SupportClass::unclassified: return "unclassified";
    }
    return "unclassified";
}

SupportClass classify_support(double q_hat) {
    if (q_hat <= 0.2) return SupportClass::low;
    if (q_hat >= 0.4 && q_hat <= 0.6) return SupportClass::balanced;
    if (q_hat >= 0.8) return SupportClass::high;
    return SupportClass::unclassified;
}

std::map<SupportClass, std::vector<size_t>> bin_by_support(std::span<const ReplyTree> trees,
                                                           std::vector<size_t>* skipped) {
    std::map<SupportClass, std::vector<size_t>> bins;
    for (size_t i = 0; i < trees.size(); ++i) {
        if (trees[i].edge_count() == 0) {
            if (skipped) skipped->push_back(i);
            continue;
        }
        bins[classify_support(estimate_q(trees[i]))].push_back(i);
    }
    return bins;
}

std::string PowerLawFit::to_json() const {
    return nlohmann::json{{"alpha", alpha},
                          {"k_min", k_min},
                          {"ks_distance", ks_distance},
                          {"n_tail", n_tail}}
        .dump(2);
}

namespace {

// Negative log-likelihood (per sample scale) of the truncated-zeta model.
double power_law_nll(double alpha, int k_min, double sum_log_k, long n) {
    const double z = numeric::truncated_zeta(alpha, k_min);
    if (!(z > 0.0)) return std::numeric_limits<double>::infinity();
    return alpha * sum_log_k + static_cast<double>(n) * std::log(z);
}

// Golden-section minimization of the NLL over alpha in (1, 12].
double fit_alpha(int k_min, double sum_log_k, long n) {
    constexpr double inv_phi = 0.6180339887498949;
    double lo = 1.000001, hi = 12.0;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = power_law_nll(x1, k_min, sum_log_k, n);
    double f2 = power_law_nll(x2, k_min, sum_log_k, n);
    while (hi - lo > 1e-7) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = power_law_nll(x1, k_min, sum_log_k, n);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = power_law_nll(x2, k_min, sum_log_k, n);
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace

PowerLawFit fit_power_law(std::span<const int> in_degrees) {
    std::vector<int> samples;
    samples.reserve(in_degrees.size());
    for (int k : in_degrees)
        if (k >= 1) samples.push_back(k);
    if (samples.size() < 50)
        throw Error(ErrorCode::insufficient_tail,
                    "power-law fit needs >= 50 samples with k >= 1");
    std::sort(samples.begin(), samples.end());

    // Distinct values and suffix statistics: for each candidate k_min we
    // need the tail count and sum of log k over the tail.
    std::vector<int> distinct;
    std::vector<long> tail_count;
    std::vector<double> tail_sum_log;
    {
        std::vector<long> count_at;
        std::vector<double> sum_log_at;
        for (size_t i = 0; i < samples.size();) {
            size_t j = i;
            while (j < samples.size() && samples[j] == samples[i]) ++j;
            distinct.push_back(samples[i]);
            count_at.push_back(static_cast<long>(j - i));
            sum_log_at.push_back(static_cast<double>(j - i) *
                                 std::log(static_cast<double>(samples[i])));
            i = j;
        }
        tail_count.assign(distinct.size(), 0);
        tail_sum_log.assign(distinct.size(), 0.0);
        long cnt = 0;
        double slog = 0.0;
        for (size_t i = distinct.size(); i-- > 0;) {
            cnt += count_at[i];
            slog += sum_log_at[i];
            tail_count[i] = cnt;
            tail_sum_log[i] = slog;
        }
    }

    constexpr long kMinTail = 25;
    PowerLawFit best;
    bool found = false;
    for (size_t c = 0; c < distinct.size(); ++c) {
        const int k_min = distinct[c];
        const long n = tail_count[c];
        if (n < kMinTail) break;  // tails only shrink from here on
        const double alpha = fit_alpha(k_min, tail_sum_log[c], n);
        const double z = numeric::truncated_zeta(alpha, k_min);

        // KS distance between the empirical tail CDF and the fitted CDF,
        // evaluated at each distinct tail value.
        double ks = 0.0;
        double model_cdf = 0.0;
        long below = 0;
        int next_k = k_min;
        for (size_t i = c; i < distinct.size(); ++i) {
            // Model mass for the gap of unobserved values before distinct[i].
            for (; next_k <= distinct[i]; ++next_k)
                model_cdf += std::pow(static_cast<double>(next_k), -alpha) / z;
            below += tail_count[i] - (i + 1 < distinct.size() ? tail_count[i + 1] : 0);
            const double empirical_cdf =
                static_cast<double>(below) / static_cast<double>(n);
            ks = std::max(ks, std::abs(empirical_cdf - model_cdf));
        }

        if (!found || ks < best.ks_distance) {
            best.alpha = alpha;
            best.k_min = k_min;
            best.ks_distance = ks;
            best.n_tail = n;
            found = true;
        }
    }
    if (!found)
        throw Error(ErrorCode::insufficient_tail,
                    "no cutoff leaves at least 25 tail samples");
    return best;
}

std::vector<int> pool_in_degrees(std::span<const ReplyTree> trees) {
    std::vector<int> out;
    for (const auto& tree : trees)
        for (int v = 0; v < tree.size(); ++v)
            if (tree.in_degree(v) >= 1) out.push_back(tree.in_degree(v));
    return out;
}

} // namespace argwin
