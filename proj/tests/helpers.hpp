#pragma once

// Shared fixtures: the worked example trees and random-tree generators for
// property tests.

#include <filesystem>
#include <string>
#include <vector>

#include "argwin/reply_tree.hpp"
#include "argwin/rng.hpp"

namespace testing {

using argwin::Polarity;
using argwin::ReplyTree;
using argwin::TreeRecord;

// Path reply a0 <-sup a1 <-att a2 (the three-comment news example).
inline ReplyTree fig3_tree() {
    return ReplyTree::build({
        {"a0", std::nullopt, std::nullopt},
        {"a1", "a0", Polarity::support},
        {"a2", "a1", Polarity::attack},
    });
}

// BAF with R_att = {(c,b)}, R_sup = {(d,c),(e,b),(b,a)}: a <-sup b, b <-att c,
// b <-sup e, c <-sup d. Depth 3, leaves d and e (e at level 2).
inline ReplyTree fig5_tree() {
    return ReplyTree::build({
        {"a", std::nullopt, std::nullopt},
        {"b", "a", Polarity::support},
        {"c", "b", Polarity::attack},
        {"d", "c", Polarity::support},
        {"e", "b", Polarity::support},
    });
}

// Same shape but all edges attacking: the plain AF of the grounded-extension
// walkthrough (winners {a,d,e}).
inline ReplyTree all_attack_chain_tree() {
    return ReplyTree::build({
        {"a", std::nullopt, std::nullopt},
        {"b", "a", Polarity::attack},
        {"c", "b", Polarity::attack},
        {"d", "c", Polarity::attack},
        {"e", "b", Polarity::attack},
    });
}

// Uniform random recursive tree with i.i.d. edge signs; support probability
// drawn per call when q < 0.
inline ReplyTree random_tree(argwin::rng::Stream& stream, int max_nodes, double q = -1.0) {
    const int n = 2 + static_cast<int>(stream.next_below(static_cast<std::uint64_t>(max_nodes - 1)));
    if (q < 0.0) q = stream.next_unit();
    std::vector<TreeRecord> records;
    records.push_back({"v0", std::nullopt, std::nullopt});
    for (int v = 1; v < n; ++v) {
        const int parent = static_cast<int>(stream.next_below(static_cast<std::uint64_t>(v)));
        records.push_back({"v" + std::to_string(v), "v" + std::to_string(parent),
                           stream.next_bernoulli(q) ? Polarity::support : Polarity::attack});
    }
    return ReplyTree::build(std::move(records));
}

// Unique scratch directory under the system temp root.
inline std::filesystem::path scratch_dir(const std::string& tag) {
    static int counter = 0;
    auto dir = std::filesystem::temp_directory_path() /
               ("argwin_test_" + tag + "_" + std::to_string(counter++));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace testing
