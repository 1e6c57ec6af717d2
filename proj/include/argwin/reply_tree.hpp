#pragma once

#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "argwin/errors.hpp"

namespace argwin {

// Every non-root reply either supports or attacks its parent.
enum class Polarity { support, attack };

const char* to_string(Polarity p);
Polarity polarity_from_string(const std::string& s);

// One input row for tree construction: root rows have neither parent nor
// polarity, all other rows have both.
struct TreeRecord {
    std::string id;
    std::optional<std::string> parent;
    std::optional<Polarity> polarity;
};

// Level position of a node: absolute level h plus the "alignment key"
// d = depth - h, the distance from the deepest level of its own tree.
struct LevelIndex {
    int level = 0;
    int distance_from_max = 0;
};

// Immutable rooted reply tree with signed edges: the bipolar argumentation
// framework <A, R_sup, R_att> restricted to tree shapes. Levels, in-degrees
// and the depth are derived at construction and never read from input.
class ReplyTree {
public:
    struct Node {
        std::string id;
        int parent = -1;                   // index, -1 for the root
        std::optional<Polarity> polarity;  // nullopt for the root
        int level = 0;
        std::vector<int> children;         // replier indices

        bool operator==(const Node&) const = default;
    };

    // Validates and assembles a tree from unordered records. Node order in
    // the result is canonical (sorted by id) so permuting the input yields
    // an identical tree.
    static ReplyTree build(std::vector<TreeRecord> records);

    int size() const { return static_cast<int>(nodes_.size()); }
    int depth() const { return depth_; }
    int root() const { return root_; }
    int edge_count() const { return size() - 1; }

    const Node& node(int i) const { return nodes_[static_cast<size_t>(i)]; }
    std::span<const Node> nodes() const { return nodes_; }

    int in_degree(int i) const { return static_cast<int>(node(i).children.size()); }
    bool is_leaf(int i) const { return node(i).children.empty(); }
    LevelIndex level_index(int i) const { return {node(i).level, depth_ - node(i).level}; }

    // Node index for an id, or -1.
    int find(const std::string& id) const;

    // Node indices grouped by level, levels 0..depth.
    const std::vector<std::vector<int>>& levels() const { return levels_; }

    int support_edge_count() const { return support_edges_; }

    bool operator==(const ReplyTree& other) const { return nodes_ == other.nodes_; }

private:
    std::vector<Node> nodes_;
    std::vector<std::vector<int>> levels_;
    std::unordered_map<std::string, int> index_;
    int root_ = -1;
    int depth_ = 0;
    int support_edges_ = 0;
};

// Fraction of leaves per level, levels 0..depth. The entry at the deepest
// level is always 1; a root-only tree yields {1.0}.
std::vector<double> leaf_fraction_per_level(const ReplyTree& tree);

// Support fraction q-hat = (#support edges) / (#edges).
// Throws ErrorCode::no_edges on a root-only tree.
double estimate_q(const ReplyTree& tree);

} // namespace argwin
