#include "argwin/reply_tree.hpp"

#include <algorithm>
#include <deque>

namespace argwin {

const char* to_string(Polarity p) {
    return p == Polarity::support ? "support" : "attack";
}

Polarity polarity_from_string(const std::string& s) {
    if (s == "support") return Polarity::support;
    if (s == "attack") return Polarity::attack;
    throw Error(ErrorCode::parse_error, "unknown polarity '" + s + "'");
}

ReplyTree ReplyTree::build(std::vector<TreeRecord> records) {
    if (records.empty())
        throw Error(ErrorCode::multiple_roots, "tree has no records");

    std::sort(records.begin(), records.end(),
              [](const TreeRecord& a, const TreeRecord& b) { return a.id < b.id; });

    ReplyTree tree;
    tree.nodes_.reserve(records.size());
    for (size_t i = 0; i < records.size(); ++i) {
        const TreeRecord& rec = records[i];
        if (!tree.index_.emplace(rec.id, static_cast<int>(i)).second)
            throw Error(ErrorCode::duplicate_id, "duplicate node id '" + rec.id + "'");
        Node node;
        node.id = rec.id;
        node.polarity = rec.polarity;
        tree.nodes_.push_back(std::move(node));
    }

    for (size_t i = 0; i < records.size(); ++i) {
        const TreeRecord& rec = records[i];
        Node& node = tree.nodes_[i];
        if (rec.parent.has_value()) {
            if (!rec.polarity.has_value())
                throw Error(ErrorCode::missing_polarity,
                            "node '" + rec.id + "' replies to a parent but has no polarity");
            auto it = tree.index_.find(*rec.parent);
            if (it == tree.index_.end())
                throw Error(ErrorCode::orphan_parent,
                            "node '" + rec.id + "' references missing parent '" +
                                *rec.parent + "'");
            if (it->second == static_cast<int>(i))
                throw Error(ErrorCode::cycle_detected,
                            "node '" + rec.id + "' is its own parent");
            node.parent = it->second;
            if (*rec.polarity == Polarity::support) ++tree.support_edges_;
        } else {
            if (rec.polarity.has_value())
                throw Error(ErrorCode::polarity_on_root,
                            "root node '" + rec.id + "' must not carry a polarity");
            if (tree.root_ >= 0)
                throw Error(ErrorCode::multiple_roots,
                            "both '" + tree.nodes_[tree.root_].id + "' and '" + rec.id +
                                "' lack a parent");
            tree.root_ = static_cast<int>(i);
        }
    }
    if (tree.root_ < 0)
        throw Error(ErrorCode::multiple_roots, "no root record (every node has a parent)");

    for (size_t i = 0; i < tree.nodes_.size(); ++i)
        if (tree.nodes_[i].parent >= 0)
            tree.nodes_[tree.nodes_[i].parent].children.push_back(static_cast<int>(i));

    // Levels via BFS from the root; with unique present parents, any node
    // unreachable from the root sits on a parent cycle.
    int reached = 0;
    std::deque<int> queue{tree.root_};
    tree.nodes_[tree.root_].level = 0;
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        ++reached;
        const int child_level = tree.nodes_[v].level + 1;
        tree.depth_ = std::max(tree.depth_, tree.nodes_[v].level);
        for (int c : tree.nodes_[v].children) {
            tree.nodes_[c].level = child_level;
            queue.push_back(c);
        }
    }
    if (reached != tree.size())
        throw Error(ErrorCode::cycle_detected, "parent references form a cycle");

    tree.levels_.assign(static_cast<size_t>(tree.depth_) + 1, {});
    for (int i = 0; i < tree.size(); ++i)
        tree.levels_[static_cast<size_t>(tree.nodes_[i].level)].push_back(i);
    return tree;
}

int ReplyTree::find(const std::string& id) const {
    auto it = index_.find(id);
    return it == index_.end() ? -1 : it->second;
}

std::vector<double> leaf_fraction_per_level(const ReplyTree& tree) {
    std::vector<double> out(static_cast<size_t>(tree.depth()) + 1, 0.0);
    for (size_t h = 0; h < out.size(); ++h) {
        const auto& level = tree.levels()[h];
        long leaves = 0;
        for (int v : level)
            if (tree.is_leaf(v)) ++leaves;
        out[h] = static_cast<double>(leaves) / static_cast<double>(level.size());
    }
    return out;
}

double estimate_q(const ReplyTree& tree) {
    if (tree.edge_count() == 0)
        throw Error(ErrorCode::no_edges, "support fraction undefined on a root-only tree");
    return static_cast<double>(tree.support_edge_count()) /
           static_cast<double>(tree.edge_count());
}

} // namespace argwin
