#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "argwin/reply_tree.hpp"

namespace argwin {

// Plain argumentation framework <A, R>: arguments plus one attack relation.
struct AttackGraph {
    std::vector<std::string> arguments;
    std::vector<std::pair<int, int>> attacks;  // (attacker, target) indices

    int find(const std::string& id) const;
};

// View of the reply-sign matrix J: J(i,j) = +1 if i supports j, -1 if i
// attacks j, 0 otherwise. On a reply tree the only nonzero entry per
// non-root i is toward its parent.
class SignMatrixView {
public:
    explicit SignMatrixView(const ReplyTree& tree) : tree_(&tree) {}

    int operator()(int i, int j) const {
        const auto& node = tree_->node(i);
        if (node.parent != j || !node.polarity) return 0;
        return *node.polarity == Polarity::support ? 1 : -1;
    }

    // Sign of node i's reply edge; 0 for the root.
    int toward_parent(int i) const {
        const auto& node = tree_->node(i);
        if (!node.polarity) return 0;
        return *node.polarity == Polarity::support ? 1 : -1;
    }

private:
    const ReplyTree* tree_;
};

// How interior nodes aggregate their repliers' states. Leaves are always
// winning under every rule.
struct WinningRule {
    enum class Kind {
        grounded,                // unanimity: all supporters win, all attackers lose
        leaves_only_exception,   // leaf repliers ignored unless all repliers are leaves
        majority,                // signed majority of replier verdicts; ties lose
        generalized_majority,    // majority weighted by (k+1)^(s*beta); ties lose
    };

    Kind kind = Kind::grounded;
    double beta = 0.0;  // generalized_majority weight exponent, >= 0

    static WinningRule grounded() { return {Kind::grounded, 0.0}; }
    static WinningRule leaves_only_exception() { return {Kind::leaves_only_exception, 0.0}; }
    static WinningRule majority() { return {Kind::majority, 0.0}; }
    static WinningRule generalized_majority(double beta);

    std::string name() const;
    static WinningRule from_name(const std::string& name, double beta = 0.0);

    bool operator==(const WinningRule&) const = default;
};

// Total +1/-1 assignment for one tree under one rule.
struct StateAssignment {
    WinningRule rule;
    std::vector<std::int8_t> state;  // indexed like the tree's nodes

    bool winning(int i) const { return state[static_cast<size_t>(i)] > 0; }

    std::vector<std::string> winners(const ReplyTree& tree) const;  // sorted ids
    std::string to_json(const ReplyTree& tree) const;
};

// Flattens supports into attacks: (a,b) is an attack iff a reaches an
// attacker of b through a (possibly empty) support path, or a attacks the
// tail of a support path ending at b.
AttackGraph reduce_baf_to_af(const ReplyTree& tree);

// Unique grounded extension of a finite acyclic framework, by iterated
// removal of arguments attacked by unattacked ones.
// Throws ErrorCode::not_acyclic on cyclic inputs.
std::vector<std::string> grounded_extension(const AttackGraph& graph);

// Level-wise state propagation from the deepest level to the root.
StateAssignment propagate_states(const ReplyTree& tree, const WinningRule& rule);

// Exhaustive complete-extension enumeration, |A| <= 20. Test oracle only:
// on acyclic inputs it returns exactly one extension, the grounded one.
std::vector<std::set<std::string>> enumerate_extensions_oracle(const AttackGraph& graph);

} // namespace argwin
