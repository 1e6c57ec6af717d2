#include "argwin/semantics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

namespace argwin {

using boost::multiprecision::cpp_int;

int AttackGraph::find(const std::string& id) const {
    for (size_t i = 0; i < arguments.size(); ++i)
        if (arguments[i] == id) return static_cast<int>(i);
    return -1;
}

WinningRule WinningRule::generalized_majority(double beta) {
    if (!(beta >= 0.0) || !std::isfinite(beta))
        throw Error(ErrorCode::invalid_parameter, "beta must be finite and >= 0");
    return {Kind::generalized_majority, beta};
}

std::string WinningRule::name() const {
    switch (kind) {
    case Kind::grounded: return "grounded";
    case Kind::leaves_only_exception: return "leaves-exception";
    case Kind::majority: return "majority";
    case Kind::generalized_majority: return "gen-majority";
    }
    return "grounded";
}

WinningRule WinningRule::from_name(const std::string& name, double beta) {
    if (name == "grounded") return grounded();
    if (name == "leaves-exception") return leaves_only_exception();
    if (name == "majority") return majority();
    if (name == "gen-majority") return generalized_majority(beta);
    throw Error(ErrorCode::invalid_parameter, "unknown rule '" + name + "'");
}

std::vector<std::string> StateAssignment::winners(const ReplyTree& tree) const {
    std::vector<std::string> out;
    for (int i = 0; i < tree.size(); ++i)
        if (winning(i)) out.push_back(tree.node(i).id);
    std::sort(out.begin(), out.end());
    return out;
}

std::string StateAssignment::to_json(const ReplyTree& tree) const {
    nlohmann::json states = nlohmann::json::object();
    for (int i = 0; i < tree.size(); ++i)
        states[tree.node(i).id] = static_cast<int>(state[static_cast<size_t>(i)]);
    return nlohmann::json{{"rule", rule.name()}, {"states", std::move(states)}}.dump(2);
}

AttackGraph reduce_baf_to_af(const ReplyTree& tree) {
    AttackGraph graph;
    graph.arguments.reserve(static_cast<size_t>(tree.size()));
    for (const auto& node : tree.nodes()) graph.arguments.push_back(node.id);

    // For each attack edge (c -> b): support-defeat adds (x, b) for every x
    // with a support path into c; indirect defeat adds (c, y) for every
    // support ancestor y of b. The two sets do not combine into a product:
    // a support-descendant of c does not attack b's support ancestors.
    std::set<std::pair<int, int>> attacks;
    for (int c = 0; c < tree.size(); ++c) {
        const auto& node = tree.node(c);
        if (node.polarity != Polarity::attack) continue;
        const int b = node.parent;

        std::deque<int> pending{c};
        while (!pending.empty()) {
            int v = pending.front();
            pending.pop_front();
            attacks.emplace(v, b);
            for (int child : tree.node(v).children)
                if (tree.node(child).polarity == Polarity::support) pending.push_back(child);
        }

        for (int v = b; tree.node(v).polarity == Polarity::support;) {
            v = tree.node(v).parent;
            attacks.emplace(c, v);
        }
    }
    graph.attacks.assign(attacks.begin(), attacks.end());
    return graph;
}

std::vector<std::string> grounded_extension(const AttackGraph& graph) {
    const int n = static_cast<int>(graph.arguments.size());
    std::vector<std::vector<int>> targets_of(static_cast<size_t>(n));
    std::vector<int> attacker_count(static_cast<size_t>(n), 0);
    for (auto [a, b] : graph.attacks) {
        targets_of[static_cast<size_t>(a)].push_back(b);
        ++attacker_count[static_cast<size_t>(b)];
    }

    // Acyclicity check (Kahn's algorithm on the attack digraph).
    {
        auto remaining = attacker_count;
        std::deque<int> ready;
        for (int v = 0; v < n; ++v)
            if (remaining[static_cast<size_t>(v)] == 0) ready.push_back(v);
        int seen = 0;
        while (!ready.empty()) {
            int v = ready.front();
            ready.pop_front();
            ++seen;
            for (int t : targets_of[static_cast<size_t>(v)])
                if (--remaining[static_cast<size_t>(t)] == 0) ready.push_back(t);
        }
        if (seen != n)
            throw Error(ErrorCode::not_acyclic, "attack graph contains a cycle");
    }

    // Unattacked arguments go in; everything they attack goes out and its
    // outgoing attacks disappear, possibly freeing further arguments.
    enum : std::int8_t { undecided = 0, in = 1, out = 2 };
    std::vector<std::int8_t> mark(static_cast<size_t>(n), undecided);
    std::deque<int> ready;
    auto live_attackers = attacker_count;
    for (int v = 0; v < n; ++v)
        if (live_attackers[static_cast<size_t>(v)] == 0) ready.push_back(v);
    while (!ready.empty()) {
        int v = ready.front();
        ready.pop_front();
        if (mark[static_cast<size_t>(v)] != undecided) continue;
        mark[static_cast<size_t>(v)] = in;
        for (int t : targets_of[static_cast<size_t>(v)]) {
            if (mark[static_cast<size_t>(t)] == out) continue;
            mark[static_cast<size_t>(t)] = out;
            for (int tt : targets_of[static_cast<size_t>(t)])
                if (--live_attackers[static_cast<size_t>(tt)] == 0 &&
                    mark[static_cast<size_t>(tt)] == undecided)
                    ready.push_back(tt);
        }
    }

    std::vector<std::string> result;
    for (int v = 0; v < n; ++v)
        if (mark[static_cast<size_t>(v)] == in) result.push_back(graph.arguments[static_cast<size_t>(v)]);
    std::sort(result.begin(), result.end());
    return result;
}

namespace {

// Unanimity verdict over a set of repliers: +1 iff every supporter wins and
// every attacker loses (min over J*s).
int min_verdict(const StateAssignment& states, const std::vector<int>& repliers,
                const SignMatrixView& sign) {
    for (int j : repliers)
        if (sign.toward_parent(j) * states.state[static_cast<size_t>(j)] < 0) return -1;
    return 1;
}

int majority_verdict(const StateAssignment& states, const std::vector<int>& repliers,
                     const SignMatrixView& sign) {
    long sum = 0;
    for (int j : repliers)
        sum += sign.toward_parent(j) * states.state[static_cast<size_t>(j)];
    return sum > 0 ? 1 : -1;  // ties lose
}

// Weighted majority: sum of J*s*(k+1)^(s*beta). Integer beta is evaluated
// exactly: terms are grouped by (weight base, state) so the bignum work
// scales with the number of distinct reply counts, then brought over the
// common denominator of the losing weights. Other betas use doubles with
// |sum| <= 1e-12 treated as a tie.
int generalized_majority_verdict(const ReplyTree& tree, const StateAssignment& states,
                                 const std::vector<int>& repliers,
                                 const SignMatrixView& sign, double beta) {
    const double rounded = std::nearbyint(beta);
    if (beta == rounded && rounded <= 1024.0) {
        const auto exponent = static_cast<unsigned>(rounded);
        std::map<int, long> winning_coeff, losing_coeff;  // weight base -> sum of J*s
        for (int j : repliers) {
            const int base = tree.in_degree(j) + 1;
            const int term = sign.toward_parent(j) * states.state[static_cast<size_t>(j)];
            if (states.state[static_cast<size_t>(j)] > 0)
                winning_coeff[base] += term;
            else
                losing_coeff[base] += term;
        }
        cpp_int denominator = 1;
        for (const auto& [base, coeff] : losing_coeff)
            denominator *= pow(cpp_int(base), exponent);
        cpp_int sum = 0;
        for (const auto& [base, coeff] : winning_coeff)
            sum += coeff * pow(cpp_int(base), exponent) * denominator;
        for (const auto& [base, coeff] : losing_coeff)
            sum += coeff * (denominator / pow(cpp_int(base), exponent));
        return sum > 0 ? 1 : -1;
    }
    double sum = 0.0;
    for (int j : repliers) {
        const double s = states.state[static_cast<size_t>(j)];
        sum += sign.toward_parent(j) * s *
               std::pow(static_cast<double>(tree.in_degree(j) + 1), s * beta);
    }
    return sum > 1e-12 ? 1 : -1;
}

} // namespace

StateAssignment propagate_states(const ReplyTree& tree, const WinningRule& rule) {
    StateAssignment result;
    result.rule = rule;
    result.state.assign(static_cast<size_t>(tree.size()), 0);
    const SignMatrixView sign(tree);

    for (int h = tree.depth(); h >= 0; --h) {
        for (int v : tree.levels()[static_cast<size_t>(h)]) {
            const auto& repliers = tree.node(v).children;
            int verdict = 1;
            if (!repliers.empty()) {
                switch (rule.kind) {
                case WinningRule::Kind::grounded:
                    verdict = min_verdict(result, repliers, sign);
                    break;
                case WinningRule::Kind::leaves_only_exception: {
                    std::vector<int> considered;
                    for (int j : repliers)
                        if (!tree.is_leaf(j)) considered.push_back(j);
                    // All repliers leaves: fall back to the plain rule.
                    verdict = considered.empty()
                                  ? min_verdict(result, repliers, sign)
                                  : min_verdict(result, considered, sign);
                    break;
                }
                case WinningRule::Kind::majority:
                    verdict = majority_verdict(result, repliers, sign);
                    break;
                case WinningRule::Kind::generalized_majority:
                    verdict = generalized_majority_verdict(tree, result, repliers, sign,
                                                           rule.beta);
                    break;
                }
            }
            result.state[static_cast<size_t>(v)] = static_cast<std::int8_t>(verdict);
        }
    }
    return result;
}

std::vector<std::set<std::string>> enumerate_extensions_oracle(const AttackGraph& graph) {
    const int n = static_cast<int>(graph.arguments.size());
    if (n > 20)
        throw Error(ErrorCode::too_large, "oracle limited to 20 arguments");

    std::vector<std::uint32_t> attackers(static_cast<size_t>(n), 0);
    std::vector<std::uint32_t> targets(static_cast<size_t>(n), 0);
    for (auto [a, b] : graph.attacks) {
        attackers[static_cast<size_t>(b)] |= 1u << a;
        targets[static_cast<size_t>(a)] |= 1u << b;
    }

    std::vector<std::set<std::string>> result;
    const std::uint32_t limit = n >= 32 ? 0 : (1u << n);
    for (std::uint32_t s = 0; s < limit; ++s) {
        std::uint32_t attacked_by_s = 0;
        for (int v = 0; v < n; ++v)
            if (s & (1u << v)) attacked_by_s |= targets[static_cast<size_t>(v)];
        if (attacked_by_s & s) continue;  // not conflict-free
        // Defended arguments: all attackers countered by S.
        std::uint32_t defended = 0;
        for (int v = 0; v < n; ++v)
            if ((attackers[static_cast<size_t>(v)] & ~attacked_by_s) == 0)
                defended |= 1u << v;
        if (defended != s) continue;  // complete = conflict-free fixed point
        std::set<std::string> extension;
        for (int v = 0; v < n; ++v)
            if (s & (1u << v)) extension.insert(graph.arguments[static_cast<size_t>(v)]);
        result.push_back(std::move(extension));
    }
    return result;
}

} // namespace argwin
