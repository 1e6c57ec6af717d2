#include "argwin/generators.hpp"

#include <sstream>

#include "argwin/numeric.hpp"

namespace argwin {

namespace {

// Salt words for the per-tree sub-streams.
enum : std::uint64_t { salt_topology = 0x746f706f, salt_sign = 0x7369676e };

std::string node_name(int index) { return "n" + std::to_string(index); }

void check_q(double q) {
    if (!(q >= 0.0 && q <= 1.0))
        throw Error(ErrorCode::invalid_probability, "q must lie in [0,1]");
}

std::optional<Polarity> draw_polarity(rng::Stream& sign_stream, double q) {
    return sign_stream.next_bernoulli(q) ? Polarity::support : Polarity::attack;
}

} // namespace

void EnsembleSpec::validate() const {
    check_q(q);
    if (tree_count < 1)
        throw Error(ErrorCode::invalid_parameter, "tree_count must be >= 1");
    if (kind == GeneratorKind::homogeneous_depth) {
        if (depth < 1)
            throw Error(ErrorCode::invalid_parameter, "depth must be >= 1");
        if (!model)
            throw Error(ErrorCode::invalid_parameter, "homogeneous ensembles need a degree model");
    } else {
        if (nodes < 2)
            throw Error(ErrorCode::invalid_parameter, "preferential attachment needs >= 2 nodes");
    }
}

std::string EnsembleSpec::describe() const {
    std::ostringstream out;
    if (kind == GeneratorKind::homogeneous_depth)
        out << "homogeneous(depth=" << depth << "," << model->describe() << ")";
    else
        out << "preferential(nodes=" << nodes << ")";
    out << " q=" << numeric::format_double(q) << " trees=" << tree_count
        << " seed=" << master_seed;
    return out.str();
}

HomogeneousTree generate_homogeneous(int depth, const DegreeModel& model, double q,
                                     std::uint64_t seed) {
    if (depth < 1)
        throw Error(ErrorCode::invalid_parameter, "depth must be >= 1");
    check_q(q);
    constexpr int kMaxNodes = 1 << 22;  // heavy branching x depth explodes fast
    rng::Stream topology(rng::derive_seed(seed, {salt_topology}));
    rng::Stream signs(rng::derive_seed(seed, {salt_sign}));

    std::vector<TreeRecord> records;
    records.push_back({node_name(0), std::nullopt, std::nullopt});
    int next_id = 1;
    // Node indices of the level under construction.
    std::vector<int> frontier{0};
    int reached = 0;
    for (int h = 0; h < depth && !frontier.empty(); ++h) {
        std::vector<int> next_frontier;
        for (int parent : frontier) {
            const int replies = model.sample(topology);
            if (next_id + replies > kMaxNodes)
                throw Error(ErrorCode::invalid_parameter,
                            "tree exceeds " + std::to_string(kMaxNodes) +
                                " nodes; branching too heavy for this depth");
            for (int r = 0; r < replies; ++r) {
                records.push_back(
                    {node_name(next_id), records[static_cast<size_t>(parent)].id,
                     draw_polarity(signs, q)});
                next_frontier.push_back(next_id);
                ++next_id;
            }
        }
        if (!next_frontier.empty()) reached = h + 1;
        frontier = std::move(next_frontier);
    }
    return {ReplyTree::build(std::move(records)), reached == depth};
}

ReplyTree generate_preferential(int nodes, double q, std::uint64_t seed) {
    if (nodes < 2)
        throw Error(ErrorCode::invalid_parameter, "preferential attachment needs >= 2 nodes");
    check_q(q);
    rng::Stream topology(rng::derive_seed(seed, {salt_topology}));
    rng::Stream signs(rng::derive_seed(seed, {salt_sign}));

    std::vector<TreeRecord> records;
    records.push_back({node_name(0), std::nullopt, std::nullopt});
    records.push_back({node_name(1), node_name(0), draw_polarity(signs, q)});
    // Degree-proportional choice: every edge deposits both endpoints, so a
    // uniform pick over deposits is a pick proportional to total degree.
    std::vector<int> endpoints{0, 1};
    for (int v = 2; v < nodes; ++v) {
        const int target =
            endpoints[static_cast<size_t>(topology.next_below(endpoints.size()))];
        records.push_back(
            {node_name(v), records[static_cast<size_t>(target)].id, draw_polarity(signs, q)});
        endpoints.push_back(target);
        endpoints.push_back(v);
    }
    return ReplyTree::build(std::move(records));
}

ReplyTree ensemble_tree(const EnsembleSpec& spec, long index) {
    spec.validate();
    const std::uint64_t seed =
        rng::derive_seed(spec.master_seed, {static_cast<std::uint64_t>(index), 0});
    if (spec.kind == GeneratorKind::preferential_attachment)
        return generate_preferential(spec.nodes, spec.q, seed);
    return generate_homogeneous(spec.depth, *spec.model, spec.q, seed).tree;
}

} // namespace argwin
