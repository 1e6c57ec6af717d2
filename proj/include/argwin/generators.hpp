#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "argwin/degree_model.hpp"
#include "argwin/reply_tree.hpp"

namespace argwin {

enum class GeneratorKind { homogeneous_depth, preferential_attachment };

// Parameters of one synthetic ensemble. Tree `index` maps deterministically
// onto its own RNG sub-streams, so generation order and thread count never
// change the output.
struct EnsembleSpec {
    GeneratorKind kind = GeneratorKind::homogeneous_depth;
    long tree_count = 1;
    int depth = 0;                     // homogeneous: target depth N
    std::optional<DegreeModel> model;  // homogeneous: in-degree model
    int nodes = 0;                     // preferential attachment: tree size
    double q = 0.5;
    std::uint64_t master_seed = 0;

    void validate() const;
    std::string describe() const;
};

struct HomogeneousTree {
    ReplyTree tree;
    bool reached_depth = false;  // false: process died out early (flagged degenerate)
};

// Fixed-depth tree built level by level: every node above the last level
// draws its reply count from the model, level N is forced leaves. Edge
// signs come from a stream independent of the topology stream.
HomogeneousTree generate_homogeneous(int depth, const DegreeModel& model, double q,
                                     std::uint64_t seed);

// Growing random tree: starting from root plus one child, each new node
// attaches to node i with probability proportional to i's total degree.
ReplyTree generate_preferential(int nodes, double q, std::uint64_t seed);

// Tree `index` of the ensemble, a pure function of (spec, index).
// Homogeneous trees are NOT conditioned on reaching the target depth:
// conditioning skews the in-degree distribution near the root (a surviving
// lineage must exist) and the per-level statistics then drift from the
// unconditional recurrence. Early-extinct trees simply stop short, which is
// exactly what the recurrence's p(0) term describes.
ReplyTree ensemble_tree(const EnsembleSpec& spec, long index);

} // namespace argwin
