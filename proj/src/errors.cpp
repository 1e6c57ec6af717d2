#include "argwin/errors.hpp"

namespace argwin {

const char* error_code_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::duplicate_id: return "duplicate_id";
    case ErrorCode::multiple_roots: return "multiple_roots";
    case ErrorCode::orphan_parent: return "orphan_parent";
    case ErrorCode::cycle_detected: return "cycle_detected";
    case ErrorCode::polarity_on_root: return "polarity_on_root";
    case ErrorCode::missing_polarity: return "missing_polarity";
    case ErrorCode::no_edges: return "no_edges";
    case ErrorCode::not_acyclic: return "not_acyclic";
    case ErrorCode::too_large: return "too_large";
    case ErrorCode::invalid_probability: return "invalid_probability";
    case ErrorCode::invalid_parameter: return "invalid_parameter";
    case ErrorCode::degenerate_tree: return "degenerate_tree";
    case ErrorCode::missing_leaf_profile: return "missing_leaf_profile";
    case ErrorCode::insufficient_levels: return "insufficient_levels";
    case ErrorCode::insufficient_tail: return "insufficient_tail";
    case ErrorCode::empty_ensemble: return "empty_ensemble";
    case ErrorCode::unreadable_path: return "unreadable_path";
    case ErrorCode::parse_error: return "parse_error";
    }
    return "unknown";
}

} // namespace argwin
