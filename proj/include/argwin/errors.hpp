#pragma once

#include <stdexcept>
#include <string>

namespace argwin {

// Machine-readable error codes; the CLI maps these onto its JSON error
// objects and exit statuses.
enum class ErrorCode {
    duplicate_id,
    multiple_roots,
    orphan_parent,
    cycle_detected,
    polarity_on_root,
    missing_polarity,
    no_edges,
    not_acyclic,
    too_large,
    invalid_probability,
    invalid_parameter,
    degenerate_tree,
    missing_leaf_profile,
    insufficient_levels,
    insufficient_tail,
    empty_ensemble,
    unreadable_path,
    parse_error,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

} // namespace argwin
