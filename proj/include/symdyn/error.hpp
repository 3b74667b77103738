// Error codes and the single exception type used across the library.
#pragma once

#include <stdexcept>
#include <string>

namespace symdyn {

enum class errc {
    // transition matrices / symbol sequences
    not_binary,
    zero_row,
    zero_column,
    too_small,
    empty_word,
    symbol_out_of_range,
    not_admissible,
    not_chaotic_matrix,
    non_convergence,
    // maps
    out_of_domain,
    out_of_domain_at_step,
    degenerate_region,
    // covering verification
    not_one_dimensional,
    not_two_dimensional,
    aperiodic_rule,
    separation_violation,
    face_test_inconclusive,
    // coding
    empty_cell,
    no_contraction,
    orbit_escapes,
    boundary_ambiguity,
    // regions
    dimension_mismatch,
    // statistics
    covering_required,
    insufficient_samples,
    // scenarios / CLI
    parse_error,
    validation_error,
    unknown_command,
};

const char* errc_name(errc c) noexcept;

/// Exception carrying a machine-readable code plus an optional step index
/// (meaningful for out_of_domain_at_step and orbit_escapes).
class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& msg, long step = -1);

    errc code() const noexcept { return code_; }
    long step() const noexcept { return step_; }

private:
    errc code_;
    long step_;
};

[[noreturn]] void raise(errc code, const std::string& msg, long step = -1);

} // namespace symdyn
