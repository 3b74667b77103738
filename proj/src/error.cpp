#include "symdyn/error.hpp"

namespace symdyn {

const char* errc_name(errc c) noexcept {
    switch (c) {
        case errc::not_binary: return "NotBinary";
        case errc::zero_row: return "ZeroRow";
        case errc::zero_column: return "ZeroColumn";
        case errc::too_small: return "TooSmall";
        case errc::empty_word: return "EmptyWord";
        case errc::symbol_out_of_range: return "SymbolOutOfRange";
        case errc::not_admissible: return "NotAdmissible";
        case errc::not_chaotic_matrix: return "NotChaoticMatrix";
        case errc::non_convergence: return "NonConvergence";
        case errc::out_of_domain: return "OutOfDomain";
        case errc::out_of_domain_at_step: return "OutOfDomainAtStep";
        case errc::degenerate_region: return "DegenerateRegion";
        case errc::not_one_dimensional: return "NotOneDimensional";
        case errc::not_two_dimensional: return "NotTwoDimensional";
        case errc::aperiodic_rule: return "AperiodicRule";
        case errc::separation_violation: return "SeparationViolation";
        case errc::face_test_inconclusive: return "FaceTestInconclusive";
        case errc::empty_cell: return "EmptyCell";
        case errc::no_contraction: return "NoContraction";
        case errc::orbit_escapes: return "OrbitEscapes";
        case errc::boundary_ambiguity: return "BoundaryAmbiguity";
        case errc::dimension_mismatch: return "DimensionMismatch";
        case errc::covering_required: return "CoveringRequired";
        case errc::insufficient_samples: return "InsufficientSamples";
        case errc::parse_error: return "ParseError";
        case errc::validation_error: return "ValidationError";
        case errc::unknown_command: return "UnknownCommand";
    }
    return "Unknown";
}

Error::Error(errc code, const std::string& msg, long step)
    : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code), step_(step) {}

void raise(errc code, const std::string& msg, long step) { throw Error(code, msg, step); }

} // namespace symdyn
