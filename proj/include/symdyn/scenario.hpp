// Scenario loading and the bundled demonstration scenarios. Scenario files
// are versioned JSON; numbers may be given as decimals or exact fractions
// "p/q" so interval endpoints like 15/16 carry no representation drift.
#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "symdyn/dynsys.hpp"
#include "symdyn/expansion.hpp"
#include "symdyn/symbolic.hpp"

namespace symdyn::scenario {

struct Tolerances {
    double merge = 1e-14;
    double geom = 1e-12;
    double decode = 1e-9;
};

struct Scenario {
    std::string name;
    int dimension = 1;
    std::uint64_t seed = 0;
    symbolic::TransitionMatrix matrix = symbolic::TransitionMatrix::full(2);
    dynsys::MapSequence seq = dynsys::MapSequence::family_2d({}, 1.0);
    std::optional<expansion::CoveringFamily1D> family1;
    std::optional<expansion::CoveringFamily2D> family2;
    Tolerances tol;
    long verify_horizon = 4;
    long default_horizon = 4096;
    expansion::ScenarioFlags flags;

    std::string to_json_text() const;
};

/// Names of the bundled scenarios.
bool is_builtin(const std::string& name);
std::vector<std::string> builtin_names();

/// Bundled 1D scenario: the two quartic/plateau interval maps with covering
/// sets V1 = [0,1/2], V2 = [3/4,2]. The map pattern is a parameter:
/// "all-f1", "all-f2", "alternate", or an explicit bit string like "0110"
/// (0 = f1 step, 1 = f2 step), repeated periodically.
Scenario builtin_example_51(const std::string& pattern = "alternate");

/// Bundled planar scenario: component k of F_n is n/(n+1)*sin(x_other) +
/// saw2(12*x_k), boxes V1 = [-1/6,1/6]^2 and V2 = [1/2,5/6]^2.
Scenario builtin_example_52();

/// Deliberately failing 1D scenario: the identity map cannot cover two
/// separated sets. Used for exit-code and failure-path tests.
Scenario builtin_counterexample_identity();

/// Loads a bundled scenario by name or a JSON scenario file by path, with
/// optional pattern/seed overrides. All invariants are validated eagerly.
/// Errors: parse_error (with location), validation_error (with the violated
/// invariant).
Scenario load_scenario(const std::string& name_or_path,
                       const std::optional<std::string>& pattern = std::nullopt,
                       const std::optional<std::uint64_t>& seed = std::nullopt);

/// Parses scenario JSON text (same validation as load_scenario).
Scenario parse_scenario_text(const std::string& text, const std::string& origin,
                             const std::optional<std::string>& pattern = std::nullopt,
                             const std::optional<std::uint64_t>& seed = std::nullopt);

} // namespace symdyn::scenario
