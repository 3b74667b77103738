// Command-line front end: scenario verification, decoding, orbits, and
// chaos/entropy statistics, with deterministic CSV/text payloads.
#include <CLI11.hpp>

#include "symdyn/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"symbolic dynamics & coupled-expansion verification toolkit"};
    app.require_subcommand(1);

    symdyn::cli::Options opt;

    const std::vector<std::string> commands = {
        "sft-info",  "verify-expansion", "decode",  "itinerary", "conjugacy-check", "orbit",
        "set-orbit", "chaos-stats",      "entropy", "classify",  "report"};

    for (const auto& name : commands) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("scenario", opt.scenario,
                        "bundled scenario name (example-5.1, example-5.2, "
                        "counterexample-identity) or a JSON scenario path");
        sub->add_option("--out", opt.out, "write the payload to this file instead of stdout");
        sub->add_option("--seed", opt.seed, "override the scenario seed");
        sub->add_option("--horizon", opt.horizon, "verification / statistics horizon");
        sub->add_option("--depth", opt.depth, "decode depth cap");
        sub->add_option("--tol", opt.tol, "tolerance override for this command");
        sub->add_option("--samples", opt.samples, "sample budget");
        sub->add_option("--pattern", opt.pattern,
                        "map pattern for 1D scenarios (all-f1, all-f2, alternate, or a 0/1 string)");
        sub->add_option("--alpha", opt.alpha, "symbol sequence: \"1,1,2\" or \"periodic:1,2\"");
        sub->add_option("--x0", opt.x0, "initial point: \"x\" or \"x1,x2\" (fractions allowed)");
        sub->add_option("--y0", opt.y0, "second point for pair statistics");
        sub->add_option("--a0", opt.a0, "initial region as JSON: [[lo,hi],...] or [[x,y],...]");
        sub->add_option("--steps", opt.steps, "number of steps");
        sub->add_option("--start", opt.start, "start time index n");
        sub->add_option("--method", opt.method,
                        "entropy method: word-count, itinerary-count, separated-set, induced");
        sub->add_option("--pair", opt.pair,
                        "chaos-stats pair: decoded-scrambled, symbolic-scrambled, points");
        sub->add_option("--grid", opt.grid, "face-sampling grid for 2D verification");
        sub->callback([&opt, name] { opt.command = name; });
    }

    CLI11_PARSE(app, argc, argv);
    return symdyn::cli::dispatch(opt);
}
