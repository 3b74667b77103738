// Command dispatch shared by the binary and the CLI tests.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace symdyn::cli {

struct Options {
    std::string command;
    std::string scenario; // builtin name or path
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed;
    std::optional<long> horizon;
    std::optional<int> depth;
    std::optional<double> tol;
    std::optional<int> samples;
    std::optional<std::string> pattern;
    std::optional<std::string> alpha;   // symbol list "1,2,1" or "periodic:1,2"
    std::optional<std::string> x0;      // "x" or "x1,x2"
    std::optional<std::string> y0;
    std::optional<std::string> a0;      // region literal, e.g. "[[0,0.25]]" or "[[x,y],...]"
    std::optional<long> steps;
    std::optional<long> start;
    std::optional<std::string> method;  // entropy method
    std::optional<std::string> pair;    // chaos-stats pair selector
    int grid = 256;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitVerifyFail = 2;

/// Runs one command; writes the payload to options.out (or stdout) and a
/// human summary to stderr. Returns the process exit code: 0 success,
/// 2 verification failure, 1 error.
int dispatch(const Options& options);

/// Number of worker threads honored by sampling loops: SYMDYN_THREADS
/// clamped to [1, hardware]. Purely a cap; results are schedule-independent.
unsigned thread_cap();

} // namespace symdyn::cli
