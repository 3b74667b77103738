// Subshifts of finite type: transition matrices, admissible words and
// generators, the sequence metric, word counts, spectral radius, and the
// scrambled-pair construction. Symbols are 1-based everywhere.
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace symdyn::symbolic {

/// N x N 0/1 matrix with no zero row or column, N >= 2. Immutable.
class TransitionMatrix {
public:
    /// Validates and constructs. Errors: too_small, not_binary, zero_row, zero_column.
    static TransitionMatrix validate(const std::vector<std::vector<int>>& entries);

    static TransitionMatrix full(int n);

    int size() const { return n_; }
    bool entry(int i, int j) const; // 1-based
    /// Allowed successors of symbol i, ascending. 1-based.
    const std::vector<int>& successors(int i) const;
    const std::vector<std::vector<int>>& rows() const { return entries_; }

    /// Strong connectivity of the transition graph (a^(k)_{ij} > 0 for some k >= 1,
    /// for every ordered pair).
    bool is_irreducible() const;
    /// True iff some row sums to >= 2.
    bool row_sum_at_least_two() const;

    bool operator==(const TransitionMatrix&) const = default;

private:
    TransitionMatrix(int n, std::vector<std::vector<int>> e, std::vector<std::vector<int>> succ)
        : n_(n), entries_(std::move(e)), successors_(std::move(succ)) {}
    int n_;
    std::vector<std::vector<int>> entries_;
    std::vector<std::vector<int>> successors_;
};

/// Finite admissible word.
class SymbolWord {
public:
    SymbolWord(const TransitionMatrix& matrix, std::vector<int> symbols);

    const std::vector<int>& symbols() const { return symbols_; }
    std::size_t length() const { return symbols_.size(); }
    int at(std::size_t k) const { return symbols_.at(k); }

    bool operator==(const SymbolWord&) const = default;

private:
    friend SymbolWord shift(const SymbolWord& w);
    SymbolWord() = default;
    std::vector<int> symbols_;
};

/// Drops the first symbol. Errors: empty_word.
SymbolWord shift(const SymbolWord& w);

/// Deterministic infinite admissible sequence, stored as an explicit prefix
/// followed by a repeating cycle. Every generator kind (periodic word,
/// explicit list with a deterministic tail) normalizes to this shape, which
/// is closed under the shift.
class SymbolGenerator {
public:
    /// Periodic repetition of `word` (the wrap pair must be admissible).
    static SymbolGenerator periodic(const TransitionMatrix& m, std::vector<int> word);
    /// Explicit prefix followed by a repeating cycle; all junctions checked.
    static SymbolGenerator eventually_periodic(const TransitionMatrix& m,
                                               std::vector<int> prefix,
                                               std::vector<int> cycle);
    /// Explicit prefix extended by the smallest-successor rule until the
    /// walk closes into a cycle.
    static SymbolGenerator from_prefix(const TransitionMatrix& m, std::vector<int> prefix);

    int at(std::int64_t index) const;
    std::vector<int> prefix_word(std::int64_t length) const;
    SymbolGenerator shifted(std::int64_t k = 1) const;

    const std::vector<int>& prefix() const { return prefix_; }
    const std::vector<int>& cycle() const { return cycle_; }

private:
    SymbolGenerator(std::vector<int> prefix, std::vector<int> cycle)
        : prefix_(std::move(prefix)), cycle_(std::move(cycle)) {}
    std::vector<int> prefix_;
    std::vector<int> cycle_; // nonempty
};

/// Truncated sequence metric: sum_{i<depth} [a_i != b_i] / 2^i.
/// Truncation error of the full metric is at most 2^(1-depth).
double sequence_metric(const SymbolGenerator& a, const SymbolGenerator& b, int depth);

/// Membership test for the cylinder U_i = { alpha : alpha_0 = i }.
struct Cylinder {
    int symbol = 0;
    bool contains(const SymbolGenerator& g) const { return g.at(0) == symbol; }
};

/// Errors: symbol_out_of_range.
Cylinder cylinder(const TransitionMatrix& m, int i);

/// Exact count of admissible words of the given length
/// (= sum of entries of A^(length-1)), computed with big integers.
struct WordCount {
    std::string digits; ///< exact decimal count
    double log_e;       ///< natural log of the count
    double value;       ///< count as double (inf when out of range)
};

WordCount count_words(const TransitionMatrix& m, int length);

/// Perron root via power iteration started from the all-ones vector,
/// stopping when successive Rayleigh estimates differ by less than tol.
/// Iterates the shifted matrix A+I so the peripheral eigenvalue is unique
/// even for periodic matrices; the returned value is rho(A).
/// Errors: non_convergence after 1e5 iterations.
double spectral_radius(const TransitionMatrix& m, double tol);

/// Shortest path i -> j in the transition graph (symbols strictly between
/// the endpoints), ties broken by smallest symbol. Empty when a_{ij} = 1.
std::vector<int> connector_path(const TransitionMatrix& m, int from, int to);

/// Witness pair for Li-Yorke statistics: the two sequences agree on the
/// blocks [4^k, 2*4^k) and disagree on [2*4^k, 4^(k+1)), stitched through
/// BFS connectors where the matrix forces it. Explicit symbols are produced
/// out to `horizon` plus slack; the tails follow the smallest-successor rule.
/// Errors: not_chaotic_matrix unless the matrix is irreducible with some
/// row sum >= 2.
std::pair<SymbolGenerator, SymbolGenerator> scrambled_pair(const TransitionMatrix& m,
                                                           std::int64_t horizon);

/// Seeded uniform-successor random admissible generator with an explicit
/// prefix of the given length.
SymbolGenerator random_admissible(const TransitionMatrix& m, std::uint64_t seed,
                                  std::int64_t prefix_len);

/// All admissible words of the given length, lexicographic. Intended for
/// desk-scale enumeration (counts must fit in memory).
std::vector<std::vector<int>> enumerate_words(const TransitionMatrix& m, int length);

} // namespace symdyn::symbolic
