#include "symdyn/symbolic.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <random>

#include <boost/multiprecision/cpp_int.hpp>

#include "symdyn/error.hpp"

namespace symdyn::symbolic {

using boost::multiprecision::cpp_int;

// ---- TransitionMatrix ------------------------------------------------------

TransitionMatrix TransitionMatrix::validate(const std::vector<std::vector<int>>& entries) {
    const int n = static_cast<int>(entries.size());
    if (n < 2) raise(errc::too_small, "need N >= 2 symbols, got " + std::to_string(n));
    for (const auto& row : entries) {
        if (static_cast<int>(row.size()) != n)
            raise(errc::not_binary, "matrix is not square");
        for (int v : row) {
            if (v != 0 && v != 1)
                raise(errc::not_binary, "entry " + std::to_string(v) + " is not 0 or 1");
        }
    }
    std::vector<std::vector<int>> succ(n);
    for (int i = 0; i < n; ++i) {
        int rs = 0;
        for (int j = 0; j < n; ++j) {
            rs += entries[i][j];
            if (entries[i][j]) succ[i].push_back(j + 1);
        }
        if (rs == 0) raise(errc::zero_row, "row " + std::to_string(i + 1) + " sums to 0");
    }
    for (int j = 0; j < n; ++j) {
        int cs = 0;
        for (int i = 0; i < n; ++i) cs += entries[i][j];
        if (cs == 0) raise(errc::zero_column, "column " + std::to_string(j + 1) + " sums to 0");
    }
    return TransitionMatrix(n, entries, std::move(succ));
}

TransitionMatrix TransitionMatrix::full(int n) {
    std::vector<std::vector<int>> e(n, std::vector<int>(n, 1));
    return validate(e);
}

bool TransitionMatrix::entry(int i, int j) const {
    if (i < 1 || i > n_ || j < 1 || j > n_)
        raise(errc::symbol_out_of_range, "symbol pair (" + std::to_string(i) + "," +
                                             std::to_string(j) + ") outside 1.." + std::to_string(n_));
    return entries_[i - 1][j - 1] != 0;
}

const std::vector<int>& TransitionMatrix::successors(int i) const {
    if (i < 1 || i > n_)
        raise(errc::symbol_out_of_range, "symbol " + std::to_string(i) + " outside 1.." + std::to_string(n_));
    return successors_[i - 1];
}

bool TransitionMatrix::is_irreducible() const {
    // Strong connectivity with paths of length >= 1: BFS from the successor
    // set of each node.
    for (int i = 1; i <= n_; ++i) {
        std::vector<bool> seen(n_ + 1, false);
        std::deque<int> queue(successors(i).begin(), successors(i).end());
        for (int s : queue) seen[s] = true;
        while (!queue.empty()) {
            int u = queue.front();
            queue.pop_front();
            for (int v : successors(u)) {
                if (!seen[v]) {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        for (int j = 1; j <= n_; ++j)
            if (!seen[j]) return false;
    }
    return true;
}

bool TransitionMatrix::row_sum_at_least_two() const {
    for (int i = 1; i <= n_; ++i)
        if (successors(i).size() >= 2) return true;
    return false;
}

// ---- words and generators --------------------------------------------------

namespace {

void check_pair(const TransitionMatrix& m, int a, int b, const char* what) {
    if (!m.entry(a, b))
        raise(errc::not_admissible, std::string(what) + ": forbidden pair (" + std::to_string(a) +
                                        "," + std::to_string(b) + ")");
}

void check_word(const TransitionMatrix& m, const std::vector<int>& w, const char* what) {
    for (int s : w) {
        if (s < 1 || s > m.size())
            raise(errc::symbol_out_of_range,
                  std::string(what) + ": symbol " + std::to_string(s) + " outside 1.." +
                      std::to_string(m.size()));
    }
    for (std::size_t k = 0; k + 1 < w.size(); ++k) check_pair(m, w[k], w[k + 1], what);
}

} // namespace

SymbolWord::SymbolWord(const TransitionMatrix& matrix, std::vector<int> symbols)
    : symbols_(std::move(symbols)) {
    check_word(matrix, symbols_, "word");
}

SymbolWord shift(const SymbolWord& w) {
    if (w.length() == 0) raise(errc::empty_word, "cannot shift an empty word");
    // The tail of an admissible word is admissible; no revalidation needed.
    SymbolWord out;
    out.symbols_.assign(w.symbols().begin() + 1, w.symbols().end());
    return out;
}

SymbolGenerator SymbolGenerator::periodic(const TransitionMatrix& m, std::vector<int> word) {
    return eventually_periodic(m, {}, std::move(word));
}

SymbolGenerator SymbolGenerator::eventually_periodic(const TransitionMatrix& m,
                                                     std::vector<int> prefix,
                                                     std::vector<int> cycle) {
    if (cycle.empty()) raise(errc::empty_word, "generator cycle must be nonempty");
    check_word(m, prefix, "generator prefix");
    check_word(m, cycle, "generator cycle");
    if (!prefix.empty()) check_pair(m, prefix.back(), cycle.front(), "prefix->cycle junction");
    check_pair(m, cycle.back(), cycle.front(), "cycle wrap");
    return SymbolGenerator(std::move(prefix), std::move(cycle));
}

SymbolGenerator SymbolGenerator::from_prefix(const TransitionMatrix& m, std::vector<int> prefix) {
    if (prefix.empty()) raise(errc::empty_word, "generator prefix must be nonempty");
    check_word(m, prefix, "generator prefix");
    // Walk the smallest-successor rule from the last symbol until a state
    // repeats; the walk splits into a pre-cycle extension and the cycle.
    std::vector<int> walk{prefix.back()};
    std::map<int, std::size_t> first_seen{{prefix.back(), 0}};
    for (;;) {
        int next = m.successors(walk.back()).front();
        auto it = first_seen.find(next);
        if (it != first_seen.end()) {
            std::vector<int> ext(walk.begin() + 1, walk.end());
            std::vector<int> cycle(walk.begin() + static_cast<long>(it->second), walk.end());
            prefix.insert(prefix.end(), ext.begin(), ext.end());
            return eventually_periodic(m, std::move(prefix), std::move(cycle));
        }
        first_seen[next] = walk.size();
        walk.push_back(next);
    }
}

int SymbolGenerator::at(std::int64_t index) const {
    if (index < 0) raise(errc::symbol_out_of_range, "negative sequence index");
    const auto plen = static_cast<std::int64_t>(prefix_.size());
    if (index < plen) return prefix_[static_cast<std::size_t>(index)];
    return cycle_[static_cast<std::size_t>((index - plen) % static_cast<std::int64_t>(cycle_.size()))];
}

std::vector<int> SymbolGenerator::prefix_word(std::int64_t length) const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(length));
    for (std::int64_t k = 0; k < length; ++k) out.push_back(at(k));
    return out;
}

SymbolGenerator SymbolGenerator::shifted(std::int64_t k) const {
    if (k < 0) raise(errc::symbol_out_of_range, "negative shift");
    SymbolGenerator out = *this;
    const auto plen = static_cast<std::int64_t>(prefix_.size());
    if (k <= plen) {
        out.prefix_.erase(out.prefix_.begin(), out.prefix_.begin() + static_cast<long>(k));
        return out;
    }
    std::int64_t r = (k - plen) % static_cast<std::int64_t>(cycle_.size());
    out.prefix_.clear();
    std::rotate(out.cycle_.begin(), out.cycle_.begin() + static_cast<long>(r), out.cycle_.end());
    return out;
}

double sequence_metric(const SymbolGenerator& a, const SymbolGenerator& b, int depth) {
    if (depth < 1) raise(errc::symbol_out_of_range, "metric depth must be >= 1");
    double sum = 0.0;
    double w = 1.0;
    for (int i = 0; i < depth; ++i, w *= 0.5)
        if (a.at(i) != b.at(i)) sum += w;
    return sum;
}

Cylinder cylinder(const TransitionMatrix& m, int i) {
    if (i < 1 || i > m.size())
        raise(errc::symbol_out_of_range, "cylinder symbol " + std::to_string(i));
    return Cylinder{i};
}

// ---- counting and the spectral radius --------------------------------------

namespace {

std::vector<cpp_int> mat_mul(const std::vector<cpp_int>& a, const std::vector<cpp_int>& b, int n) {
    std::vector<cpp_int> c(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            if (a[i * n + k] == 0) continue;
            for (int j = 0; j < n; ++j) c[i * n + j] += a[i * n + k] * b[k * n + j];
        }
    return c;
}

double log_cpp_int(const cpp_int& v) {
    // Safe for arbitrarily large counts: peel off the high bits.
    if (v <= 0) return -std::numeric_limits<double>::infinity();
    const auto bits = msb(v); // index of highest set bit
    if (bits <= 960) return std::log(v.convert_to<double>());
    const unsigned shift = static_cast<unsigned>(bits - 52);
    cpp_int top = v >> shift;
    return std::log(top.convert_to<double>()) + shift * std::log(2.0);
}

} // namespace

WordCount count_words(const TransitionMatrix& m, int length) {
    if (length < 1) raise(errc::symbol_out_of_range, "word length must be >= 1");
    const int n = m.size();
    std::vector<cpp_int> acc(static_cast<std::size_t>(n) * n, 0);
    std::vector<cpp_int> a(static_cast<std::size_t>(n) * n, 0);
    for (int i = 0; i < n; ++i) {
        acc[i * n + i] = 1;
        for (int j = 0; j < n; ++j) a[i * n + j] = m.rows()[i][j];
    }
    for (int k = 0; k < length - 1; ++k) acc = mat_mul(acc, a, n);
    cpp_int total = 0;
    for (const auto& v : acc) total += v;
    WordCount out;
    out.digits = total.str();
    out.log_e = log_cpp_int(total);
    out.value = total.convert_to<double>();
    return out;
}

double spectral_radius(const TransitionMatrix& m, double tol) {
    if (!(tol > 0)) raise(errc::symbol_out_of_range, "tol must be positive");
    const int n = m.size();
    // Power iteration on A+I from the all-ones vector. The shift makes the
    // peripheral eigenvalue of a nonnegative matrix unique, so the Rayleigh
    // sequence converges even for periodic transition graphs.
    std::vector<double> x(n, 1.0);
    double prev = std::numeric_limits<double>::quiet_NaN();
    constexpr long kCap = 100000;
    for (long it = 0; it < kCap; ++it) {
        std::vector<double> y(n, 0.0);
        for (int i = 0; i < n; ++i) {
            double s = x[i]; // the +I part
            for (int j : m.successors(i + 1)) s += x[j - 1];
            y[i] = s;
        }
        double num = 0.0, den = 0.0;
        for (int i = 0; i < n; ++i) {
            num += x[i] * y[i];
            den += x[i] * x[i];
        }
        const double rayleigh = num / den;
        double norm = 0.0;
        for (double v : y) norm = std::max(norm, std::fabs(v));
        for (double& v : y) v /= norm;
        x = std::move(y);
        if (!std::isnan(prev) && std::fabs(rayleigh - prev) < tol) return rayleigh - 1.0;
        prev = rayleigh;
    }
    raise(errc::non_convergence, "power iteration did not settle within 1e5 iterations");
}

// ---- connectors, random generators, enumeration ----------------------------

std::vector<int> connector_path(const TransitionMatrix& m, int from, int to) {
    if (m.entry(from, to)) return {};
    // BFS over successors (visited in ascending order, so the first path
    // found is shortest with smallest-symbol tie-breaking). The target is
    // tested before the seen-gate so cycles back to the start are found.
    std::vector<int> parent(m.size() + 1, 0);
    std::deque<int> queue{from};
    std::vector<bool> seen(m.size() + 1, false);
    seen[from] = true;
    while (!queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        for (int v : m.successors(u)) {
            if (v == to) {
                std::vector<int> path;
                for (int w = u; w != from; w = parent[w]) path.push_back(w);
                std::reverse(path.begin(), path.end());
                return path;
            }
            if (seen[v]) continue;
            seen[v] = true;
            parent[v] = u;
            queue.push_back(v);
        }
    }
    raise(errc::not_admissible, "no path " + std::to_string(from) + " -> " + std::to_string(to));
}

SymbolGenerator random_admissible(const TransitionMatrix& m, std::uint64_t seed,
                                  std::int64_t prefix_len) {
    if (prefix_len < 1) raise(errc::symbol_out_of_range, "prefix length must be >= 1");
    std::mt19937_64 rng(seed);
    std::vector<int> prefix;
    prefix.reserve(static_cast<std::size_t>(prefix_len));
    std::uniform_int_distribution<int> start(1, m.size());
    prefix.push_back(start(rng));
    for (std::int64_t k = 1; k < prefix_len; ++k) {
        const auto& succ = m.successors(prefix.back());
        std::uniform_int_distribution<std::size_t> pick(0, succ.size() - 1);
        prefix.push_back(succ[pick(rng)]);
    }
    return SymbolGenerator::from_prefix(m, std::move(prefix));
}

std::vector<std::vector<int>> enumerate_words(const TransitionMatrix& m, int length) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int remaining) -> void {
        if (remaining == 0) {
            out.push_back(cur);
            return;
        }
        if (cur.empty()) {
            for (int s = 1; s <= m.size(); ++s) {
                cur.push_back(s);
                self(self, remaining - 1);
                cur.pop_back();
            }
        } else {
            for (int s : m.successors(cur.back())) {
                cur.push_back(s);
                self(self, remaining - 1);
                cur.pop_back();
            }
        }
    };
    rec(rec, length);
    return out;
}

// ---- the scrambled pair -----------------------------------------------------

namespace {

// Block schedule: index 0 and the blocks [4^k, 2*4^k) agree; [2*4^k, 4^(k+1))
// disagree.
bool agree_at(std::int64_t j) {
    if (j == 0) return true;
    std::int64_t base = 1;
    while (base * 4 <= j) base *= 4;
    return j < 2 * base;
}

} // namespace

std::pair<SymbolGenerator, SymbolGenerator> scrambled_pair(const TransitionMatrix& m,
                                                           std::int64_t horizon) {
    if (!m.is_irreducible() || !m.row_sum_at_least_two())
        raise(errc::not_chaotic_matrix,
              "scrambled pair needs an irreducible matrix with some row sum >= 2");

    int branch = 1;
    while (m.successors(branch).size() < 2) ++branch;
    const int p = m.successors(branch)[0];
    const int q = m.successors(branch)[1];

    const std::int64_t total = horizon + 192;
    std::vector<int> a{branch}, b{branch};
    a.reserve(static_cast<std::size_t>(total));
    b.reserve(static_cast<std::size_t>(total));

    // Pending connector symbols override the mode until consumed: they keep
    // the sequences admissible when the matrix forces a route.
    std::deque<int> route_a, route_b;

    while (static_cast<std::int64_t>(a.size()) < total) {
        const std::int64_t j = static_cast<std::int64_t>(a.size());
        int sa = a.back(), sb = b.back();
        int na = 0, nb = 0;
        if (!route_a.empty()) {
            na = route_a.front();
            route_a.pop_front();
        }
        if (!route_b.empty()) {
            nb = route_b.front();
            route_b.pop_front();
        }
        if (na && nb) {
            a.push_back(na);
            b.push_back(nb);
            continue;
        }
        if (agree_at(j)) {
            if (na || nb) {
                // one stream routed; the other mirrors if allowed, else walks
                if (na) {
                    nb = m.entry(sb, na) ? na : m.successors(sb).front();
                } else {
                    na = m.entry(sa, nb) ? nb : m.successors(sa).front();
                }
            } else if (sa == sb) {
                na = nb = m.successors(sa).front();
            } else {
                // converge: smallest common successor if any, else route a to b
                int common = 0;
                for (int v : m.successors(sa))
                    if (m.entry(sb, v)) {
                        common = v;
                        break;
                    }
                if (common) {
                    na = nb = common;
                } else {
                    nb = m.successors(sb).front();
                    auto path = connector_path(m, sa, nb);
                    path.push_back(nb);
                    na = path.front();
                    for (std::size_t t = 1; t < path.size(); ++t) route_a.push_back(path[t]);
                }
            }
        } else {
            if (sa == sb) {
                if (m.successors(sa).size() >= 2) {
                    na = m.successors(sa)[0];
                    nb = m.successors(sa)[1];
                } else if (sa == branch) {
                    na = p;
                    nb = q;
                } else {
                    // march both toward the branching symbol, then split
                    auto path = connector_path(m, sa, branch);
                    path.push_back(branch);
                    na = nb = path.front();
                    for (std::size_t t = 1; t < path.size(); ++t) {
                        route_a.push_back(path[t]);
                        route_b.push_back(path[t]);
                    }
                }
            } else {
                if (!na) na = m.successors(sa).front();
                if (!nb) {
                    nb = m.successors(sb).front();
                    if (nb == na && m.successors(sb).size() >= 2) nb = m.successors(sb)[1];
                }
                if (nb == na && m.successors(sa).size() >= 2) na = m.successors(sa)[1];
            }
        }
        a.push_back(na);
        b.push_back(nb);
    }
    return {SymbolGenerator::from_prefix(m, std::move(a)),
            SymbolGenerator::from_prefix(m, std::move(b))};
}

} // namespace symdyn::symbolic
