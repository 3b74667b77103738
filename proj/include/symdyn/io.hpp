// Deterministic text output helpers: shortest round-trip double formatting
// and a small CSV writer. No locale dependence, normalized line endings.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace symdyn::io {

/// Shortest representation that round-trips exactly (std::to_chars).
std::string format_double(double v);

std::string format_int(long long v);

/// Row-oriented CSV accumulator with a fixed header. '\n' line endings.
class Csv {
public:
    explicit Csv(std::vector<std::string> header);

    void add(std::vector<std::string> row);
    std::size_t rows() const { return rows_.size(); }
    std::string str() const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

/// Exact fraction parsing: accepts a plain decimal or "p/q".
double parse_number(const std::string& text);

} // namespace symdyn::io
