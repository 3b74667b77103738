#include "symdyn/io.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include "symdyn/error.hpp"

namespace symdyn::io {

std::string format_double(double v) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) return "nan";
    return std::string(buf, ptr);
}

std::string format_int(long long v) {
    char buf[24];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

Csv::Csv(std::vector<std::string> header) : header_(std::move(header)) {}

void Csv::add(std::vector<std::string> row) {
    if (row.size() != header_.size())
        throw std::logic_error("csv row width mismatch");
    rows_.push_back(std::move(row));
}

std::string Csv::str() const {
    std::ostringstream out;
    for (std::size_t j = 0; j < header_.size(); ++j)
        out << (j ? "," : "") << header_[j];
    out << '\n';
    for (const auto& row : rows_) {
        for (std::size_t j = 0; j < row.size(); ++j)
            out << (j ? "," : "") << row[j];
        out << '\n';
    }
    return out.str();
}

double parse_number(const std::string& text) {
    auto fail = [&] { raise(errc::parse_error, "not a number or fraction: '" + text + "'"); };
    if (text.empty()) fail();
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        double p = 0, q = 0;
        const char* b = text.data();
        auto r1 = std::from_chars(b, b + slash, p);
        auto r2 = std::from_chars(b + slash + 1, b + text.size(), q);
        if (r1.ec != std::errc() || r2.ec != std::errc() || r1.ptr != b + slash ||
            r2.ptr != b + text.size() || q == 0.0)
            fail();
        return p / q;
    }
    double v = 0;
    auto r = std::from_chars(text.data(), text.data() + text.size(), v);
    if (r.ec != std::errc() || r.ptr != text.data() + text.size()) fail();
    return v;
}

} // namespace symdyn::io
