#include "symdyn/scenario.hpp"

#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "symdyn/error.hpp"
#include "symdyn/io.hpp"

namespace symdyn::scenario {

using json = nlohmann::ordered_json;
using dynsys::AffineExpr;
using dynsys::ConstantExpr;
using dynsys::Expr;
using dynsys::Map1D;
using dynsys::MapSequence;
using dynsys::Piece1D;
using dynsys::QuadraticExpr;
using dynsys::SawtoothExpr;
using dynsys::WeightRule;

namespace {

constexpr int kFormatVersion = 1;

double num(const json& j, const std::string& where) {
    if (j.is_string()) return io::parse_number(j.get<std::string>());
    if (j.is_number()) return j.get<double>();
    raise(errc::parse_error, where + ": expected a number or \"p/q\" fraction");
}

Interval interval_of(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2)
        raise(errc::parse_error, where + ": expected [lo, hi]");
    Interval iv{num(j[0], where + "[0]"), num(j[1], where + "[1]")};
    if (!(iv.lo <= iv.hi)) raise(errc::validation_error, where + ": lo > hi");
    return iv;
}

json interval_json(const Interval& iv) { return json::array({iv.lo, iv.hi}); }

Expr expr_of(const json& j, const std::string& where) {
    const std::string kind = j.value("kind", "");
    if (kind == "constant") return ConstantExpr{num(j.at("c"), where + ".c")};
    if (kind == "affine") return AffineExpr{num(j.at("p"), where + ".p"), num(j.at("q"), where + ".q")};
    if (kind == "quadratic")
        return QuadraticExpr{num(j.at("c"), where + ".c"), num(j.at("d"), where + ".d")};
    if (kind == "sawtooth") return SawtoothExpr{num(j.at("scale"), where + ".scale")};
    raise(errc::parse_error, where + ": unknown expression kind '" + kind + "'");
}

json expr_json(const Expr& e) {
    json out;
    std::visit(
        [&](const auto& k) {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, ConstantExpr>) {
                out["kind"] = "constant";
                out["c"] = k.c;
            } else if constexpr (std::is_same_v<T, AffineExpr>) {
                out["kind"] = "affine";
                out["p"] = k.p;
                out["q"] = k.q;
            } else if constexpr (std::is_same_v<T, QuadraticExpr>) {
                out["kind"] = "quadratic";
                out["c"] = k.c;
                out["d"] = k.d;
            } else {
                out["kind"] = "sawtooth";
                out["scale"] = k.scale;
            }
        },
        e);
    return out;
}

Piece1D piece_of(const json& j, const std::string& where) {
    Piece1D p;
    p.domain = interval_of(j.at("domain"), where + ".domain");
    const std::string closed = j.value("closed", "both");
    if (closed == "both") {
        p.closed_lo = p.closed_hi = true;
    } else if (closed == "left") {
        p.closed_lo = true;
        p.closed_hi = false;
    } else if (closed == "right") {
        p.closed_lo = false;
        p.closed_hi = true;
    } else {
        raise(errc::parse_error, where + ".closed: expected both/left/right");
    }
    p.expr = expr_of(j.at("expr"), where + ".expr");
    return p;
}

json piece_json(const Piece1D& p) {
    json out;
    out["domain"] = interval_json(p.domain);
    out["closed"] = p.closed_lo ? (p.closed_hi ? "both" : "left") : "right";
    out["expr"] = expr_json(p.expr);
    return out;
}

symbolic::TransitionMatrix matrix_of(const json& j, const std::string& where) {
    if (!j.is_array()) raise(errc::parse_error, where + ": expected an array of rows");
    std::vector<std::vector<int>> rows;
    for (std::size_t r = 0; r < j.size(); ++r) {
        if (!j[r].is_array()) raise(errc::parse_error, where + ": row " + std::to_string(r));
        std::vector<int> row;
        for (const auto& v : j[r]) row.push_back(v.get<int>());
        rows.push_back(std::move(row));
    }
    try {
        return symbolic::TransitionMatrix::validate(rows);
    } catch (const Error& e) {
        raise(errc::validation_error, where + ": " + e.what());
    }
}

// The two interval maps of the bundled 1D scenario.
Map1D make_f1() {
    return Map1D("f1", {0.0, 3.0},
                 {Piece1D{{0.0, 0.25}, true, true, QuadraticExpr{16.0, 1.0}},
                  Piece1D{{0.25, 0.75}, false, true, ConstantExpr{3.0}},
                  Piece1D{{0.75, 1.0}, false, true, QuadraticExpr{16.0, 1.0}},
                  Piece1D{{1.0, 3.0}, false, true, ConstantExpr{0.0}}});
}

Map1D make_f2() {
    return Map1D("f2", {0.0, 3.0},
                 {Piece1D{{0.0, 0.5}, true, true, QuadraticExpr{4.0, 2.0}},
                  Piece1D{{0.5, 1.5}, false, true, ConstantExpr{3.0}},
                  Piece1D{{1.5, 2.0}, false, true, QuadraticExpr{4.0, 2.0}},
                  Piece1D{{2.0, 3.0}, false, true, ConstantExpr{0.0}}});
}

std::vector<int> parse_pattern(const std::string& pattern) {
    if (pattern == "all-f1") return {0};
    if (pattern == "all-f2") return {1};
    if (pattern == "alternate") return {0, 1};
    std::vector<int> bits;
    for (char c : pattern) {
        if (c == '0') bits.push_back(0);
        else if (c == '1') bits.push_back(1);
        else raise(errc::parse_error, "pattern must be all-f1, all-f2, alternate, or a 0/1 string");
    }
    if (bits.empty()) raise(errc::parse_error, "empty pattern");
    return bits;
}

void validate_common(const Scenario& s) {
    if (!(s.tol.merge > 0 && s.tol.geom > 0 && s.tol.decode > 0))
        raise(errc::validation_error, "tolerances must be positive");
    if (!(s.tol.merge < s.tol.geom && s.tol.geom <= s.tol.decode))
        raise(errc::validation_error, "tolerances must satisfy merge < geom <= decode");
    if (s.dimension == 1) {
        if (!s.family1) raise(errc::validation_error, "1D scenario needs a covering family");
        const long period = std::lcm(s.seq.period(), s.family1->period());
        if (period <= 0 || s.verify_horizon % period != 0)
            raise(errc::validation_error, "scenario period must divide the verification horizon");
    } else if (s.dimension == 2) {
        if (!s.family2) raise(errc::validation_error, "2D scenario needs covering boxes");
    } else {
        raise(errc::validation_error, "dimension must be 1 or 2");
    }
}

} // namespace

bool is_builtin(const std::string& name) {
    return name == "example-5.1" || name == "example-5.2" || name == "counterexample-identity";
}

std::vector<std::string> builtin_names() {
    return {"example-5.1", "example-5.2", "counterexample-identity"};
}

Scenario builtin_example_51(const std::string& pattern) {
    Scenario s;
    s.name = "example-5.1";
    s.dimension = 1;
    s.seed = 0x53594d44;
    s.matrix = symbolic::TransitionMatrix::full(2);
    const auto bits = parse_pattern(pattern);
    s.seq = MapSequence::periodic_1d({make_f1(), make_f2()}, bits);
    std::vector<std::vector<Interval>> phases;
    for (int b : bits) {
        if (b == 0) phases.push_back({{0.0, 0.25}, {0.75, 1.0}});
        else phases.push_back({{0.0, 0.5}, {1.5, 2.0}});
    }
    s.family1.emplace(s.matrix, std::vector<Interval>{{0.0, 0.5}, {0.75, 2.0}}, phases, true);
    s.verify_horizon = 2 * static_cast<long>(bits.size());
    s.default_horizon = 4096;
    s.flags = {true, true, true};
    return s;
}

Scenario builtin_example_52() {
    Scenario s;
    s.name = "example-5.2";
    s.dimension = 2;
    s.seed = 0x53594d45;
    s.matrix = symbolic::TransitionMatrix::full(2);
    s.seq = MapSequence::family_2d({WeightRule::Kind::n_over_n_plus_1, 0.0}, 12.0);
    const double sixth = 1.0 / 6.0;
    s.family2.emplace(s.matrix,
                      std::vector<Box2>{{{-sixth, sixth}, {-sixth, sixth}},
                                        {{0.5, 5.0 / 6.0}, {0.5, 5.0 / 6.0}}},
                      true);
    s.verify_horizon = 4;
    s.default_horizon = 5000;
    s.flags = {true, false, true};
    return s;
}

Scenario builtin_counterexample_identity() {
    Scenario s;
    s.name = "counterexample-identity";
    s.dimension = 1;
    s.seed = 0x53594d46;
    s.matrix = symbolic::TransitionMatrix::full(2);
    s.seq = MapSequence::periodic_1d(
        {Map1D("identity", {0.0, 3.0}, {Piece1D{{0.0, 3.0}, true, true, AffineExpr{1.0, 0.0}}})},
        {0});
    s.family1.emplace(s.matrix, std::vector<Interval>{{0.0, 1.0}, {2.0, 3.0}},
                      std::vector<std::vector<Interval>>{{{0.0, 1.0}, {2.0, 3.0}}}, true);
    s.verify_horizon = 2;
    s.default_horizon = 64;
    s.flags = {true, true, true};
    return s;
}

std::string Scenario::to_json_text() const {
    json out;
    out["version"] = kFormatVersion;
    out["name"] = name;
    out["dimension"] = dimension;
    out["seed"] = seed;
    json m = json::array();
    for (const auto& row : matrix.rows()) m.push_back(row);
    out["matrix"] = std::move(m);
    out["tolerances"] = {{"merge", tol.merge}, {"geom", tol.geom}, {"decode", tol.decode}};
    out["flags"] = {{"equi_continuous", flags.equi_continuous},
                    {"compact_space", flags.compact_space},
                    {"compact_base", flags.compact_base}};
    out["horizons"] = {{"verify", verify_horizon}, {"default", default_horizon}};
    if (dimension == 1) {
        json maps = json::array();
        for (const auto& map : seq.maps1()) {
            json pieces = json::array();
            for (const auto& p : map.pieces()) pieces.push_back(piece_json(p));
            maps.push_back({{"name", map.name()},
                            {"domain", interval_json(map.domain())},
                            {"pieces", std::move(pieces)}});
        }
        out["maps"] = {{"kind", "piecewise-1d"}, {"list", std::move(maps)}, {"pattern", seq.pattern()}};
        json outer = json::array();
        for (int i = 1; i <= family1->symbols(); ++i) outer.push_back(interval_json(family1->outer(i)));
        json phases = json::array();
        for (long r = 0; r < family1->period(); ++r) {
            json ph = json::array();
            for (const auto& iv : family1->phase(r)) ph.push_back(interval_json(iv));
            phases.push_back(std::move(ph));
        }
        out["covering"] = {{"outer", std::move(outer)},
                           {"phases", std::move(phases)},
                           {"strict", family1->strict()}};
    } else {
        const auto& rule = seq.weight_rule();
        json w = rule.kind == WeightRule::Kind::constant
                     ? json{{"kind", "constant"}, {"value", rule.value}}
                     : json{{"kind", "n/(n+1)"}};
        out["maps"] = {{"kind", "sine-saw-2d"}, {"weight", std::move(w)}, {"scale", seq.scale2()}};
        json boxes = json::array();
        for (const auto& b : family2->boxes())
            boxes.push_back(json::array({interval_json(b.x), interval_json(b.y)}));
        out["covering"] = {{"outer_boxes", std::move(boxes)}, {"strict", family2->strict()}};
    }
    return out.dump(2) + "\n";
}

Scenario parse_scenario_text(const std::string& text, const std::string& origin,
                             const std::optional<std::string>& pattern,
                             const std::optional<std::uint64_t>& seed) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        raise(errc::parse_error, origin + ": " + e.what());
    }
    try {
        if (j.value("version", 0) != kFormatVersion)
            raise(errc::validation_error, origin + ": unsupported or missing format version");
        Scenario s;
        s.name = j.value("name", origin);
        s.dimension = j.at("dimension").get<int>();
        s.seed = j.value("seed", 0ULL);
        s.matrix = matrix_of(j.at("matrix"), origin + ":matrix");
        if (j.contains("tolerances")) {
            const auto& t = j["tolerances"];
            s.tol.merge = num(t.value("merge", json(1e-14)), "tolerances.merge");
            s.tol.geom = num(t.value("geom", json(1e-12)), "tolerances.geom");
            s.tol.decode = num(t.value("decode", json(1e-9)), "tolerances.decode");
        }
        if (j.contains("flags")) {
            const auto& f = j["flags"];
            s.flags.equi_continuous = f.value("equi_continuous", false);
            s.flags.compact_space = f.value("compact_space", false);
            s.flags.compact_base = f.value("compact_base", false);
        }
        if (j.contains("horizons")) {
            s.verify_horizon = j["horizons"].value("verify", 4L);
            s.default_horizon = j["horizons"].value("default", 4096L);
        }
        const auto& maps = j.at("maps");
        const std::string kind = maps.value("kind", "");
        if (kind == "piecewise-1d") {
            s.dimension = 1;
            std::vector<Map1D> list;
            const auto& arr = maps.at("list");
            for (std::size_t k = 0; k < arr.size(); ++k) {
                const std::string where = origin + ":maps.list[" + std::to_string(k) + "]";
                std::vector<Piece1D> pieces;
                for (std::size_t p = 0; p < arr[k].at("pieces").size(); ++p)
                    pieces.push_back(
                        piece_of(arr[k]["pieces"][p], where + ".pieces[" + std::to_string(p) + "]"));
                list.emplace_back(arr[k].value("name", "map" + std::to_string(k)),
                                  interval_of(arr[k].at("domain"), where + ".domain"),
                                  std::move(pieces));
            }
            std::vector<int> pat;
            if (pattern) {
                pat = parse_pattern(*pattern);
            } else {
                for (const auto& v : maps.at("pattern")) pat.push_back(v.get<int>());
            }
            s.seq = MapSequence::periodic_1d(std::move(list), pat);
            const auto& cov = j.at("covering");
            std::vector<Interval> outer;
            for (std::size_t k = 0; k < cov.at("outer").size(); ++k)
                outer.push_back(interval_of(cov["outer"][k], origin + ":covering.outer[" + std::to_string(k) + "]"));
            std::vector<std::vector<Interval>> phases;
            for (std::size_t r = 0; r < cov.at("phases").size(); ++r) {
                std::vector<Interval> ph;
                for (std::size_t k = 0; k < cov["phases"][r].size(); ++k)
                    ph.push_back(interval_of(cov["phases"][r][k], origin + ":covering.phases[" +
                                                                      std::to_string(r) + "][" +
                                                                      std::to_string(k) + "]"));
                phases.push_back(std::move(ph));
            }
            s.family1.emplace(s.matrix, std::move(outer), std::move(phases),
                              cov.value("strict", true));
        } else if (kind == "sine-saw-2d") {
            s.dimension = 2;
            WeightRule rule;
            const auto& w = maps.at("weight");
            if (w.value("kind", "") == "constant") {
                rule.kind = WeightRule::Kind::constant;
                rule.value = num(w.at("value"), origin + ":maps.weight.value");
            } else if (w.value("kind", "") == "n/(n+1)") {
                rule.kind = WeightRule::Kind::n_over_n_plus_1;
            } else {
                raise(errc::parse_error, origin + ":maps.weight.kind");
            }
            s.seq = MapSequence::family_2d(rule, num(maps.at("scale"), origin + ":maps.scale"));
            const auto& cov = j.at("covering");
            std::vector<Box2> boxes;
            for (std::size_t k = 0; k < cov.at("outer_boxes").size(); ++k) {
                const auto& b = cov["outer_boxes"][k];
                const std::string where = origin + ":covering.outer_boxes[" + std::to_string(k) + "]";
                boxes.push_back(
                    {interval_of(b.at(0), where + "[0]"), interval_of(b.at(1), where + "[1]")});
            }
            s.family2.emplace(s.matrix, std::move(boxes), cov.value("strict", true));
        } else {
            raise(errc::parse_error, origin + ":maps.kind unknown '" + kind + "'");
        }
        if (seed) s.seed = *seed;
        validate_common(s);
        return s;
    } catch (const json::exception& e) {
        raise(errc::parse_error, origin + ": " + e.what());
    }
}

Scenario load_scenario(const std::string& name_or_path, const std::optional<std::string>& pattern,
                       const std::optional<std::uint64_t>& seed) {
    if (is_builtin(name_or_path)) {
        Scenario s;
        if (name_or_path == "example-5.1") s = builtin_example_51(pattern.value_or("alternate"));
        else if (name_or_path == "example-5.2") s = builtin_example_52();
        else s = builtin_counterexample_identity();
        if (seed) s.seed = *seed;
        validate_common(s);
        return s;
    }
    std::ifstream in(name_or_path);
    if (!in) raise(errc::parse_error, "cannot open scenario file '" + name_or_path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_text(buf.str(), name_or_path, pattern, seed);
}

} // namespace symdyn::scenario
