#include "symdyn/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "symdyn/chaoslab.hpp"
#include "symdyn/coding.hpp"
#include "symdyn/error.hpp"
#include "symdyn/hyperspace.hpp"
#include "symdyn/io.hpp"
#include "symdyn/scenario.hpp"

namespace symdyn::cli {

namespace {

constexpr const char* kVersion = "symdyn 1.0.0";

using io::Csv;
using io::format_double;
using io::format_int;
using scenario::Scenario;

void write_payload(const Options& opt, const std::string& payload) {
    if (opt.out) {
        std::ofstream out(*opt.out, std::ios::binary);
        if (!out) raise(errc::parse_error, "cannot open output file '" + *opt.out + "'");
        out << payload;
    } else {
        std::cout << payload;
    }
}

std::vector<double> parse_numbers(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(io::parse_number(item));
    return out;
}

symbolic::SymbolGenerator parse_alpha(const symbolic::TransitionMatrix& m, const std::string& text) {
    std::string body = text;
    bool periodic = false;
    if (body.rfind("periodic:", 0) == 0) {
        periodic = true;
        body = body.substr(9);
    }
    std::vector<int> symbols;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) symbols.push_back(static_cast<int>(io::parse_number(item)));
    if (periodic) return symbolic::SymbolGenerator::periodic(m, std::move(symbols));
    return symbolic::SymbolGenerator::from_prefix(m, std::move(symbols));
}

std::string summary_header(const Options& opt, const Scenario& s) {
    std::ostringstream out;
    out << kVersion << " | command=" << opt.command << " | scenario=" << s.name
        << " | seed=" << s.seed << " | threads<=" << thread_cap();
    return out.str();
}

// ---- command bodies ---------------------------------------------------------

int cmd_sft_info(const Options& opt, const Scenario& s) {
    const double rho = symbolic::spectral_radius(s.matrix, opt.tol.value_or(1e-9));
    Csv csv({"key", "value"});
    csv.add({"n_symbols", format_int(s.matrix.size())});
    csv.add({"spectral_radius", format_double(rho)});
    csv.add({"entropy_log_rho", format_double(std::log(rho))});
    csv.add({"irreducible", s.matrix.is_irreducible() ? "true" : "false"});
    csv.add({"row_sum_at_least_two", s.matrix.row_sum_at_least_two() ? "true" : "false"});
    for (int n : {4, 8, 16})
        csv.add({"count_words_" + std::to_string(n), symbolic::count_words(s.matrix, n).digits});
    write_payload(opt, csv.str());
    return kExitOk;
}

expansion::ExpansionReport run_verification(const Options& opt, const Scenario& s) {
    if (s.dimension == 1) {
        const long horizon = opt.horizon.value_or(s.verify_horizon);
        return expansion::check_covering_1d(s.seq, *s.family1, horizon, s.tol.geom,
                                            opt.samples.value_or(256), s.seed);
    }
    std::vector<long> steps{0, 1, 10, 1000};
    if (opt.horizon) {
        steps.clear();
        for (long n = 0; n < *opt.horizon; ++n) steps.push_back(n);
    }
    return expansion::check_covering_2d(s.seq, *s.family2, steps, opt.grid,
                                        opt.samples.value_or(4096), s.seed);
}

int cmd_verify(const Options& opt, const Scenario& s) {
    const auto rep = run_verification(opt, s);
    Csv csv({"n", "i", "covered", "margin", "lambda_exact", "lambda_sampled"});
    for (const auto& r : rep.rows)
        csv.add({format_int(r.n), format_int(r.i), r.covered ? "true" : "false",
                 format_double(r.margin), format_double(r.lambda_exact),
                 format_double(r.lambda_sampled)});
    std::ostringstream payload;
    payload << "# separation_outer=" << format_double(rep.separation_outer)
            << " separation_step=" << format_double(rep.separation_step)
            << " lambda_lower=" << format_double(rep.lambda_lower)
            << " weak_ce=" << (rep.weak_ce ? "true" : "false")
            << " strict_weak_ce=" << (rep.strict_weak_ce ? "true" : "false")
            << " H1_implied=" << (rep.h1_implied ? "true" : "false")
            << " H2_implied=" << (rep.h2_implied ? "true" : "false")
            << " periodic_extension=" << (rep.periodic_rule ? "true" : "false") << "\n";
    payload << csv.str();
    write_payload(opt, payload.str());
    std::cerr << "covering " << (rep.weak_ce ? "verified" : "FAILED")
              << (rep.any_inconclusive() ? " (some rows inconclusive)" : "") << "\n";
    return rep.weak_ce ? kExitOk : kExitVerifyFail;
}

int cmd_decode(const Options& opt, const Scenario& s) {
    if (s.dimension != 1) raise(errc::not_one_dimensional, "decode needs a 1D scenario");
    if (!opt.alpha) raise(errc::parse_error, "decode needs --alpha");
    const auto alpha = parse_alpha(s.matrix, *opt.alpha);
    const auto res =
        coding::decode(s.seq, *s.family1, alpha, opt.start.value_or(0),
                       opt.tol.value_or(s.tol.decode), opt.depth.value_or(64));
    Csv csv({"key", "value"});
    csv.add({"point", format_double(res.point)});
    csv.add({"diameter", format_double(res.diameter)});
    csv.add({"depth_used", format_int(res.depth_used)});
    write_payload(opt, csv.str());
    return kExitOk;
}

int cmd_itinerary(const Options& opt, const Scenario& s) {
    if (!opt.x0) raise(errc::parse_error, "itinerary needs --x0");
    const auto coords = parse_numbers(*opt.x0);
    const long start = opt.start.value_or(0);
    const int steps = static_cast<int>(opt.steps.value_or(16));
    Csv csv({"k", "symbol"});
    if (s.dimension == 1) {
        const auto word =
            coding::itinerary(s.seq, *s.family1, coords.at(0), start, steps, s.tol.geom);
        for (std::size_t k = 0; k < word.length(); ++k)
            csv.add({format_int(static_cast<long>(k)), format_int(word.at(k))});
    } else {
        const auto word = coding::itinerary_2d(s.seq, *s.family2, {coords.at(0), coords.at(1)},
                                               start, steps, s.tol.geom);
        for (std::size_t k = 0; k < word.size(); ++k)
            csv.add({format_int(static_cast<long>(k)), format_int(word[k])});
    }
    write_payload(opt, csv.str());
    return kExitOk;
}

int cmd_conjugacy_check(const Options& opt, const Scenario& s) {
    if (s.dimension != 1) raise(errc::not_one_dimensional, "conjugacy check needs a 1D scenario");
    const auto res = coding::conjugacy_residual(
        s.seq, *s.family1, opt.samples.value_or(200), opt.depth.value_or(20),
        opt.tol.value_or(s.tol.decode), opt.seed.value_or(s.seed), opt.horizon.value_or(16));
    Csv csv({"key", "value"});
    csv.add({"max_equivariance", format_double(res.max_equivariance)});
    csv.add({"max_roundtrip", format_double(res.max_roundtrip)});
    csv.add({"roundtrip_symbols_exact", res.roundtrip_symbols_exact ? "true" : "false"});
    csv.add({"trials", format_int(res.trials)});
    csv.add({"seed", format_int(static_cast<long long>(res.seed))});
    write_payload(opt, csv.str());
    const bool ok = res.max_equivariance < 1e-6 && res.roundtrip_symbols_exact;
    std::cerr << "conjugacy residuals " << (ok ? "within tolerance" : "EXCEED tolerance") << "\n";
    return ok ? kExitOk : kExitVerifyFail;
}

int cmd_orbit(const Options& opt, const Scenario& s) {
    if (!opt.x0) raise(errc::parse_error, "orbit needs --x0");
    const auto coords = parse_numbers(*opt.x0);
    const long steps = opt.steps.value_or(s.default_horizon);
    if (s.dimension == 1) {
        Csv csv({"n", "x"});
        double x = coords.at(0);
        csv.add({"0", format_double(x)});
        for (long n = 0; n < steps; ++n) {
            x = s.seq.evaluate1(n, x);
            csv.add({format_int(n + 1), format_double(x)});
        }
        write_payload(opt, csv.str());
    } else {
        Csv csv({"n", "x1", "x2"});
        Point2 p{coords.at(0), coords.at(1)};
        csv.add({"0", format_double(p.x), format_double(p.y)});
        for (long n = 0; n < steps; ++n) {
            p = s.seq.evaluate2(n, p);
            csv.add({format_int(n + 1), format_double(p.x), format_double(p.y)});
        }
        write_payload(opt, csv.str());
    }
    return kExitOk;
}

int cmd_set_orbit(const Options& opt, const Scenario& s) {
    if (!opt.a0) raise(errc::parse_error, "set-orbit needs --a0 (JSON list)");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(*opt.a0);
    } catch (const nlohmann::json::exception& e) {
        raise(errc::parse_error, std::string("--a0: ") + e.what());
    }
    const long steps = opt.steps.value_or(s.default_horizon);
    if (s.dimension == 1) {
        std::vector<Interval> parts;
        for (const auto& pair : j) parts.push_back({pair.at(0).get<double>(), pair.at(1).get<double>()});
        const auto orbit = hyperspace::induced_orbit(s.seq, Region1D::from_intervals(parts), steps);
        Csv csv({"step", "component_count", "hull_lo", "hull_hi"});
        for (const auto& st : orbit)
            csv.add({format_int(st.step), format_int(static_cast<long>(st.region.component_count())),
                     format_double(st.region.min()), format_double(st.region.max())});
        write_payload(opt, csv.str());
    } else {
        std::vector<Point2> pts;
        for (const auto& pair : j) pts.push_back({pair.at(0).get<double>(), pair.at(1).get<double>()});
        const auto orbit = hyperspace::induced_orbit(s.seq, Region2D::from_points(pts), steps);
        Csv csv({"step", "point_index", "x", "y"});
        for (const auto& st : orbit) {
            long idx = 0;
            for (const auto& p : st.region.points())
                csv.add({format_int(st.step), format_int(idx++), format_double(p.x),
                         format_double(p.y)});
        }
        write_payload(opt, csv.str());
    }
    return kExitOk;
}

int cmd_chaos_stats(const Options& opt, const Scenario& s) {
    if (s.dimension != 1)
        raise(errc::not_one_dimensional, "chaos-stats runs on 1D scenarios (use orbit for 2D traces)");
    const long horizon = opt.horizon.value_or(s.default_horizon);
    const auto grid = chaoslab::default_eps_grid(s.family1->outer_separation(),
                                                 s.family1->envelope().width());
    chaoslab::PairStats stats;
    const std::string pair = opt.pair.value_or("decoded-scrambled");
    if (pair == "decoded-scrambled") {
        const auto [alpha, beta] = symbolic::scrambled_pair(s.matrix, horizon);
        stats = chaoslab::decoded_pair_stats(s.seq, *s.family1, alpha, beta, horizon, grid,
                                             opt.tol.value_or(s.tol.decode));
    } else if (pair == "symbolic-scrambled") {
        const auto [alpha, beta] = symbolic::scrambled_pair(s.matrix, horizon);
        stats = chaoslab::subshift_pair_stats(s.matrix, alpha, beta, horizon, grid);
    } else if (pair == "points") {
        if (!opt.x0 || !opt.y0) raise(errc::parse_error, "pair=points needs --x0 and --y0");
        stats = chaoslab::pair_stats(s.seq, parse_numbers(*opt.x0).at(0),
                                     parse_numbers(*opt.y0).at(0), horizon, grid);
    } else {
        raise(errc::parse_error, "unknown pair selector '" + pair + "'");
    }
    std::ostringstream payload;
    payload << "# running_min=" << format_double(stats.running_min)
            << " running_max=" << format_double(stats.running_max)
            << " tail_min=" << format_double(stats.tail_min)
            << " tail_max=" << format_double(stats.tail_max)
            << " li_yorke(0.1)=" << (stats.li_yorke_witness(0.1) ? "true" : "false")
            << " dc_witness=" << (stats.dc_witness() ? "true" : "false") << "\n";
    for (const auto& p : stats.dc_pairs())
        payload << "# dc_pair delta=" << format_double(p.delta) << " eps=" << format_double(p.eps)
                << "\n";
    Csv csv({"i", "d"});
    for (std::size_t i = 0; i < stats.dist.size(); ++i)
        csv.add({format_int(static_cast<long>(i)), format_double(stats.dist[i])});
    payload << csv.str();
    write_payload(opt, payload.str());
    return kExitOk;
}

int cmd_entropy(const Options& opt, const Scenario& s) {
    const std::string method = opt.method.value_or("word-count");
    const long n_max = opt.horizon.value_or(16);
    chaoslab::EntropyEstimate est;
    if (method == "word-count") {
        est = chaoslab::entropy_word_count(s.matrix, n_max);
    } else if (method == "itinerary-count" || method == "induced") {
        if (s.dimension != 1) raise(errc::not_one_dimensional, method + " needs a 1D scenario");
        const auto rep = expansion::check_covering_1d(s.seq, *s.family1, s.verify_horizon,
                                                      s.tol.geom, 64, s.seed);
        est = method == "itinerary-count"
                  ? chaoslab::entropy_itinerary_count(s.seq, *s.family1, rep, n_max, s.tol.decode)
                  : chaoslab::induced_entropy_probe(s.seq, *s.family1, rep, n_max,
                                                    opt.samples.value_or(1 << 20), s.tol.decode,
                                                    opt.seed.value_or(s.seed));
    } else if (method == "separated-set") {
        if (s.dimension != 1) raise(errc::not_one_dimensional, "separated-set needs a 1D scenario");
        est = chaoslab::entropy_separated_set(s.seq, s.seq.map1(0).domain(), n_max,
                                              opt.samples.value_or(256),
                                              opt.tol.value_or(0.05), opt.seed.value_or(s.seed));
        est.reference_log_rho = std::log(symbolic::spectral_radius(s.matrix, 1e-9));
    } else {
        raise(errc::parse_error, "unknown entropy method '" + method + "'");
    }
    std::ostringstream payload;
    payload << "# method=" << method << " rate=" << format_double(est.rate)
            << " reference_log_rho=" << format_double(est.reference_log_rho) << "\n";
    payload << "# " << est.label << "\n";
    Csv csv({"n", "estimate"});
    for (const auto& [n, v] : est.per_n) csv.add({format_int(n), format_double(v)});
    payload << csv.str();
    write_payload(opt, payload.str());
    return kExitOk;
}

int cmd_classify(const Options& opt, const Scenario& s) {
    const auto rep = run_verification(opt, s);
    const auto checks = expansion::classify(rep, s.matrix, s.flags);
    std::ostringstream payload;
    for (const auto& t : checks) {
        payload << (t.applicable ? "[applicable    ] " : "[not applicable] ") << t.name << "\n";
        for (const auto& [pred, ok] : t.predicates)
            payload << "    " << (ok ? "+" : "-") << " " << pred << "\n";
        if (!t.note.empty()) payload << "    note: " << t.note << "\n";
    }
    write_payload(opt, payload.str());
    return kExitOk;
}

int cmd_report(const Options& opt, const Scenario& s) {
    std::ostringstream payload;
    payload << "scenario " << s.name << " (dimension " << s.dimension << ", seed " << s.seed
            << ")\n";
    const double rho = symbolic::spectral_radius(s.matrix, 1e-9);
    payload << "subshift: N=" << s.matrix.size() << " rho=" << format_double(rho)
            << " entropy=" << format_double(std::log(rho))
            << " irreducible=" << (s.matrix.is_irreducible() ? "true" : "false")
            << " row_sum>=2=" << (s.matrix.row_sum_at_least_two() ? "true" : "false") << "\n";
    const auto rep = run_verification(opt, s);
    payload << "covering: " << (rep.weak_ce ? "verified" : "FAILED")
            << " strict=" << (rep.strict_weak_ce ? "true" : "false")
            << " separation_outer=" << format_double(rep.separation_outer)
            << " separation_step=" << format_double(rep.separation_step)
            << " lambda_lower=" << format_double(rep.lambda_lower) << "\n";
    payload << "applicable theorem hypothesis sets:\n";
    for (const auto& t : expansion::classify(rep, s.matrix, s.flags))
        if (t.applicable) payload << "  " << t.name << "\n";
    write_payload(opt, payload.str());
    return rep.weak_ce ? kExitOk : kExitVerifyFail;
}

} // namespace

unsigned thread_cap() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("SYMDYN_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1 && v <= static_cast<long>(hw)) return static_cast<unsigned>(v);
        if (v > static_cast<long>(hw)) return hw;
        return 1;
    }
    return hw;
}

int dispatch(const Options& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
        const Scenario s = scenario::load_scenario(opt.scenario.empty() ? "example-5.1" : opt.scenario,
                                                   opt.pattern, opt.seed);
        std::cerr << summary_header(opt, s) << "\n";
        int code = kExitError;
        if (opt.command == "sft-info") code = cmd_sft_info(opt, s);
        else if (opt.command == "verify-expansion") code = cmd_verify(opt, s);
        else if (opt.command == "decode") code = cmd_decode(opt, s);
        else if (opt.command == "itinerary") code = cmd_itinerary(opt, s);
        else if (opt.command == "conjugacy-check") code = cmd_conjugacy_check(opt, s);
        else if (opt.command == "orbit") code = cmd_orbit(opt, s);
        else if (opt.command == "set-orbit") code = cmd_set_orbit(opt, s);
        else if (opt.command == "chaos-stats") code = cmd_chaos_stats(opt, s);
        else if (opt.command == "entropy") code = cmd_entropy(opt, s);
        else if (opt.command == "classify") code = cmd_classify(opt, s);
        else if (opt.command == "report") code = cmd_report(opt, s);
        else raise(errc::unknown_command, "unknown command '" + opt.command + "'");
        const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
        std::cerr << "done in " << ms << " ms, exit " << code << "\n";
        return code;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
}

} // namespace symdyn::cli
