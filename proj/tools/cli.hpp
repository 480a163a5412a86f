#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bcsecrecy/bcsecrecy.hpp"

namespace bcsecrecy::cli {

enum ExitCode : int {
    kOk = 0,
    kCheckFailed = 1,
    kUsage = 2,
    kInvalidInput = 3,
    kBudget = 4,
};

inline constexpr double kDefaultResolution = 0.05;
inline constexpr std::size_t kDefaultAlphas = 101;
inline constexpr std::uint64_t kDefaultBudget = 5'000'000;
inline constexpr double kFrontierCheckTolerance = 1e-12;

namespace detail {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::string fmt12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

/// Writes next to the destination and renames, so a failed run never leaves
/// a partial artifact behind.
inline void write_atomically(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(Errc::ParseError, "cannot write " + tmp);
        out << content;
        if (!out) throw Error(Errc::ParseError, "failed writing " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

inline void emit(const std::string& path, const std::string& content, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << content;
    } else {
        write_atomically(path, content);
    }
}

inline std::string frontier_csv(const RegionFrontier& f) {
    std::ostringstream os;
    os << "r1_bits,r2_bits\n";
    for (const auto& p : f.points) os << fmt12(p.r1) << ',' << fmt12(p.r2) << '\n';
    return os.str();
}

inline AuxGridSpec make_grid(std::size_t x_size, double resolution, std::uint64_t budget) {
    auto g = AuxGridSpec::for_input(x_size);
    g.resolution = resolution;
    g.budget = budget;
    try {
        resolution_steps(resolution);
    } catch (const Error& e) {
        throw UsageError(std::string("--grid: ") + e.what());
    }
    return g;
}

inline void check_card(std::size_t c, const AuxGridSpec& g, const char* flag) {
    if (c < 1 || c > g.max_card)
        throw UsageError(std::string(flag) + " must lie in [1, " + std::to_string(g.max_card) + "]");
}

struct CsvRow {
    double alpha, r1, r2;
};

inline std::vector<CsvRow> read_gaussian_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::ParseError, "cannot open " + path);
    std::string line;
    std::getline(in, line);
    if (line != "alpha,r1_bits,r2_bits") throw Error(Errc::ParseError, path + ": unexpected header '" + line + "'");
    std::vector<CsvRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        CsvRow r{};
        char c1 = 0, c2 = 0;
        std::istringstream ls(line);
        if (!(ls >> r.alpha >> c1 >> r.r1 >> c2 >> r.r2) || c1 != ',' || c2 != ',')
            throw Error(Errc::ParseError, path + ": malformed row '" + line + "'");
        rows.push_back(r);
    }
    return rows;
}

inline nlohmann::json trial_json(const TrialResult& t) {
    return {{"trials", t.trials},
            {"errors_rx1", t.errors_rx1},
            {"errors_rx2", t.errors_rx2},
            {"union_errors", t.union_errors},
            {"encoding_failures", t.encoding_failures},
            {"pe_estimate", t.pe_estimate},
            {"half_width_95", t.half_width}};
}

inline std::uint64_t get_u64(const nlohmann::json& j, const char* key, std::optional<std::uint64_t> fallback = {}) {
    if (!j.contains(key)) {
        if (fallback) return *fallback;
        throw Error(Errc::ParseError, std::string("experiment config is missing \"") + key + "\"");
    }
    const auto& v = j.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0)
        throw Error(Errc::ParseError, std::string("\"") + key + "\" must be a non-negative integer");
    return v.get<std::uint64_t>();
}

struct SimulateOptions {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> trials;
    std::optional<std::uint64_t> budget;
};

inline nlohmann::json simulate(const SimulateOptions& opt) {
    const auto cfg = read_json_file(opt.config);
    if (!cfg.is_object()) throw Error(Errc::ParseError, "experiment config must be a JSON object");
    const auto scheme = cfg.value("scheme", std::string{});
    if (scheme != "superposition" && scheme != "double-binning")
        throw Error(Errc::ParseError, "\"scheme\" must be \"superposition\" or \"double-binning\"");

    CodeParams p;
    p.n = get_u64(cfg, "n");
    p.m1 = get_u64(cfg, "m1");
    p.l1 = get_u64(cfg, "l1", 1);
    p.m2 = get_u64(cfg, "m2");
    p.l2 = get_u64(cfg, "l2", 1);
    p.seed = opt.seed ? *opt.seed : get_u64(cfg, "seed", 0);
    const std::uint64_t trials = opt.trials ? *opt.trials : get_u64(cfg, "trials", 1000);
    if (p.n < 1 || p.m1 < 1 || p.l1 < 1 || p.m2 < 1 || p.l2 < 1 || p.n > 64)
        throw Error(Errc::InvalidParams, "need 1 <= n <= 64 and m1, l1, m2, l2 >= 1");
    if (trials < 1) throw Error(Errc::InvalidParams, "trials must be at least 1");

    if (!cfg.contains("channel")) throw Error(Errc::ParseError, "experiment config is missing \"channel\"");
    const auto& ch = cfg.at("channel");
    ChannelSpec spec;
    if (ch.is_string()) {
        std::filesystem::path cp(ch.get<std::string>());
        if (cp.is_relative()) cp = std::filesystem::path(opt.config).parent_path() / cp;
        spec = load_channel_file(cp.string());
    } else {
        spec = parse_channel(ch);
    }
    const auto m = discrete_marginals(spec);

    CodingBudget budget;
    if (opt.budget) budget.max_z_sequences = *opt.budget;

    nlohmann::json result;
    result["scheme"] = scheme;
    result["params"] = {{"n", p.n}, {"m1", p.m1}, {"l1", p.l1}, {"m2", p.m2}, {"l2", p.l2}, {"seed", p.seed}};
    result["rates"] = {{"r1", p.rate1()},
                       {"r2", p.rate2()},
                       {"randomization1", p.randomization_rate1()},
                       {"randomization2", p.randomization_rate2()}};

    if (scheme == "superposition") {
        const auto pu = parse_pmf(bcsecrecy::detail::field(cfg, "pu"), "pu");
        const auto pxu = parse_matrix(bcsecrecy::detail::field(cfg, "pxu"), "pxu");
        if (pxu.input_size() != pu.size() || pxu.output_size() != m.x_size())
            throw Error(Errc::DimensionMismatch, "pxu must be |U| x |X|");
        const auto terms = degraded_terms(m, pu, pxu);
        result["information"] = {{"I(U;Y2)", terms.i_u_y2},
                                 {"I(U;Z)", terms.i_u_z},
                                 {"I(X;Y1|U)", terms.i_x_y1_given_u},
                                 {"I(X;Z)", terms.i_x_z}};
        result["region_bounds"] = {{"r1", terms.r1_bound()}, {"r2", terms.r2_bound()}};
        const auto cb = build_superposition(p, pu, pxu, budget);
        const auto eq = exact_equivocation(cb, m.pzx, budget);
        result["equivocation"] = {{"re1", eq.re1},       {"re2", eq.re2},       {"re12", eq.re12},
                                  {"gap1", eq.gap1()}, {"gap2", eq.gap2()}, {"gap12", eq.gap12()}};
        result["trial_result"] = trial_json(run_error_experiment(cb, m.py1x, m.py2x, trials, p.seed));
    } else {
        const auto pv1 = parse_pmf(bcsecrecy::detail::field(cfg, "pv1"), "pv1");
        const auto pv2 = parse_pmf(bcsecrecy::detail::field(cfg, "pv2"), "pv2");
        const auto pxv = parse_matrix(bcsecrecy::detail::field(cfg, "pxv"), "pxv");
        if (pxv.input_size() != pv1.size() * pv2.size() || pxv.output_size() != m.x_size())
            throw Error(Errc::DimensionMismatch, "pxv must be (|V1||V2|) x |X|");
        double eps = kDefaultTypicalityEpsilon;
        if (cfg.contains("epsilon")) {
            if (!cfg.at("epsilon").is_number()) throw Error(Errc::ParseError, "\"epsilon\" must be a number");
            eps = cfg.at("epsilon").get<double>();
        }
        std::optional<JointPmf> target;
        if (cfg.contains("target")) {
            const auto t = parse_matrix(cfg.at("target"), "target");
            std::vector<double> flat(t.flat().begin(), t.flat().end());
            target = JointPmf({t.input_size(), t.output_size()}, std::move(flat), {"V1", "V2"});
            if (auto v = validate_joint(*target); !v) throw Error(Errc::InvalidJoint, "target: " + v.message);
        }
        const auto cb = build_double_binning(p, pv1, pv2, pxv, eps, target, budget);
        const auto terms = general_terms(m, cb.target(), pxv);
        result["information"] = {{"I(V1;Y1)", terms.i_v1_y1}, {"I(V2;Y2)", terms.i_v2_y2},
                                 {"I(V1;Z)", terms.i_v1_z},   {"I(V2;Z)", terms.i_v2_z},
                                 {"I(V1,V2;Z)", terms.i_v12_z}, {"I(V1;V2)", terms.i_v1_v2}};
        result["region_bounds"] = {{"r1", terms.r1_bound()}, {"r2", terms.r2_bound()}, {"sum", terms.sum_bound()}};
        result["equivocation"] = nullptr;
        result["trial_result"] = trial_json(run_error_experiment(cb, m.py1x, m.py2x, trials, p.seed));
    }
    return result;
}

}  // namespace detail

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Secrecy rate regions for broadcast channels with confidential messages", "bcsecrecy"};
    app.require_subcommand(1);

    auto* region = app.add_subcommand("region", "Compute a rate-region frontier");
    region->require_subcommand(1);
    auto* check = app.add_subcommand("check", "Verify channel structure or a frontier file");
    check->require_subcommand(1);

    // region gaussian
    GaussianParams g;
    std::size_t alphas = kDefaultAlphas;
    std::string out_path, file;
    bool frontier_only = false;
    auto* rg = region->add_subcommand("gaussian", "Closed-form AWGN secrecy region over a power-split sweep");
    rg->add_option("--power", g.power, "Transmit power P")->required();
    rg->add_option("--n1", g.n1, "Noise variance at receiver 1")->required();
    rg->add_option("--n2", g.n2, "Noise variance at receiver 2")->required();
    rg->add_option("--n3", g.n3, "Noise variance at the eavesdropper")->required();
    rg->add_option("--alphas", alphas, "Number of power-split values")->check(CLI::Range(2, 10'000'000));
    rg->add_option("--out", out_path, "Output CSV (stdout if omitted)");
    rg->add_flag("--frontier-only", frontier_only, "Write only Pareto-optimal rows");

    // region degraded / general
    double resolution = kDefaultResolution;
    std::uint64_t budget = kDefaultBudget;
    std::size_t ucard = 0, v1card = 0, v2card = 0;
    bool stochastic_x = false;
    auto* rd = region->add_subcommand("degraded", "Degraded-channel secrecy capacity region on an auxiliary grid");
    rd->add_option("--file", file, "Channel JSON")->required();
    rd->add_option("--grid", resolution, "Simplex grid step (reciprocal of an integer)");
    rd->add_option("--ucard", ucard, "|U| (default |X|)");
    rd->add_option("--budget", budget, "Maximum number of candidates");
    rd->add_option("--out", out_path, "Output CSV (stdout if omitted)");

    auto* rgen = region->add_subcommand("general", "General inner bound on an auxiliary grid");
    rgen->add_option("--file", file, "Channel JSON")->required();
    rgen->add_option("--grid", resolution, "Simplex grid step (reciprocal of an integer)");
    rgen->add_option("--v1card", v1card, "|V1| (default |X|)");
    rgen->add_option("--v2card", v2card, "|V2| (default |X|)");
    rgen->add_flag("--stochastic-x", stochastic_x, "Grid P(x|v1,v2) rows instead of deterministic maps");
    rgen->add_option("--budget", budget, "Maximum number of candidates");
    rgen->add_option("--out", out_path, "Output CSV (stdout if omitted)");

    // wiretap
    int receiver = 1;
    std::size_t vcard = 0;
    auto* wt = app.add_subcommand("wiretap", "Single-user secrecy capacity against the eavesdropper");
    wt->add_option("--file", file, "Channel JSON")->required();
    wt->add_option("--receiver", receiver, "Legitimate receiver (1 or 2)")->check(CLI::IsMember({1, 2}));
    wt->add_option("--grid", resolution, "Simplex grid step (reciprocal of an integer)");
    wt->add_option("--vcard", vcard, "|V| (default |X|)");
    wt->add_flag("--stochastic-x", stochastic_x, "Grid P(x|v) rows instead of deterministic maps");
    wt->add_option("--budget", budget, "Maximum number of candidates");

    // check degraded / frontier
    auto* cd = check->add_subcommand("degraded", "Test X->Y1->Y2->Z stochastic degradedness");
    cd->add_option("--file", file, "Channel JSON")->required();
    auto* cf = check->add_subcommand("frontier", "Re-evaluate a 'region gaussian' CSV against the closed form");
    cf->add_option("--file", file, "CSV written by 'region gaussian'")->required();
    cf->add_option("--power", g.power, "Transmit power P")->required();
    cf->add_option("--n1", g.n1, "Noise variance at receiver 1")->required();
    cf->add_option("--n2", g.n2, "Noise variance at receiver 2")->required();
    cf->add_option("--n3", g.n3, "Noise variance at the eavesdropper")->required();

    // simulate
    detail::SimulateOptions sim;
    auto* sm = app.add_subcommand("simulate", "Finite-blocklength coding experiment");
    sm->add_option("--config", sim.config, "Experiment JSON")->required();
    sm->add_option("--out", sim.out, "Result JSON (stdout if omitted)");
    sm->add_option("--seed", sim.seed, "Override the codebook / trial seed");
    sm->add_option("--trials", sim.trials, "Override the number of Monte-Carlo trials");
    sm->add_option("--budget", sim.budget, "Maximum number of eavesdropper output sequences");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    }

    try {
        if (*rg) {
            if (auto v = validate_gaussian(g); !v) throw Error(Errc::InvalidParams, v.message);
            std::ostringstream os;
            os << "alpha,r1_bits,r2_bits\n";
            const auto samples = gaussian_region_samples(g, alphas);
            if (frontier_only) {
                const auto f = gaussian_region_sweep(g, alphas);
                for (const auto& s : samples)
                    for (const auto& p : f.points)
                        if (p == s.point) {
                            os << detail::fmt12(s.alpha) << ',' << detail::fmt12(s.point.r1) << ','
                               << detail::fmt12(s.point.r2) << '\n';
                            break;
                        }
            } else {
                for (const auto& s : samples)
                    os << detail::fmt12(s.alpha) << ',' << detail::fmt12(s.point.r1) << ',' << detail::fmt12(s.point.r2)
                       << '\n';
            }
            detail::emit(out_path, os.str(), out);
        } else if (*rd) {
            const auto m = discrete_marginals(load_channel_file(file));
            auto grid = detail::make_grid(m.x_size(), resolution, budget);
            if (ucard) grid.u_card = ucard;
            detail::check_card(grid.u_card, grid, "--ucard");
            detail::emit(out_path, detail::frontier_csv(degraded_region_inner(m.py1x, m.py2x, m.pzx, grid)), out);
        } else if (*rgen) {
            const auto m = discrete_marginals(load_channel_file(file));
            auto grid = detail::make_grid(m.x_size(), resolution, budget);
            if (v1card) grid.v1_card = v1card;
            if (v2card) grid.v2_card = v2card;
            detail::check_card(grid.v1_card, grid, "--v1card");
            detail::check_card(grid.v2_card, grid, "--v2card");
            grid.deterministic_x = !stochastic_x;
            detail::emit(out_path, detail::frontier_csv(general_inner_bound(m.py1x, m.py2x, m.pzx, grid)), out);
        } else if (*wt) {
            const auto m = discrete_marginals(load_channel_file(file));
            auto grid = detail::make_grid(m.x_size(), resolution, budget);
            if (vcard) grid.v1_card = vcard;
            detail::check_card(grid.v1_card, grid, "--vcard");
            grid.deterministic_x = !stochastic_x;
            const auto& main = receiver == 1 ? m.py1x : m.py2x;
            out << "secrecy_capacity=" << detail::fmt12(wiretap_secrecy_capacity(main, m.pzx, grid)) << "\n";
        } else if (*cd) {
            const auto m = discrete_marginals(load_channel_file(file));
            const auto first = check_stochastic_degraded(m.py1x, m.py2x);
            const auto second = check_stochastic_degraded(m.py2x, m.pzx);
            const bool feasible = first.feasible && second.feasible;
            const double residual = std::max(first.residual, second.residual);
            out << "feasible=" << (feasible ? "true" : "false") << " residual=" << detail::fmt12(residual) << "\n";
            auto stage = [](const DegradednessReport& r) {
                nlohmann::json j{{"feasible", r.feasible}, {"residual", r.residual}};
                j["intermediate"] = r.intermediate ? to_json(*r.intermediate) : nlohmann::json(nullptr);
                return j;
            };
            nlohmann::json j{{"y2_given_y1", stage(first)}, {"z_given_y2", stage(second)}};
            out << j.dump() << "\n";
        } else if (*cf) {
            if (auto v = validate_gaussian(g); !v) throw Error(Errc::InvalidParams, v.message);
            const auto rows = detail::read_gaussian_csv(file);
            if (rows.empty()) throw Error(Errc::ParseError, file + ": no data rows");
            // 12 significant digits carry 1e-12 absolute below 1 and half a unit
            // in the 12th digit above it.
            double worst = 0.0;
            bool ok = true;
            for (const auto& r : rows) {
                if (!(r.alpha >= 0.0 && r.alpha <= 1.0)) throw Error(Errc::AlphaOutOfRange, "alpha in " + file);
                const auto p = gaussian_region_point(g, r.alpha);
                for (auto [want, got] : {std::pair{p.r1, r.r1}, std::pair{p.r2, r.r2}}) {
                    const double d = std::abs(want - got);
                    worst = std::max(worst, d);
                    ok = ok && d <= std::max(kFrontierCheckTolerance, 5e-12 * std::abs(want));
                }
            }
            out << "rows=" << rows.size() << " max_deviation=" << detail::fmt12(worst) << " match=" << (ok ? "true" : "false")
                << "\n";
            return ok ? kOk : kCheckFailed;
        } else if (*sm) {
            const auto result = detail::simulate(sim);
            detail::emit(sim.out, result.dump(2) + "\n", out);
        }
    } catch (const detail::UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return e.is_budget() ? kBudget : kInvalidInput;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kInvalidInput;
    }
    return kOk;
}

}  // namespace bcsecrecy::cli
