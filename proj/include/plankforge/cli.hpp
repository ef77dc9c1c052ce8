#pragma once

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "plankforge/bounds.hpp"
#include "plankforge/extremal.hpp"
#include "plankforge/plank.hpp"
#include "plankforge/remez.hpp"
#include "plankforge/serialize.hpp"
#include "plankforge/version.hpp"

namespace plankforge::cli {

// Exit codes: 0 success, 1 check-failure (an inequality or certificate
// violated), 2 usage error, 3 numeric infeasibility.
enum ExitCode { kOk = 0, kCheckFailed = 1, kUsage = 2, kInfeasible = 3 };

namespace detail {

inline double parse_p(const std::string& s) {
    if (s == "inf") return std::numeric_limits<double>::infinity();
    const double p = std::stod(s);
    if (!(p >= 1.0)) throw CLI::ValidationError("--p", "p must be in [1, inf]");
    return p;
}

inline std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
    if (out.empty()) throw CLI::ValidationError("list", "expected comma-separated integers");
    return out;
}

inline std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    if (out.empty()) throw CLI::ValidationError("list", "expected comma-separated numbers");
    return out;
}

// range grammar for sweeps: "3" or "2..64"
inline std::pair<int, int> parse_range(const std::string& s) {
    const auto dots = s.find("..");
    if (dots == std::string::npos) {
        const int v = std::stoi(s);
        return {v, v};
    }
    const int lo = std::stoi(s.substr(0, dots));
    const int hi = std::stoi(s.substr(dots + 2));
    if (hi < lo) throw CLI::ValidationError("range", "upper end below lower end");
    return {lo, hi};
}

inline Field parse_field(const std::string& s) {
    if (s == "real") return Field::real;
    if (s == "complex") return Field::complex;
    throw CLI::ValidationError("--field", "expected 'real' or 'complex'");
}

// seed resolution: explicit flag, then PLANKFORGE_SEED, then 0
inline std::uint64_t resolve_seed(bool seed_given, std::uint64_t seed) {
    if (seed_given) return seed;
    if (const char* env = std::getenv("PLANKFORGE_SEED")) return std::strtoull(env, nullptr, 10);
    return 0;
}

inline std::vector<Polynomial> load_poly_dir(const std::string& dir) {
    namespace fs = std::filesystem;
    std::vector<std::string> paths;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            paths.push_back(entry.path().string());
    std::sort(paths.begin(), paths.end());
    if (paths.empty())
        throw std::invalid_argument("no .json polynomial files found in '" + dir + "'");
    std::vector<Polynomial> polys;
    for (const auto& p : paths) polys.push_back(load_polynomial(p));
    return polys;
}

inline void emit(std::ostream& out, std::uint64_t seed, json config, json result) {
    json envelope;
    envelope["version"] = kVersion;
    envelope["seed"] = seed;
    envelope["config"] = std::move(config);
    envelope["result"] = std::move(result);
    out << envelope.dump(2) << "\n";
}

}  // namespace detail

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"plankforge: product-norm bounds and plank witnesses on finite l_p spaces"};
    app.require_subcommand(1);
    int exit_code = kOk;
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());

    // ----- norm ------------------------------------------------------------
    auto* norm = app.add_subcommand("norm", "estimate the sup norm of a polynomial");
    struct {
        std::string poly, p = "2", field = "complex";
        int starts = 0;
        std::uint64_t seed = 0;
        int threads = 0;
    } norm_opt;
    norm->add_option("--poly", norm_opt.poly, "polynomial JSON file")->required();
    norm->add_option("--p", norm_opt.p, "space exponent in [1,inf], 'inf' allowed");
    norm->add_option("--field", norm_opt.field, "space field: real|complex");
    norm->add_option("--starts", norm_opt.starts, "optimizer starts (default 32*d)");
    auto* norm_seed = norm->add_option("--seed", norm_opt.seed, "RNG seed");
    norm->add_option("--threads", norm_opt.threads, "worker cap (default: cores)");
    norm->callback([&]() {
        const auto P = load_polynomial(norm_opt.poly);
        SpaceSpec S{detail::parse_field(norm_opt.field), P.dim(), detail::parse_p(norm_opt.p)};
        const auto seed = detail::resolve_seed(norm_seed->count() > 0, norm_opt.seed);
        AscentOptions opts{.starts = norm_opt.starts, .seed = seed,
                           .threads = norm_opt.threads > 0 ? norm_opt.threads : (int)hw};
        const auto est = estimate_sup_norm(P, S, opts);
        json config{{"poly", norm_opt.poly}, {"space", space_to_string(S)},
                    {"starts", est.starts}, {"threads", opts.threads}};
        detail::emit(out, seed, std::move(config), estimate_to_json(est, S));
    });

    // ----- constants ---------------------------------------------------------
    auto* constants = app.add_subcommand("constants", "closed-form bound constants");
    struct {
        std::string kind, field = "real", k, p = "2", variant = "derived";
        int d = 0;
    } c_opt;
    auto* c_kind = constants->add_option("--kind", c_opt.kind,
                                         "eq2|eq3|eq4|eq5|eq6|prop12");
    constants->add_option("--field", c_opt.field, "real|complex");
    auto* c_k = constants->add_option("--k", c_opt.k, "degrees, e.g. 2,3,4");
    constants->add_option("--d", c_opt.d, "dimension (eq4, eq6, prop12)");
    constants->add_option("--p", c_opt.p, "exponent for eq5");
    constants->add_option("--variant", c_opt.variant,
                          "prop12 variant: derived (default) | as-stated");

    auto* sweep = constants->add_subcommand("sweep", "CSV sweep over parameter ranges");
    struct {
        std::string kinds, field = "real", d = "1", n = "2", p = "2";
        int k = 1;
    } s_opt;
    sweep->add_option("--kinds", s_opt.kinds, "comma list of kinds")->required();
    sweep->add_option("--field", s_opt.field, "real|complex");
    sweep->add_option("--d", s_opt.d, "dimension range, e.g. 1..4");
    sweep->add_option("--n", s_opt.n, "polynomial count range, e.g. 2..64");
    sweep->add_option("--k", s_opt.k, "common degree");
    sweep->add_option("--p", s_opt.p, "exponent for eq5");

    constants->callback([&]() {
        if (sweep->parsed()) {
            const Field field = detail::parse_field(s_opt.field);
            const auto [dlo, dhi] = detail::parse_range(s_opt.d);
            const auto [nlo, nhi] = detail::parse_range(s_opt.n);
            out << "# plankforge " << kVersion << " constants sweep\n";
            out << "kind,field,d,p,n,k,log_value\n";
            std::stringstream kindss(s_opt.kinds);
            std::string kind_name;
            std::vector<std::string> kinds;
            while (std::getline(kindss, kind_name, ',')) kinds.push_back(kind_name);
            for (const auto& kn : kinds) {
                const BoundKind kind = bound_kind_from_name(kn);
                for (int d = dlo; d <= dhi; ++d) {
                    for (int n = nlo; n <= nhi; ++n) {
                        BoundSpec spec{kind, std::vector<int>(n, s_opt.k), field, d,
                                       detail::parse_p(s_opt.p)};
                        out << kn << "," << s_opt.field << "," << d << ","
                            << (kind == BoundKind::lp ? s_opt.p : "") << "," << n << ","
                            << s_opt.k << "," << json(bound_log_value(spec)).dump() << "\n";
                    }
                }
            }
            return;
        }
        if (c_kind->count() == 0 || c_k->count() == 0)
            throw CLI::RequiredError("--kind and --k");
        std::string kind_name = c_opt.kind;
        if (kind_name == "prop12") {
            if (c_opt.variant == "as-stated") {
                kind_name = "prop12-as-stated";
                err << "warning: the as-stated prop12 constant drops below 1 at small "
                       "dimensions; the derived variant is the usable default\n";
            } else if (c_opt.variant == "derived") {
                kind_name = "prop12-derived";
            } else {
                throw CLI::ValidationError("--variant", "expected 'derived' or 'as-stated'");
            }
        }
        const BoundKind kind = bound_kind_from_name(kind_name);
        BoundSpec spec{kind, detail::parse_int_list(c_opt.k), detail::parse_field(c_opt.field),
                       c_opt.d, detail::parse_p(c_opt.p)};
        const double log_value = bound_log_value(spec);
        json result{{"log_value", log_value}};
        if (log_value < 700.0) result["value_if_finite"] = std::exp(log_value);
        else result["value_if_finite"] = nullptr;
        json config{{"kind", kind_name}, {"field", c_opt.field}, {"k", c_opt.k}};
        if (c_opt.d > 0) config["d"] = c_opt.d;
        if (kind == BoundKind::lp) config["p"] = c_opt.p;
        detail::emit(out, 0, std::move(config), std::move(result));
    });

    // ----- mn-estimate -------------------------------------------------------
    auto* mn = app.add_subcommand("mn-estimate", "stochastic lower bound for M_n(X)");
    struct {
        std::string space;
        int n = 2, degree_cap = 2, starts = 0, threads = 0;
        long budget = 200;
        std::uint64_t seed = 0;
    } mn_opt;
    mn->add_option("--space", mn_opt.space, "lp:p=..,d=..,field=..")->required();
    mn->add_option("--n", mn_opt.n, "number of polynomials")->required();
    mn->add_option("--degree-cap", mn_opt.degree_cap, "max degree per factor");
    mn->add_option("--budget", mn_opt.budget, "tuples examined");
    auto* mn_seed = mn->add_option("--seed", mn_opt.seed, "RNG seed");
    mn->add_option("--starts", mn_opt.starts, "starts per estimate");
    mn->add_option("--threads", mn_opt.threads, "worker cap");
    mn->callback([&]() {
        const auto S = parse_space(mn_opt.space);
        const auto seed = detail::resolve_seed(mn_seed->count() > 0, mn_opt.seed);
        SearchOptions opts{.degree_cap = mn_opt.degree_cap, .budget = mn_opt.budget,
                           .seed = seed, .starts = mn_opt.starts,
                           .threads = mn_opt.threads > 0 ? mn_opt.threads : (int)hw};
        const auto est = estimate_Mn(S, mn_opt.n, opts);
        json result{{"constant", est.constant}, {"log_ratio", est.log_ratio},
                    {"evaluations", est.evaluations}};
        result["tuple"] = json::array();
        for (const auto& p : est.tuple) result["tuple"].push_back(poly_to_json(p));
        json config{{"space", mn_opt.space}, {"n", mn_opt.n},
                    {"degree_cap", mn_opt.degree_cap}, {"budget", mn_opt.budget}};
        detail::emit(out, seed, std::move(config), std::move(result));
    });

    // ----- polarization ------------------------------------------------------
    auto* polar = app.add_subcommand("polarization",
                                     "stochastic lower bound for the k-th linear "
                                     "polarization constant");
    struct {
        std::string space;
        int k = 2, starts = 0, threads = 0;
        long budget = 200;
        std::uint64_t seed = 0;
    } pol_opt;
    polar->add_option("--space", pol_opt.space, "lp:p=..,d=..,field=..")->required();
    polar->add_option("--k", pol_opt.k, "number of functionals")->required();
    polar->add_option("--budget", pol_opt.budget, "tuples examined");
    auto* pol_seed = polar->add_option("--seed", pol_opt.seed, "RNG seed");
    polar->add_option("--starts", pol_opt.starts, "starts per estimate");
    polar->add_option("--threads", pol_opt.threads, "worker cap");
    polar->callback([&]() {
        const auto S = parse_space(pol_opt.space);
        const auto seed = detail::resolve_seed(pol_seed->count() > 0, pol_opt.seed);
        SearchOptions opts{.budget = pol_opt.budget, .seed = seed, .starts = pol_opt.starts,
                           .threads = pol_opt.threads > 0 ? pol_opt.threads : (int)hw};
        const auto est = estimate_polarization_constant(S, pol_opt.k, opts);
        json result{{"constant", est.constant}, {"log_ratio", est.log_ratio},
                    {"evaluations", est.evaluations}};
        result["tuple"] = json::array();
        for (const auto& p : est.tuple) result["tuple"].push_back(poly_to_json(p));
        json config{{"space", pol_opt.space}, {"k", pol_opt.k}, {"budget", pol_opt.budget}};
        detail::emit(out, seed, std::move(config), std::move(result));
    });

    // ----- remez ---------------------------------------------------------------
    auto* remez = app.add_subcommand("remez", "sublevel measures and the integral bound");
    struct {
        std::string poly, p = "2";
        double t = 0.1, t_max = 40.0;
        long samples = 100000;
        std::uint64_t seed = 0;
        bool normalize = false;
    } r_opt;
    auto* sublevel = remez->add_subcommand("sublevel", "Monte-Carlo sublevel measure");
    auto* lemma8 = remez->add_subcommand("lemma8", "integral bound check");
    remez->require_subcommand(1);
    for (auto* sub : {sublevel, lemma8}) {
        sub->add_option("--poly", r_opt.poly, "polynomial JSON file")->required();
        sub->add_option("--p", r_opt.p, "space exponent");
        sub->add_option("--samples", r_opt.samples, "Monte-Carlo samples");
        sub->add_flag("--normalize", r_opt.normalize,
                      "divide by the estimated sup norm before checking");
    }
    auto* sub_seed = sublevel->add_option("--seed", r_opt.seed, "RNG seed");
    auto* l8_seed = lemma8->add_option("--seed", r_opt.seed, "RNG seed");
    sublevel->add_option("--t", r_opt.t, "threshold in (0,1)")->required();
    lemma8->add_option("--t-max", r_opt.t_max, "integral truncation point");
    remez->callback([&]() {
        auto P = load_polynomial(r_opt.poly);
        SpaceSpec S{Field::real, P.dim(), detail::parse_p(r_opt.p)};
        if (r_opt.normalize) P = normalize_to_unit_norm(P, S);
        const bool is_sub = sublevel->parsed();
        const auto seed = detail::resolve_seed(
            (is_sub ? sub_seed : l8_seed)->count() > 0, r_opt.seed);
        json config{{"poly", r_opt.poly}, {"space", space_to_string(S)},
                    {"samples", r_opt.samples}, {"normalize", r_opt.normalize}};
        if (is_sub) {
            const auto est = estimate_sublevel_measure(P, S, r_opt.t, r_opt.samples, seed);
            config["t"] = r_opt.t;
            detail::emit(out, seed, std::move(config), sublevel_to_json(est));
            if (!est.pass) exit_code = kCheckFailed;
        } else {
            const auto rep = check_lemma8_integral(P, S, r_opt.samples, seed, r_opt.t_max);
            config["t_max"] = r_opt.t_max;
            detail::emit(out, seed, std::move(config), lemma8_to_json(rep));
            if (!rep.pass || !rep.pass_homog) exit_code = kCheckFailed;
        }
    });

    // ----- plank -----------------------------------------------------------------
    auto* plank = app.add_subcommand("plank", "constructive plank witness search");
    struct {
        std::string polys, space, radii, regime = "lp", outfile;
        double K = 0.0;
        long long r_cap = 0;
        int starts = 0, threads = 0;
        std::uint64_t seed = 0;
    } pl_opt;
    plank->add_option("--polys", pl_opt.polys, "directory of polynomial JSON files")->required();
    plank->add_option("--space", pl_opt.space, "lp:p=..,d=..,field=..")->required();
    plank->add_option("--radii", pl_opt.radii, "comma list a_1,..,a_n")->required();
    plank->add_option("--regime", pl_opt.regime, "bst|lp|k-custom|finitedim");
    plank->add_option("--K", pl_opt.K, "constant for the k-custom regime");
    plank->add_option("--r-cap", pl_opt.r_cap, "total-degree cap for the exponents");
    plank->add_option("--starts", pl_opt.starts, "optimizer starts");
    auto* pl_seed = plank->add_option("--seed", pl_opt.seed, "RNG seed");
    plank->add_option("--threads", pl_opt.threads, "worker cap");
    plank->add_option("--out", pl_opt.outfile, "also write the report to this file");
    plank->callback([&]() {
        const auto S = parse_space(pl_opt.space);
        const auto polys = detail::load_poly_dir(pl_opt.polys);
        const auto radii = detail::parse_double_list(pl_opt.radii);
        const auto regime = regime_from_name(pl_opt.regime);
        const auto seed = detail::resolve_seed(pl_seed->count() > 0, pl_opt.seed);
        auto inst = PlankInstance::make(polys, radii, S, regime, pl_opt.K);
        PlankOptions opts;
        opts.ascent.starts = pl_opt.starts;
        opts.ascent.seed = seed;
        opts.ascent.threads = pl_opt.threads > 0 ? pl_opt.threads : (int)hw;
        opts.r_cap = pl_opt.r_cap;
        const auto rep = find_witness(inst, opts);
        json config{{"polys", pl_opt.polys}, {"space", pl_opt.space},
                    {"radii", pl_opt.radii}, {"regime", pl_opt.regime},
                    {"starts", rep.starts}};
        json result = plank_report_to_json(rep, inst);
        if (!pl_opt.outfile.empty()) {
            std::ofstream f(pl_opt.outfile);
            f << result.dump(2) << "\n";
        }
        detail::emit(out, seed, std::move(config), std::move(result));
        if (!rep.success) exit_code = kCheckFailed;
    });

    // ----- extremal -----------------------------------------------------------
    auto* extremal = app.add_subcommand("extremal", "l_1^d extremal family equality check");
    struct {
        int d = 2, n = 3, k = 1;
    } ex_opt;
    extremal->add_option("--d", ex_opt.d, "dimension")->required();
    extremal->add_option("--n", ex_opt.n, "number of polynomials")->required();
    extremal->add_option("--k", ex_opt.k, "base degree");
    extremal->callback([&]() {
        const auto fam = build_family(ex_opt.d, ex_opt.n, ex_opt.k);
        const auto rep = verify_equality(fam);
        json result{{"log_product_norm", rep.log_product_norm},
                    {"log_claimed", rep.log_claimed},
                    {"log_factor_norms", rep.log_factor_norms},
                    {"total_degree", rep.total_degree},
                    {"ratio_per_degree", fam.expected_ratio},
                    {"estimate_cross_check", rep.estimate_cross_check},
                    {"pass", rep.pass}};
        json config{{"d", ex_opt.d}, {"n", ex_opt.n}, {"k", ex_opt.k}};
        detail::emit(out, 0, std::move(config), std::move(result));
        if (!rep.pass) exit_code = kCheckFailed;
    });

    // ----- verify-inequality -----------------------------------------------------
    auto* verify = app.add_subcommand("verify-inequality",
                                      "sound-direction product inequality check");
    struct {
        std::string polys, space, kind = "eq2";
        double rtol = 1e-6;
        int starts = 0, threads = 0;
        std::uint64_t seed = 0;
    } v_opt;
    verify->add_option("--polys", v_opt.polys, "directory of polynomial JSON files")->required();
    verify->add_option("--space", v_opt.space, "lp:p=..,d=..,field=..")->required();
    verify->add_option("--kind", v_opt.kind, "eq2|eq3|eq4|eq5|eq6|prop12-derived");
    verify->add_option("--rtol", v_opt.rtol, "relative slack");
    verify->add_option("--starts", v_opt.starts, "optimizer starts");
    auto* v_seed = verify->add_option("--seed", v_opt.seed, "RNG seed");
    verify->add_option("--threads", v_opt.threads, "worker cap");
    verify->callback([&]() {
        const auto S = parse_space(v_opt.space);
        const auto polys = detail::load_poly_dir(v_opt.polys);
        const auto kind = bound_kind_from_name(v_opt.kind);
        const auto seed = detail::resolve_seed(v_seed->count() > 0, v_opt.seed);
        VerifyOptions opts;
        opts.rtol = v_opt.rtol;
        opts.ascent.starts = v_opt.starts;
        opts.ascent.seed = seed;
        opts.ascent.threads = v_opt.threads > 0 ? v_opt.threads : (int)hw;
        const auto rep = verify_product_inequality(polys, S, kind, opts);
        json config{{"polys", v_opt.polys}, {"space", v_opt.space}, {"kind", v_opt.kind},
                    {"rtol", v_opt.rtol}};
        detail::emit(out, seed, std::move(config), verify_report_to_json(rep, S));
        if (!rep.pass) exit_code = kCheckFailed;
    });

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return kOk;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kUsage;
    } catch (const infeasible_error& e) {
        err << "infeasible: " << e.what() << "\n";
        return kInfeasible;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
    return exit_code;
}

}  // namespace plankforge::cli
