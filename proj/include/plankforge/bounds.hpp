#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "plankforge/polynomial.hpp"
#include "plankforge/space.hpp"
#include "plankforge/sup_norm.hpp"

namespace plankforge {

// ln Gamma(x) for x > 0: Stirling series with Bernoulli correction terms,
// lifted by the recurrence ln Gamma(x) = ln Gamma(x+1) - ln x below x = 12.
inline double log_gamma(double x) {
    if (!(x > 0.0)) throw std::domain_error("log_gamma: requires x > 0");
    double shift = 0.0;
    while (x < 12.0) {
        shift += std::log(x);
        x += 1.0;
    }
    static constexpr double c[7] = {
        1.0 / 12.0,   -1.0 / 360.0,      1.0 / 1260.0, -1.0 / 1680.0,
        1.0 / 1188.0, -691.0 / 360360.0, 1.0 / 156.0};
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    double corr = 0.0, t = inv;
    for (double ck : c) {
        corr += ck * t;
        t *= inv2;
    }
    constexpr double half_log_two_pi = 0.91893853320467274178;
    return (x - 0.5) * std::log(x) - x + half_log_two_pi + corr - shift;
}

// d-th harmonic number, summed smallest term first.
inline double harmonic(int d) {
    if (d < 1) throw std::invalid_argument("harmonic: d must be >= 1");
    double s = 0.0;
    for (int k = d; k >= 1; --k) s += 1.0 / static_cast<double>(k);
    return s;
}

// The product-inequality constants. Names follow the standing abbreviations:
// bst                       K^K / prod k_i^{k_i}
// hilbert_complex           sqrt of bst
// hilbert_real_mnpp         sqrt(2^K Gamma(K + d/2) / (Gamma(d/2) prod k_i!))
// lp                        p-th root of bst (1 <= p <= 2)
// finite_dim                (C 4 e d)^K / 2^{n/C}, C = 1 real, 2 complex
// hilbert_finite_as_stated  (e^{H_{dC}} / 4)^K   (below 1 at small d; see
//                           hilbert_finite_derived for the usable variant)
// hilbert_finite_derived    (4 e^{H_{dC}})^K
enum class BoundKind {
    bst,
    hilbert_complex,
    hilbert_real_mnpp,
    lp,
    finite_dim,
    hilbert_finite_as_stated,
    hilbert_finite_derived,
};

struct BoundSpec {
    BoundKind kind = BoundKind::bst;
    std::vector<int> degrees;  // k_1..k_n, all >= 1
    Field field = Field::real;
    int d = 0;       // dimension where applicable
    double p = 0.0;  // exponent for BoundKind::lp
};

namespace detail {

inline double field_constant(Field f) { return f == Field::real ? 1.0 : 2.0; }

inline void check_degrees(const std::vector<int>& k) {
    if (k.empty()) throw std::invalid_argument("bound: needs at least one degree");
    for (int v : k)
        if (v < 1) throw std::invalid_argument("bound: degrees must be >= 1");
}

}  // namespace detail

// ln of the constant; everything is computed in the log domain since the raw
// values overflow doubles already at K around 140.
inline double bound_log_value(const BoundSpec& spec) {
    detail::check_degrees(spec.degrees);
    const int n = static_cast<int>(spec.degrees.size());
    double K = 0.0, k_log_k = 0.0, log_k_fact = 0.0;
    for (int ki : spec.degrees) {
        const double k = static_cast<double>(ki);
        K += k;
        k_log_k += k * std::log(k);
        log_k_fact += log_gamma(k + 1.0);
    }
    const double bst_log = K * std::log(K) - k_log_k;
    const double C = detail::field_constant(spec.field);
    const double e = std::numbers::e_v<double>;
    switch (spec.kind) {
        case BoundKind::bst:
            return bst_log;
        case BoundKind::hilbert_complex:
            return 0.5 * bst_log;
        case BoundKind::hilbert_real_mnpp: {
            if (spec.d < 1) throw std::invalid_argument("bound: mnpp needs d >= 1");
            const double hd = 0.5 * static_cast<double>(spec.d);
            return 0.5 * (K * std::numbers::ln2_v<double> + log_gamma(K + hd) -
                          log_gamma(hd) - log_k_fact);
        }
        case BoundKind::lp:
            if (!(spec.p >= 1.0 && spec.p <= 2.0))
                throw std::invalid_argument("bound: lp kind needs p in [1,2]");
            return bst_log / spec.p;
        case BoundKind::finite_dim:
            if (spec.d < 1) throw std::invalid_argument("bound: finite_dim needs d >= 1");
            return K * std::log(C * 4.0 * e * static_cast<double>(spec.d)) -
                   (static_cast<double>(n) / C) * std::numbers::ln2_v<double>;
        case BoundKind::hilbert_finite_as_stated:
            if (spec.d < 1) throw std::invalid_argument("bound: needs d >= 1");
            return K * (harmonic(spec.d * static_cast<int>(C)) - std::log(4.0));
        case BoundKind::hilbert_finite_derived:
            if (spec.d < 1) throw std::invalid_argument("bound: needs d >= 1");
            return K * (std::log(4.0) + harmonic(spec.d * static_cast<int>(C)));
    }
    throw std::logic_error("bound_log_value: unknown kind");
}

inline BoundKind bound_kind_from_name(const std::string& name) {
    if (name == "eq2") return BoundKind::bst;
    if (name == "eq3") return BoundKind::hilbert_complex;
    if (name == "eq4") return BoundKind::hilbert_real_mnpp;
    if (name == "eq5") return BoundKind::lp;
    if (name == "eq6") return BoundKind::finite_dim;
    if (name == "prop12-as-stated") return BoundKind::hilbert_finite_as_stated;
    if (name == "prop12" || name == "prop12-derived") return BoundKind::hilbert_finite_derived;
    throw std::invalid_argument("unknown bound kind '" + name + "'");
}

inline std::string bound_kind_name(BoundKind k) {
    switch (k) {
        case BoundKind::bst: return "eq2";
        case BoundKind::hilbert_complex: return "eq3";
        case BoundKind::hilbert_real_mnpp: return "eq4";
        case BoundKind::lp: return "eq5";
        case BoundKind::finite_dim: return "eq6";
        case BoundKind::hilbert_finite_as_stated: return "prop12-as-stated";
        case BoundKind::hilbert_finite_derived: return "prop12-derived";
    }
    return "?";
}

// finite_dim vs mnpp for n equal-degree real homogeneous polynomials: the
// log values of both and the crossover in n located by bisection.
struct BoundComparison {
    double log_finite_dim = 0.0;
    double log_mnpp = 0.0;
    bool finite_dim_smaller = false;
    int crossover_n = -1;  // smallest n in [2, 10^6] where finite_dim wins; -1 if none
};

inline BoundComparison compare_bounds(int n, int k_common, int d) {
    if (n < 1 || k_common < 1 || d < 1)
        throw std::invalid_argument("compare_bounds: n, k, d must be >= 1");
    auto diff = [&](int m) {
        const std::vector<int> ks(static_cast<std::size_t>(m), k_common);
        const BoundSpec six{BoundKind::finite_dim, ks, Field::real, d, 0.0};
        const BoundSpec four{BoundKind::hilbert_real_mnpp, ks, Field::real, d, 0.0};
        return bound_log_value(six) - bound_log_value(four);
    };
    BoundComparison out;
    {
        const std::vector<int> ks(static_cast<std::size_t>(n), k_common);
        out.log_finite_dim =
            bound_log_value({BoundKind::finite_dim, ks, Field::real, d, 0.0});
        out.log_mnpp =
            bound_log_value({BoundKind::hilbert_real_mnpp, ks, Field::real, d, 0.0});
        out.finite_dim_smaller = out.log_finite_dim < out.log_mnpp;
    }
    int lo = 2, hi = 1000000;
    if (diff(lo) < 0.0) {
        out.crossover_n = lo;
    } else if (diff(hi) >= 0.0) {
        out.crossover_n = -1;
    } else {
        while (hi - lo > 1) {
            const int mid = lo + (hi - lo) / 2;
            (diff(mid) < 0.0 ? hi : lo) = mid;
        }
        out.crossover_n = hi;
    }
    return out;
}

// Ratio of the as-stated Hilbert constant base e^{H_{dC}}/4 against
// C*factor*e*d (factor 2 and 4 are both of interest; at d = 1 real with
// factor 2 the value is exactly 1/8).
inline double hilbert_vs_finite_dim_base_ratio(int d, Field field, double factor) {
    if (d < 1) throw std::invalid_argument("ratio: d must be >= 1");
    const double C = detail::field_constant(field);
    const double base = std::exp(harmonic(d * static_cast<int>(C))) / 4.0;
    return base / (C * factor * std::numbers::e_v<double> * static_cast<double>(d));
}

// ---------------------------------------------------------------------------
// Empirical verification of the product inequality.

struct VerifyOptions {
    double rtol = 1e-6;
    AscentOptions ascent;
};

struct VerifyReport {
    double log_bound = 0.0;        // ln M
    double log_lhs = 0.0;          // ln M + ln est(prod)
    double log_rhs = 0.0;          // sum ln est(P_i)
    double margin = 0.0;           // log_lhs - log_rhs
    bool pass = false;
    std::vector<NormEstimate> factor_estimates;
    NormEstimate product_estimate;
};

namespace detail {

inline void check_kind_admissible(BoundKind kind, const SpaceSpec& S, bool all_homogeneous) {
    auto need_homog = [&]() {
        if (!all_homogeneous)
            throw std::invalid_argument("verify: this bound kind requires homogeneous polynomials");
    };
    switch (kind) {
        case BoundKind::bst:
            if (S.field != Field::complex)
                throw std::invalid_argument("verify: eq2 applies to complex spaces");
            break;
        case BoundKind::hilbert_complex:
            if (S.field != Field::complex || S.p != 2.0)
                throw std::invalid_argument("verify: eq3 applies to complex Hilbert spaces");
            need_homog();
            break;
        case BoundKind::hilbert_real_mnpp:
            if (S.field != Field::real || S.p != 2.0)
                throw std::invalid_argument("verify: eq4 applies to real Hilbert spaces");
            need_homog();
            break;
        case BoundKind::lp:
            if (S.field != Field::complex || !(S.p >= 1.0 && S.p <= 2.0))
                throw std::invalid_argument("verify: eq5 applies to complex l_p, p in [1,2]");
            need_homog();
            break;
        case BoundKind::finite_dim:
            break;
        case BoundKind::hilbert_finite_as_stated:
        case BoundKind::hilbert_finite_derived:
            if (S.p != 2.0)
                throw std::invalid_argument("verify: prop12 kinds apply to Hilbert spaces");
            need_homog();
            break;
    }
}

}  // namespace detail

// Sound-direction check of ||P_1||...||P_n|| <= M ||P_1...P_n||: with est a
// lower bound of each true norm, M*est(prod) >= prod est(P_i) * (1 - rtol)
// must hold whenever est(prod) is well converged. A failure therefore means
// either an optimizer failure (visible in the diagnostics) or a genuine
// counterexample.
inline VerifyReport verify_product_inequality(const std::vector<Polynomial>& polys,
                                              const SpaceSpec& S, BoundKind kind,
                                              const VerifyOptions& opts = {}) {
    if (polys.empty()) throw std::invalid_argument("verify: empty polynomial list");
    bool all_homog = true;
    std::vector<int> degrees;
    for (const auto& P : polys) {
        if (P.is_zero()) throw std::invalid_argument("verify: zero polynomial");
        if (P.dim() != S.d) throw std::invalid_argument("verify: dimension mismatch");
        all_homog = all_homog && P.is_homogeneous();
        degrees.push_back(P.degree());
    }
    detail::check_kind_admissible(kind, S, all_homog);

    VerifyReport rep;
    rep.log_bound = bound_log_value({kind, degrees, S.field, S.d, S.p});
    double sum_log = 0.0;
    for (std::size_t i = 0; i < polys.size(); ++i) {
        AscentOptions a = opts.ascent;
        a.seed = opts.ascent.seed + detail::splitmix64(i + 1);
        rep.factor_estimates.push_back(estimate_sup_norm(polys[i], S, a));
        sum_log += std::log(rep.factor_estimates.back().value);
    }
    Polynomial prod = polys[0];
    for (std::size_t i = 1; i < polys.size(); ++i) prod = multiply(prod, polys[i]);
    {
        AscentOptions a = opts.ascent;
        a.seed = opts.ascent.seed + detail::splitmix64(0);
        rep.product_estimate = estimate_sup_norm(prod, S, a);
    }
    rep.log_lhs = rep.log_bound + std::log(rep.product_estimate.value);
    rep.log_rhs = sum_log;
    rep.margin = rep.log_lhs - rep.log_rhs;
    rep.pass = rep.margin >= std::log1p(-opts.rtol);
    return rep;
}

// ---------------------------------------------------------------------------
// Stochastic lower-bound search for M_n(X) and the linear polarization
// constants. 70% of the budget goes to fresh random tuples, 30% to coefficient
// perturbation around the incumbent; the incumbent is re-estimated with a
// doubled start count before being returned.

struct SearchOptions {
    int degree_cap = 2;
    long budget = 200;
    std::uint64_t seed = 0;
    int starts = 0;  // per norm estimate; 0 selects the space default
    int threads = 1;
};

struct SearchEstimate {
    double constant = 1.0;   // per-unit-degree ratio for M_n; the raw ratio for c_k
    double log_ratio = 0.0;  // ln of the full product ratio at the witness tuple
    std::vector<Polynomial> tuple;
    long evaluations = 0;
};

namespace detail {

struct RatioEval {
    double log_ratio = -std::numeric_limits<double>::infinity();
    double total_degree = 0.0;
    bool ok = false;
    std::vector<NormEstimate> factors;
    NormEstimate product;
};

inline RatioEval tuple_log_ratio(const std::vector<Polynomial>& tuple, const SpaceSpec& S,
                                 const AscentOptions& opts) {
    RatioEval out;
    double sum_log = 0.0, total_deg = 0.0;
    for (std::size_t i = 0; i < tuple.size(); ++i) {
        if (tuple[i].is_zero()) return out;
        AscentOptions a = opts;
        a.seed = opts.seed + splitmix64(i + 1);
        out.factors.push_back(estimate_sup_norm(tuple[i], S, a));
        if (out.factors.back().value <= 0.0) return out;
        sum_log += std::log(out.factors.back().value);
        total_deg += tuple[i].degree();
    }
    Polynomial prod = tuple[0];
    for (std::size_t i = 1; i < tuple.size(); ++i) prod = multiply(prod, tuple[i]);
    AscentOptions a = opts;
    a.seed = opts.seed + splitmix64(0);
    out.product = estimate_sup_norm(prod, S, a);
    if (out.product.value <= 0.0) return out;
    out.log_ratio = sum_log - std::log(out.product.value);
    out.total_degree = total_deg;
    out.ok = true;
    return out;
}

inline Polynomial perturb_polynomial(const Polynomial& p, double sigma, std::mt19937_64& rng) {
    Polynomial noise = random_polynomial(p.dim(), p.field(), p.degree(),
                                         p.is_homogeneous(), rng);
    const double scale = sigma * std::max(p.max_coeff_modulus(), 1e-12);
    return add(p, noise * Coeff{scale, 0.0});
}

inline Coeff pow_multi(const std::vector<Coeff>& z, const MultiIndex& alpha) {
    Coeff v{1.0, 0.0};
    for (std::size_t i = 0; i < alpha.size(); ++i)
        for (std::uint32_t k = 0; k < alpha[i]; ++k) v *= z[i];
    return v;
}

// d ln|P| / d coeff at a fixed point z (Danskin direction through the norm
// estimate's maximizer): z^alpha / P(z), split into (d/dRe c, d/dIm c).
inline std::pair<double, double> log_abs_coeff_grad(const Polynomial& P,
                                                    const std::vector<Coeff>& z,
                                                    const MultiIndex& alpha) {
    const Coeff r = pow_multi(z, alpha) / evaluate(P, z);
    return {r.real(), -r.imag()};
}

// Nelder-Mead maximization, used as a derivative-free polish around a search
// incumbent; the ratio objectives have kinks where gradient steps stall.
template <class Fn>
inline std::vector<double> nelder_mead_max(Fn&& fn, std::vector<double> x0, double step,
                                           long max_evals) {
    const std::size_t m = x0.size();
    long evals = 0;
    auto f = [&](const std::vector<double>& x) {
        ++evals;
        return fn(x);
    };
    std::vector<std::vector<double>> simplex{x0};
    std::vector<double> val{f(x0)};
    for (std::size_t i = 0; i < m; ++i) {
        auto v = x0;
        v[i] += step * std::max(1.0, std::abs(v[i]));
        simplex.push_back(v);
        val.push_back(f(simplex.back()));
    }
    auto order = [&]() {
        for (std::size_t i = 0; i + 1 < simplex.size(); ++i)
            for (std::size_t j = i + 1; j < simplex.size(); ++j)
                if (val[j] > val[i]) {
                    std::swap(val[i], val[j]);
                    std::swap(simplex[i], simplex[j]);
                }
    };
    while (evals < max_evals) {
        order();
        std::vector<double> centroid(m, 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) centroid[j] += simplex[i][j];
        }
        for (double& c : centroid) c /= static_cast<double>(m);
        const auto& worst = simplex[m];
        std::vector<double> refl(m);
        for (std::size_t j = 0; j < m; ++j) refl[j] = 2.0 * centroid[j] - worst[j];
        const double fr = f(refl);
        if (fr > val[0]) {
            std::vector<double> expd(m);
            for (std::size_t j = 0; j < m; ++j) expd[j] = 3.0 * centroid[j] - 2.0 * worst[j];
            const double fe = f(expd);
            if (fe > fr) {
                simplex[m] = expd;
                val[m] = fe;
            } else {
                simplex[m] = refl;
                val[m] = fr;
            }
        } else if (fr > val[m - 1]) {
            simplex[m] = refl;
            val[m] = fr;
        } else {
            std::vector<double> contr(m);
            for (std::size_t j = 0; j < m; ++j) contr[j] = 0.5 * (centroid[j] + worst[j]);
            const double fc = f(contr);
            if (fc > val[m]) {
                simplex[m] = contr;
                val[m] = fc;
            } else {
                for (std::size_t i = 1; i <= m; ++i) {
                    for (std::size_t j = 0; j < m; ++j)
                        simplex[i][j] = 0.5 * (simplex[i][j] + simplex[0][j]);
                    val[i] = f(simplex[i]);
                }
            }
        }
    }
    order();
    return simplex[0];
}

}  // namespace detail

inline SearchEstimate estimate_Mn(const SpaceSpec& S, int n, const SearchOptions& opts,
                                  const std::vector<Polynomial>* initial = nullptr) {
    S.validate();
    if (n < 1) throw std::invalid_argument("estimate_Mn: n must be >= 1");
    SearchEstimate best;
    if (n == 1 && initial == nullptr) {
        best.constant = 1.0;  // M_1 = 1 by definition of the norm
        return best;
    }
    // cheaper estimates while searching; the final re-estimation is generous
    AscentOptions est_opts{.starts = opts.starts > 0 ? opts.starts : 8 * S.d,
                           .seed = opts.seed, .threads = opts.threads};
    std::mt19937_64 rng(detail::splitmix64(opts.seed ^ 0x4d6eULL));
    std::uniform_int_distribution<int> degree(1, std::max(1, opts.degree_cap));

    double best_per_degree = -std::numeric_limits<double>::infinity();
    std::vector<Polynomial> incumbent;
    detail::RatioEval inc_eval;
    long evals = 0;

    auto consider = [&](const std::vector<Polynomial>& tuple) {
        AscentOptions a = est_opts;
        a.seed = est_opts.seed + detail::splitmix64(0xE000000ULL + static_cast<std::uint64_t>(evals));
        auto r = detail::tuple_log_ratio(tuple, S, a);
        ++evals;
        if (!r.ok) return false;
        const double per_degree = r.log_ratio / r.total_degree;
        if (per_degree > best_per_degree) {
            best_per_degree = per_degree;
            incumbent = tuple;
            inc_eval = std::move(r);
            return true;
        }
        return false;
    };

    if (initial != nullptr) consider(*initial);
    const long restarts = (opts.budget * 7) / 10;
    while (evals < restarts) {
        std::vector<Polynomial> tuple;
        for (int i = 0; i < n; ++i)
            tuple.push_back(random_polynomial(S.d, S.field, degree(rng), true, rng));
        consider(tuple);
    }
    // Refinement: ascend along the ratio gradient taken through the norm
    // estimates' maximizers (the own-norm term pulls coefficients up, the
    // product-norm term pushes them down), with an occasional random kick.
    const long grad_budget = restarts + (opts.budget - restarts) / 2;
    double eta = 0.2;
    while (evals < grad_budget && !incumbent.empty()) {
        if (evals % 8 == 7) {
            auto tuple = incumbent;
            const std::size_t slot = rng() % tuple.size();
            tuple[slot] = detail::perturb_polynomial(tuple[slot], eta, rng);
            consider(tuple);
            continue;
        }
        std::vector<Polynomial> tuple = incumbent;
        const auto zprod = to_complex_point(S, inc_eval.product.argmax);
        for (std::size_t i = 0; i < tuple.size(); ++i) {
            const auto zi = to_complex_point(S, inc_eval.factors[i].argmax);
            Polynomial stepped(S.d, S.field);
            double gmax = 0.0;
            std::vector<std::pair<MultiIndex, Coeff>> grads;
            for (const auto& [alpha, c] : incumbent[i].terms()) {
                const auto own = detail::log_abs_coeff_grad(incumbent[i], zi, alpha);
                const auto prod = detail::log_abs_coeff_grad(incumbent[i], zprod, alpha);
                Coeff g{own.first - prod.first,
                        S.field == Field::real ? 0.0 : own.second - prod.second};
                grads.emplace_back(alpha, g);
                gmax = std::max(gmax, std::abs(g));
            }
            const double scale =
                gmax > 0.0 ? eta * incumbent[i].max_coeff_modulus() / gmax : 0.0;
            for (std::size_t t = 0; t < grads.size(); ++t) {
                const Coeff c = incumbent[i].coeff(grads[t].first);
                stepped.add_term(grads[t].first, c + scale * grads[t].second);
            }
            tuple[i] = stepped.is_zero() ? incumbent[i] : stepped;
        }
        eta = consider(tuple) ? std::min(eta * 1.5, 1.0) : std::max(eta * 0.5, 1e-9);
    }
    // simplex polish on the flattened coefficient vector, deterministic seed
    if (!incumbent.empty() && opts.budget - evals > 4) {
        const bool cplx = S.field == Field::complex;
        std::vector<std::vector<MultiIndex>> layout;
        std::vector<double> x0;
        for (const auto& p : incumbent) {
            layout.emplace_back();
            for (const auto& [alpha, c] : p.terms()) {
                layout.back().push_back(alpha);
                x0.push_back(c.real());
                if (cplx) x0.push_back(c.imag());
            }
        }
        auto rebuild = [&](const std::vector<double>& x) {
            std::vector<Polynomial> tuple;
            std::size_t pos = 0;
            for (std::size_t i = 0; i < layout.size(); ++i) {
                Polynomial p(S.d, S.field);
                for (const auto& alpha : layout[i]) {
                    const double re = x[pos++];
                    const double im = cplx ? x[pos++] : 0.0;
                    p.add_term(alpha, Coeff{re, im});
                }
                tuple.push_back(std::move(p));
            }
            return tuple;
        };
        AscentOptions fixed = est_opts;
        fixed.seed = est_opts.seed + detail::splitmix64(0xD00DULL);
        const long nm_budget = opts.budget - evals - 1;
        long nm_used = 0;
        auto objective = [&](const std::vector<double>& x) {
            ++nm_used;
            const auto tuple = rebuild(x);
            for (const auto& p : tuple)
                if (p.is_zero()) return -std::numeric_limits<double>::infinity();
            const auto r = detail::tuple_log_ratio(tuple, S, fixed);
            return r.ok ? r.log_ratio / r.total_degree
                        : -std::numeric_limits<double>::infinity();
        };
        const auto xbest = detail::nelder_mead_max(objective, x0, 0.05, nm_budget);
        evals += nm_used;
        consider(rebuild(xbest));
    }

    if (incumbent.empty()) throw std::runtime_error("estimate_Mn: no admissible tuple found");
    // final, better-converged re-estimation of the incumbent
    AscentOptions final_opts = est_opts;
    final_opts.starts = 64 * S.d;
    final_opts.seed = est_opts.seed + detail::splitmix64(0xF1A1ULL);
    const auto fin = detail::tuple_log_ratio(incumbent, S, final_opts);
    best.log_ratio = fin.log_ratio;
    best.constant = std::exp(fin.log_ratio / fin.total_degree);
    best.tuple = std::move(incumbent);
    best.evaluations = evals;
    return best;
}

// estimate_Mn restricted to degree-one factors, normalized to dual norm one;
// returns the raw ratio prod ||phi_i|| / ||prod phi_i|| = 1 / ||prod phi_i||.
inline SearchEstimate estimate_polarization_constant(const SpaceSpec& S, int k,
                                                     const SearchOptions& opts) {
    S.validate();
    if (k < 1) throw std::invalid_argument("polarization: k must be >= 1");
    SearchEstimate best;
    if (k == 1) {
        best.constant = 1.0;  // a single norm-one functional
        return best;
    }
    AscentOptions est_opts{.starts = opts.starts > 0 ? opts.starts : 8 * S.d,
                           .seed = opts.seed, .threads = opts.threads};
    std::mt19937_64 rng(detail::splitmix64(opts.seed ^ 0xC4A1ULL));
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double pdual = dual_exponent(S.p);

    auto random_functional = [&]() {
        std::vector<Coeff> a(static_cast<std::size_t>(S.d));
        for (auto& v : a)
            v = S.field == Field::real ? Coeff{gauss(rng), 0.0} : Coeff{gauss(rng), gauss(rng)};
        return a;
    };
    auto normalize_dual = [&](std::vector<Coeff>& a) {
        std::vector<double> mods(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) mods[i] = std::abs(a[i]);
        const double nrm = lp_norm(mods, pdual);
        if (nrm == 0.0) return false;
        for (auto& v : a) v /= nrm;
        return true;
    };
    auto build_product = [&](const std::vector<std::vector<Coeff>>& funcs) {
        Polynomial prod = Polynomial::constant(S.d, S.field, Coeff{1.0, 0.0});
        for (const auto& f : funcs) {
            Polynomial lin(S.d, S.field);
            for (int i = 0; i < S.d; ++i) {
                MultiIndex e(static_cast<std::size_t>(S.d), 0u);
                e[i] = 1;
                lin.add_term(e, f[i]);
            }
            prod = multiply(prod, lin);
        }
        return prod;
    };

    double best_log = -std::numeric_limits<double>::infinity();
    std::vector<std::vector<Coeff>> incumbent;
    NormEstimate inc_est;
    long evals = 0;
    auto consider = [&](std::vector<std::vector<Coeff>> funcs) {
        for (auto& f : funcs)
            if (!normalize_dual(f)) return false;
        AscentOptions a = est_opts;
        a.seed = est_opts.seed + detail::splitmix64(0xE000000ULL + static_cast<std::uint64_t>(evals));
        const auto est = estimate_sup_norm(build_product(funcs), S, a);
        ++evals;
        if (est.value <= 0.0) return false;
        const double lr = -std::log(est.value);
        if (lr > best_log) {
            best_log = lr;
            incumbent = std::move(funcs);
            inc_est = est;
            return true;
        }
        return false;
    };

    const long restarts = (opts.budget * 7) / 10;
    while (evals < restarts) {
        std::vector<std::vector<Coeff>> funcs;
        for (int i = 0; i < k; ++i) funcs.push_back(random_functional());
        consider(std::move(funcs));
    }
    // Refinement: descend the product norm through its maximizer (the dual
    // renormalization keeps every factor norm one), plus occasional kicks.
    const long grad_budget = restarts + (opts.budget - restarts) / 2;
    double eta = 0.2;
    while (evals < grad_budget && !incumbent.empty()) {
        if (evals % 8 == 7) {
            auto funcs = incumbent;
            auto& f = funcs[rng() % funcs.size()];
            for (auto& v : f)
                v += Coeff{eta * gauss(rng),
                           S.field == Field::real ? 0.0 : eta * gauss(rng)};
            consider(std::move(funcs));
            continue;
        }
        const auto z = to_complex_point(S, inc_est.argmax);
        auto funcs = incumbent;
        for (int i = 0; i < k; ++i) {
            Coeff phi{0.0, 0.0};
            for (int j = 0; j < S.d; ++j) phi += incumbent[i][j] * z[j];
            if (phi == Coeff{0.0, 0.0}) continue;
            double gmax = 0.0;
            std::vector<Coeff> g(static_cast<std::size_t>(S.d));
            for (int j = 0; j < S.d; ++j) {
                const Coeff r = z[j] / phi;
                g[j] = Coeff{-r.real(), S.field == Field::real ? 0.0 : r.imag()};
                gmax = std::max(gmax, std::abs(g[j]));
            }
            if (gmax == 0.0) continue;
            for (int j = 0; j < S.d; ++j) funcs[i][j] += (eta / gmax) * g[j];
        }
        eta = consider(std::move(funcs)) ? std::min(eta * 1.5, 1.0)
                                         : std::max(eta * 0.5, 1e-9);
    }
    // simplex polish on the flattened functional coefficients
    if (!incumbent.empty() && opts.budget - evals > 4) {
        const bool cplx = S.field == Field::complex;
        std::vector<double> x0;
        for (const auto& f : incumbent)
            for (const auto& v : f) {
                x0.push_back(v.real());
                if (cplx) x0.push_back(v.imag());
            }
        auto rebuild = [&](const std::vector<double>& x) {
            std::vector<std::vector<Coeff>> funcs(static_cast<std::size_t>(k));
            std::size_t pos = 0;
            for (auto& f : funcs) {
                f.resize(static_cast<std::size_t>(S.d));
                for (auto& v : f) {
                    const double re = x[pos++];
                    const double im = cplx ? x[pos++] : 0.0;
                    v = Coeff{re, im};
                }
            }
            return funcs;
        };
        AscentOptions fixed = est_opts;
        fixed.seed = est_opts.seed + detail::splitmix64(0xD00DULL);
        const long nm_budget = opts.budget - evals - 1;
        long nm_used = 0;
        auto objective = [&](const std::vector<double>& x) {
            ++nm_used;
            auto funcs = rebuild(x);
            for (auto& f : funcs)
                if (!normalize_dual(f)) return -std::numeric_limits<double>::infinity();
            const auto est = estimate_sup_norm(build_product(funcs), S, fixed);
            return est.value > 0.0 ? -std::log(est.value)
                                   : -std::numeric_limits<double>::infinity();
        };
        const auto xbest = detail::nelder_mead_max(objective, x0, 0.05, nm_budget);
        evals += nm_used;
        consider(rebuild(xbest));
    }
    if (incumbent.empty())
        throw std::runtime_error("polarization: no admissible tuple found");

    AscentOptions final_opts = est_opts;
    final_opts.starts = 64 * S.d;
    final_opts.seed = est_opts.seed + detail::splitmix64(0xF1A1ULL);
    const auto est = estimate_sup_norm(build_product(incumbent), S, final_opts);
    best.log_ratio = -std::log(est.value);
    best.constant = std::exp(best.log_ratio);
    best.tuple.clear();
    for (const auto& f : incumbent) {
        Polynomial lin(S.d, S.field);
        for (int i = 0; i < S.d; ++i) {
            MultiIndex e(static_cast<std::size_t>(S.d), 0u);
            e[i] = 1;
            lin.add_term(e, f[i]);
        }
        best.tuple.push_back(lin);
    }
    best.evaluations = evals;
    return best;
}

}  // namespace plankforge
