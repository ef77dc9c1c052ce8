#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "plankforge/bounds.hpp"
#include "plankforge/polynomial.hpp"
#include "plankforge/space.hpp"
#include "plankforge/sup_norm.hpp"

namespace plankforge {

// Chebyshev polynomial of the first kind. Three-term recurrence inside
// [-1, 1]; cosh form outside, where the recurrence loses digits.
inline double chebyshev_T(int k, double x) {
    if (k < 0) throw std::invalid_argument("chebyshev_T: k must be >= 0");
    if (k == 0) return 1.0;
    if (std::abs(x) <= 1.0) {
        double tm1 = 1.0, t = x;
        for (int i = 2; i <= k; ++i) {
            const double next = 2.0 * x * t - tm1;
            tm1 = t;
            t = next;
        }
        return t;
    }
    const double v = std::cosh(static_cast<double>(k) * std::acosh(std::abs(x)));
    return (x < 0.0 && (k % 2 == 1)) ? -v : v;
}

// (4|I| / |V|)^k, evaluated in the log domain.
inline double remez_univariate_bound(int k, double interval_len, double subset_len) {
    if (k < 0) throw std::invalid_argument("remez_univariate_bound: k must be >= 0");
    if (!(subset_len > 0.0)) throw std::invalid_argument("remez_univariate_bound: |V| must be > 0");
    if (subset_len > interval_len)
        throw std::invalid_argument("remez_univariate_bound: |V| must not exceed |I|");
    return std::exp(static_cast<double>(k) * std::log(4.0 * interval_len / subset_len));
}

// T_k((1 + (1-lambda)^{1/d}) / (1 - (1-lambda)^{1/d})): the multivariate
// sup-norm bound for measure fraction lambda of the unit ball.
inline double brudnyi_ganzburg_bound(int k, int d, double lambda) {
    if (k < 0 || d < 1) throw std::invalid_argument("brudnyi_ganzburg_bound: bad k or d");
    if (!(lambda > 0.0 && lambda <= 1.0))
        throw std::invalid_argument("brudnyi_ganzburg_bound: lambda must be in (0,1]");
    if (lambda == 1.0) return 1.0;
    const double r = std::pow(1.0 - lambda, 1.0 / static_cast<double>(d));
    return chebyshev_T(k, (1.0 + r) / (1.0 - r));
}

// 0.5 * (4d / lambda)^k: the pointwise multivariate bound behind the sublevel
// estimate below.
inline double remez_multivariate_bound(int k, int d, double lambda) {
    if (k < 0 || d < 1) throw std::invalid_argument("remez_multivariate_bound: bad k or d");
    if (!(lambda > 0.0 && lambda <= 1.0))
        throw std::invalid_argument("remez_multivariate_bound: lambda must be in (0,1]");
    return 0.5 * std::exp(static_cast<double>(k) * std::log(4.0 * d / lambda));
}

// mu({z in B: |P(z)| <= t}) <= 4d (t/2)^{1/k} for norm-one P of degree k.
inline double sublevel_measure_bound(int k, int d, double t) {
    if (k < 1 || d < 1) throw std::invalid_argument("sublevel_measure_bound: bad k or d");
    if (!(t > 0.0 && t < 1.0))
        throw std::invalid_argument("sublevel_measure_bound: t must be in (0,1)");
    return 4.0 * d * std::pow(t / 2.0, 1.0 / static_cast<double>(k));
}

struct SublevelEstimate {
    double t = 0.0;
    double measure = 0.0;
    double stderr_ = 0.0;
    long samples = 0;
    std::uint64_t seed = 0;
    double bound = 0.0;  // 4d (t/2)^{1/k}
    bool pass = false;   // measure <= bound + 3 stderr
};

struct Lemma8Report {
    double integral = 0.0;  // int_0^{t_max} mu(|P| <= e^{-t}) dt
    double stderr_ = 0.0;
    double t_max = 40.0;
    int k = 0;
    int d = 0;
    double bound = 0.0;        // k ln(4d) - ln 2 + k
    bool pass = false;
    double bound_homog = 0.0;  // k (ln 4 + H_d); only meaningful when applicable
    bool homog_applicable = false;
    bool pass_homog = false;
    long samples = 0;
    std::uint64_t seed = 0;
};

namespace detail {

inline void require_normalized(const Polynomial& P, const SpaceSpec& S) {
    const auto est = normalization_estimate(P, S);
    if (!(est.value >= 1.0 - 1e-6 && est.value <= 1.0 + 1e-6))
        throw std::invalid_argument(
            "remez: polynomial is not normalized to norm one (estimated " +
            std::to_string(est.value) + "); normalization is the caller's job");
}

inline void check_remez_inputs(const Polynomial& P, const SpaceSpec& S) {
    S.validate();
    if (S.field != Field::real || P.field() != Field::real)
        throw std::invalid_argument("remez: real polynomials on real spaces only");
    if (P.dim() != S.d) throw std::invalid_argument("remez: dimension mismatch");
    if (P.is_zero() || P.degree() < 1)
        throw std::invalid_argument("remez: polynomial must have degree >= 1");
}

}  // namespace detail

// Monte-Carlo estimate of the sublevel measure mu({|P| <= t}) for a norm-one
// polynomial, with the binomial standard error.
inline SublevelEstimate estimate_sublevel_measure(const Polynomial& P, const SpaceSpec& S,
                                                  double t, long samples, std::uint64_t seed) {
    detail::check_remez_inputs(P, S);
    if (!(t > 0.0 && t < 1.0))
        throw std::invalid_argument("estimate_sublevel_measure: t must be in (0,1)");
    if (samples < 1) throw std::invalid_argument("estimate_sublevel_measure: samples >= 1");
    detail::require_normalized(P, S);

    std::mt19937_64 rng(seed);
    long hits = 0;
    for (long i = 0; i < samples; ++i) {
        const auto x = detail::sample_ball_one(S, rng);
        if (std::abs(evaluate_real(P, x)) <= t) ++hits;
    }
    SublevelEstimate out;
    out.t = t;
    out.samples = samples;
    out.seed = seed;
    out.measure = static_cast<double>(hits) / static_cast<double>(samples);
    out.stderr_ = std::sqrt(out.measure * (1.0 - out.measure) / static_cast<double>(samples));
    out.bound = sublevel_measure_bound(P.degree(), S.d, t);
    out.pass = out.measure <= out.bound + 3.0 * out.stderr_;
    return out;
}

// Estimates int_0^inf mu({|P| <= e^-t}) dt via the equivalent single-loop
// estimator E[ min(-ln|P(z)|, t_max) ] (Fubini), truncated at t_max. The
// clamp at zero covers sample values slightly above one, which the
// lower-bound normalization permits.
inline Lemma8Report check_lemma8_integral(const Polynomial& P, const SpaceSpec& S,
                                          long samples, std::uint64_t seed,
                                          double t_max = 40.0) {
    detail::check_remez_inputs(P, S);
    if (samples < 2) throw std::invalid_argument("check_lemma8_integral: samples >= 2");
    if (!(t_max > 0.0)) throw std::invalid_argument("check_lemma8_integral: t_max > 0");
    detail::require_normalized(P, S);

    std::mt19937_64 rng(seed);
    double sum = 0.0, sumsq = 0.0;
    for (long i = 0; i < samples; ++i) {
        const auto x = detail::sample_ball_one(S, rng);
        const double a = std::abs(evaluate_real(P, x));
        const double v = (a == 0.0) ? t_max : std::clamp(-std::log(a), 0.0, t_max);
        sum += v;
        sumsq += v * v;
    }
    Lemma8Report rep;
    rep.samples = samples;
    rep.seed = seed;
    rep.t_max = t_max;
    rep.k = P.degree();
    rep.d = S.d;
    rep.integral = sum / static_cast<double>(samples);
    const double var =
        (sumsq - sum * sum / static_cast<double>(samples)) / static_cast<double>(samples - 1);
    rep.stderr_ = std::sqrt(std::max(var, 0.0) / static_cast<double>(samples));
    rep.bound = rep.k * std::log(4.0 * S.d) - std::numbers::ln2_v<double> + rep.k;
    rep.pass = rep.integral <= rep.bound + 3.0 * rep.stderr_;
    rep.homog_applicable = P.is_homogeneous() && S.p == 2.0;
    rep.bound_homog = rep.k * (std::log(4.0) + harmonic(S.d));
    rep.pass_homog = !rep.homog_applicable || rep.integral <= rep.bound_homog + 3.0 * rep.stderr_;
    return rep;
}

}  // namespace plankforge
