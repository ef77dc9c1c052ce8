#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "plankforge/polynomial.hpp"

namespace plankforge {

// Finite-dimensional l_p space model. Points are carried as flat real
// coordinate vectors: length d for real spaces, length 2d laid out as
// (x_1, y_1, ..., x_d, y_d) for complex ones.
struct SpaceSpec {
    Field field = Field::real;
    int d = 1;
    double p = 2.0;  // in [1, inf]; infinity() encodes the max norm

    int real_dim() const { return field == Field::real ? d : 2 * d; }
    bool is_inf() const { return std::isinf(p); }

    void validate() const {
        if (d < 1) throw std::invalid_argument("SpaceSpec: d must be >= 1");
        if (!(p >= 1.0)) throw std::invalid_argument("SpaceSpec: p must be in [1, inf]");
    }
};

inline double dual_exponent(double p) {
    if (std::isinf(p)) return 1.0;
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    return p / (p - 1.0);
}

// Coordinate moduli of a point in flat layout.
inline std::vector<double> coordinate_moduli(const SpaceSpec& S, std::span<const double> x) {
    std::vector<double> m(static_cast<std::size_t>(S.d));
    if (S.field == Field::real) {
        for (int i = 0; i < S.d; ++i) m[i] = std::abs(x[i]);
    } else {
        for (int i = 0; i < S.d; ++i) m[i] = std::hypot(x[2 * i], x[2 * i + 1]);
    }
    return m;
}

inline double lp_norm(std::span<const double> moduli, double p) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : moduli) m = std::max(m, v);
        return m;
    }
    double mx = 0.0;
    for (double v : moduli) mx = std::max(mx, v);
    if (mx == 0.0) return 0.0;
    double s = 0.0;
    for (double v : moduli) s += std::pow(v / mx, p);
    return mx * std::pow(s, 1.0 / p);
}

inline double vector_norm(const SpaceSpec& S, std::span<const double> x) {
    if (static_cast<int>(x.size()) != S.real_dim())
        throw std::invalid_argument("vector_norm: point length mismatch");
    const auto m = coordinate_moduli(S, x);
    return lp_norm(m, S.p);
}

// Radial retraction x -> x / ||x||_p.
inline void renormalize_to_sphere(const SpaceSpec& S, std::vector<double>& x) {
    const double nrm = vector_norm(S, x);
    if (nrm == 0.0) throw std::invalid_argument("renormalize_to_sphere: zero vector");
    for (double& v : x) v /= nrm;
}

inline std::vector<Coeff> to_complex_point(const SpaceSpec& S, std::span<const double> x) {
    std::vector<Coeff> z(static_cast<std::size_t>(S.d));
    if (S.field == Field::real) {
        for (int i = 0; i < S.d; ++i) z[i] = Coeff{x[i], 0.0};
    } else {
        for (int i = 0; i < S.d; ++i) z[i] = Coeff{x[2 * i], x[2 * i + 1]};
    }
    return z;
}

inline Coeff evaluate_at_coords(const Polynomial& P, const SpaceSpec& S,
                                std::span<const double> x) {
    return evaluate(P, to_complex_point(S, x));
}

namespace detail {

// One uniform sample from the unit ball via the p-generalized-Gaussian
// construction: independent coordinates with density ~ exp(-|t|^p), an
// independent Exp(1) radial term, and rescaling. The complex ball is sampled
// through its moduli: with u_i = r_i^2 the moduli region {sum r_i^p <= 1}
// becomes the positive part of an l_{p/2} ball with uniform density, which the
// same construction covers; phases are independent and uniform.
inline std::vector<double> sample_ball_one(const SpaceSpec& S, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::vector<double> x(static_cast<std::size_t>(S.real_dim()));
    const double two_pi = 2.0 * std::numbers::pi_v<double>;
    if (S.field == Field::real) {
        if (S.is_inf()) {
            for (int i = 0; i < S.d; ++i) x[i] = 2.0 * u01(rng) - 1.0;
            return x;
        }
        std::gamma_distribution<double> gamma(1.0 / S.p, 1.0);
        std::exponential_distribution<double> expo(1.0);
        double s = 0.0;
        for (int i = 0; i < S.d; ++i) {
            const double g = std::pow(gamma(rng), 1.0 / S.p);
            x[i] = (u01(rng) < 0.5) ? -g : g;
            s += std::pow(g, S.p);
        }
        s += expo(rng);
        const double r = std::pow(s, 1.0 / S.p);
        for (int i = 0; i < S.d; ++i) x[i] /= r;
        return x;
    }
    if (S.is_inf()) {
        // independent unit disks
        for (int i = 0; i < S.d; ++i) {
            const double r = std::sqrt(u01(rng));
            const double th = two_pi * u01(rng);
            x[2 * i] = r * std::cos(th);
            x[2 * i + 1] = r * std::sin(th);
        }
        return x;
    }
    const double q = S.p / 2.0;
    std::gamma_distribution<double> gamma(1.0 / q, 1.0);
    std::exponential_distribution<double> expo(1.0);
    std::vector<double> g(static_cast<std::size_t>(S.d));
    double s = 0.0;
    for (int i = 0; i < S.d; ++i) {
        g[i] = std::pow(gamma(rng), 1.0 / q);
        s += std::pow(g[i], q);
    }
    s += expo(rng);
    const double scale = std::pow(s, 1.0 / q);
    for (int i = 0; i < S.d; ++i) {
        const double r = std::sqrt(g[i] / scale);
        const double th = two_pi * u01(rng);
        x[2 * i] = r * std::cos(th);
        x[2 * i + 1] = r * std::sin(th);
    }
    return x;
}

}  // namespace detail

// n i.i.d. points uniform w.r.t. Lebesgue measure on the unit ball;
// deterministic given the seed.
inline std::vector<std::vector<double>> sample_ball(const SpaceSpec& S, int n,
                                                    std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample_ball: n must be >= 1");
    S.validate();
    std::mt19937_64 rng(seed);
    std::vector<std::vector<double>> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out.push_back(detail::sample_ball_one(S, rng));
    return out;
}

// Exact sup of |z^alpha| over the unit ball of l_p^d: (prod a_i^{a_i} / K^K)^{1/p}
// with K = |alpha| and 0^0 = 1 (Lagrange multipliers). Field-independent.
inline double monomial_norm(const MultiIndex& alpha, const SpaceSpec& S) {
    const std::uint64_t K = total_degree(alpha);
    if (K == 0) return 1.0;
    if (S.is_inf()) return 1.0;
    double logv = 0.0;
    for (std::uint32_t a : alpha)
        if (a > 0) logv += static_cast<double>(a) * std::log(static_cast<double>(a));
    logv -= static_cast<double>(K) * std::log(static_cast<double>(K));
    return std::exp(logv / S.p);
}

// Space spec grammar: "lp:p=<float|inf>,d=<int>,field=<real|complex>".
inline SpaceSpec parse_space(const std::string& text) {
    const std::string prefix = "lp:";
    if (text.rfind(prefix, 0) != 0)
        throw std::invalid_argument("parse_space: expected 'lp:' prefix in '" + text + "'");
    SpaceSpec S;
    bool have_p = false, have_d = false, have_field = false;
    std::stringstream ss(text.substr(prefix.size()));
    std::string kv;
    while (std::getline(ss, kv, ',')) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("parse_space: expected key=value, got '" + kv + "'");
        const std::string key = kv.substr(0, eq);
        const std::string val = kv.substr(eq + 1);
        if (key == "p") {
            S.p = (val == "inf") ? std::numeric_limits<double>::infinity() : std::stod(val);
            have_p = true;
        } else if (key == "d") {
            S.d = std::stoi(val);
            have_d = true;
        } else if (key == "field") {
            if (val == "real") S.field = Field::real;
            else if (val == "complex") S.field = Field::complex;
            else throw std::invalid_argument("parse_space: unknown field '" + val + "'");
            have_field = true;
        } else {
            throw std::invalid_argument("parse_space: unknown key '" + key + "'");
        }
    }
    if (!have_p || !have_d || !have_field)
        throw std::invalid_argument("parse_space: p, d and field are all required");
    S.validate();
    return S;
}

inline std::string space_to_string(const SpaceSpec& S) {
    std::ostringstream os;
    os << "lp:p=";
    if (S.is_inf()) os << "inf";
    else os << S.p;
    os << ",d=" << S.d << ",field=" << (S.field == Field::real ? "real" : "complex");
    return os.str();
}

}  // namespace plankforge
