#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "plankforge/polynomial.hpp"
#include "plankforge/space.hpp"

namespace plankforge {

namespace detail {

// Horner evaluation of p and p' (ascending coefficients).
inline std::pair<Coeff, Coeff> horner2(const std::vector<Coeff>& c, Coeff w) {
    Coeff v{0.0, 0.0}, dv{0.0, 0.0};
    for (std::size_t i = c.size(); i-- > 0;) {
        dv = dv * w + v;
        v = v * w + c[i];
    }
    return {v, dv};
}

// All roots of a univariate complex polynomial, Aberth-Ehrlich iteration with
// Newton corrections from Bini-style starting points on a circle. Multiple
// roots converge linearly; callers judge quality through the reconstruction
// residual, not through the backend.
inline std::vector<Coeff> poly_roots(std::vector<Coeff> c) {
    while (!c.empty() && c.back() == Coeff{0.0, 0.0}) c.pop_back();
    if (c.size() < 2) return {};
    std::vector<Coeff> roots;
    std::size_t low = 0;
    while (low < c.size() && c[low] == Coeff{0.0, 0.0}) ++low;
    for (std::size_t i = 0; i < low; ++i) roots.push_back(Coeff{0.0, 0.0});
    c.erase(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(low));
    const std::size_t m = c.size() - 1;
    if (m == 0) return roots;
    if (m == 1) {
        roots.push_back(-c[0] / c[1]);
        return roots;
    }

    double maxratio = 0.0;
    for (std::size_t i = 0; i < m; ++i) maxratio = std::max(maxratio, std::abs(c[i] / c[m]));
    const double radius = std::max(0.5, std::pow(std::abs(c[0] / c[m]), 1.0 / static_cast<double>(m)));
    std::vector<Coeff> w(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double th = 2.0 * std::numbers::pi_v<double> * static_cast<double>(j) /
                              static_cast<double>(m) +
                          0.4;
        w[j] = radius * Coeff{std::cos(th), std::sin(th)};
    }
    for (int iter = 0; iter < 400; ++iter) {
        double worst = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            const auto [v, dv] = horner2(c, w[j]);
            if (v == Coeff{0.0, 0.0}) continue;
            Coeff newton = (dv == Coeff{0.0, 0.0}) ? Coeff{1e-8, 1e-8} : v / dv;
            Coeff sum{0.0, 0.0};
            for (std::size_t l = 0; l < m; ++l) {
                if (l == j) continue;
                const Coeff diff = w[j] - w[l];
                if (diff == Coeff{0.0, 0.0}) continue;
                sum += Coeff{1.0, 0.0} / diff;
            }
            const Coeff denom = Coeff{1.0, 0.0} - newton * sum;
            const Coeff corr = (denom == Coeff{0.0, 0.0}) ? newton : newton / denom;
            w[j] -= corr;
            worst = std::max(worst, std::abs(corr) / (1.0 + std::abs(w[j])));
        }
        if (worst < 1e-15) break;
    }
    roots.insert(roots.end(), w.begin(), w.end());
    return roots;
}

}  // namespace detail

struct LinearFactor {
    Coeff a{0.0, 0.0};  // functional a*z1 + b*z2
    Coeff b{0.0, 0.0};
    bool dual_norm_one = true;
};

struct LinearFactorization {
    double scale = 1.0;  // L in P = L * phi_1 ... phi_k
    std::vector<LinearFactor> factors;
    double residual = 0.0;  // max |P - L*prod| on an 8x8 torus grid at radius 1/2
};

// Splits a nonzero homogeneous binary form over C^2 into linear factors,
// each normalized to dual norm one for l_p^2; the positive scale L absorbs
// the rest (the remaining phase lands on the first factor). Dehomogenizes in
// w = z1/z2 and reads the factors off the roots; a vanishing z1^k coefficient
// contributes z2 factors directly.
inline LinearFactorization factor_binary_form(const Polynomial& P, double space_p = 2.0) {
    if (P.field() != Field::complex)
        throw std::invalid_argument("factor_binary_form: input must be complex");
    if (P.dim() != 2) throw std::invalid_argument("factor_binary_form: dim must be 2");
    if (P.is_zero()) throw std::invalid_argument("factor_binary_form: zero polynomial");
    if (!P.is_homogeneous())
        throw std::invalid_argument("factor_binary_form: input must be homogeneous");
    const int k = P.degree();
    const double pdual = dual_exponent(space_p);

    std::vector<Coeff> c(static_cast<std::size_t>(k) + 1, Coeff{0.0, 0.0});
    for (const auto& [e, coef] : P.terms()) c[e[0]] = coef;  // coeff of z1^j z2^{k-j}
    std::size_t m = static_cast<std::size_t>(k);
    while (m > 0 && c[m] == Coeff{0.0, 0.0}) --m;
    const Coeff lead = c[m];
    c.resize(m + 1);

    LinearFactorization out;
    auto dual_norm = [&](Coeff a, Coeff b) {
        const double mods[2] = {std::abs(a), std::abs(b)};
        return lp_norm(mods, pdual);
    };

    double log_scale = std::log(std::abs(lead));
    // z2 factors from the degree drop at dehomogenization
    for (int j = 0; j < k - static_cast<int>(m); ++j) {
        const double nu = dual_norm(Coeff{0, 0}, Coeff{1, 0});
        out.factors.push_back({Coeff{0, 0}, Coeff{1.0 / nu, 0}, true});
        log_scale += std::log(nu);
    }
    for (const Coeff w : detail::poly_roots(c)) {
        const Coeff a{1.0, 0.0};
        const Coeff b = -w;
        const double nu = dual_norm(a, b);
        out.factors.push_back({a / nu, b / nu, true});
        log_scale += std::log(nu);
    }
    out.scale = std::exp(log_scale);
    // fold the leftover phase into the first factor
    const Coeff phase = lead / std::abs(lead);
    if (!out.factors.empty()) {
        out.factors.front().a *= phase;
        out.factors.front().b *= phase;
    }

    double res = 0.0;
    for (int ia = 0; ia < 8; ++ia) {
        for (int ib = 0; ib < 8; ++ib) {
            const double ta = 2.0 * std::numbers::pi_v<double> * ia / 8.0;
            const double tb = 2.0 * std::numbers::pi_v<double> * ib / 8.0;
            const std::vector<Coeff> z = {0.5 * Coeff{std::cos(ta), std::sin(ta)},
                                          0.5 * Coeff{std::cos(tb), std::sin(tb)}};
            Coeff rec{out.scale, 0.0};
            for (const auto& f : out.factors) rec *= f.a * z[0] + f.b * z[1];
            res = std::max(res, std::abs(evaluate(P, z) - rec));
        }
    }
    out.residual = res;
    return out;
}

}  // namespace plankforge
