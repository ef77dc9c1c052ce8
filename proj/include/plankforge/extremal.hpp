#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "plankforge/polynomial.hpp"
#include "plankforge/space.hpp"
#include "plankforge/sup_norm.hpp"

namespace plankforge {

// The l_1^d monomial family whose product-norm ratio grows linearly in d:
// P_i = z_i^{k(n-d+1)} for i < d and P_i = z_d^k for i >= d (1-based i).
struct ExtremalFamily {
    int d = 1;
    int n = 2;
    int k = 1;
    std::vector<Polynomial> polys;
    double expected_ratio = 1.0;  // per unit degree
};

inline ExtremalFamily build_family(int d, int n, int k, Field field = Field::real) {
    if (d < 1 || k < 1) throw std::invalid_argument("build_family: d and k must be >= 1");
    if (n <= d) throw std::invalid_argument("build_family: needs n > d");
    ExtremalFamily fam;
    fam.d = d;
    fam.n = n;
    fam.k = k;
    fam.expected_ratio = static_cast<double>(d);
    const int high = k * (n - d + 1);
    for (int i = 1; i <= n; ++i) {
        MultiIndex e(static_cast<std::size_t>(d), 0u);
        if (i < d) {
            e[i - 1] = static_cast<std::uint32_t>(high);
        } else {
            e[d - 1] = static_cast<std::uint32_t>(k);
        }
        fam.polys.push_back(Polynomial::monomial(d, field, e, Coeff{1.0, 0.0}));
    }
    return fam;
}

struct EqualityReport {
    double log_product_norm = 0.0;   // ln ||P_1 ... P_n|| on l_1^d (exact)
    double log_claimed = 0.0;        // -sum deg(P_i) * ln d
    double log_factor_norms = 0.0;   // ln prod ||P_i|| (exactly zero)
    long total_degree = 0;
    double estimate_cross_check = 0.0;  // estimate_sup_norm of the product
    bool pass = false;
};

// Both sides of the equality ||prod P_i|| = (1/d^{sum deg}) prod ||P_i||,
// evaluated exactly through the monomial norm in the log domain, plus a
// numerical cross-check of the product norm.
inline EqualityReport verify_equality(const ExtremalFamily& fam) {
    const SpaceSpec S{fam.polys.front().field(), fam.d, 1.0};
    EqualityReport rep;
    Polynomial prod = fam.polys.front();
    for (std::size_t i = 1; i < fam.polys.size(); ++i) prod = multiply(prod, fam.polys[i]);
    const MultiIndex& alpha = prod.terms().begin()->first;
    double logmono = 0.0;
    const double K = static_cast<double>(total_degree(alpha));
    for (std::uint32_t a : alpha)
        if (a > 0) logmono += static_cast<double>(a) * std::log(static_cast<double>(a));
    logmono -= K * std::log(K);
    rep.log_product_norm = logmono / S.p;

    long total = 0;
    double factor_logs = 0.0;
    for (const auto& p : fam.polys) {
        total += p.degree();
        factor_logs += std::log(monomial_norm(p.terms().begin()->first, S));
    }
    rep.total_degree = total;
    rep.log_factor_norms = factor_logs;  // single-coordinate monomials: all ones
    rep.log_claimed = factor_logs - static_cast<double>(total) * std::log(fam.d);

    const double scale = std::max(1.0, std::abs(rep.log_claimed));
    const bool exact_ok = std::abs(rep.log_product_norm - rep.log_claimed) <= 1e-12 * scale;

    AscentOptions opts;
    opts.seed = kNormalizationSeed;
    const auto est = estimate_sup_norm(prod, S, opts);
    rep.estimate_cross_check = est.value;
    const bool est_ok =
        std::abs(std::log(est.value) - rep.log_product_norm) <= 1e-6 * scale + 1e-6;
    rep.pass = exact_ok && est_ok;
    return rep;
}

struct SharpnessReport {
    double log_bound = 0.0;      // ln n^n
    double log_norm = 0.0;       // ln ||z_1...z_n|| on l_1^n (exact)
    double log_factors = 0.0;    // ln prod ||z_i|| = 0
    bool pass = false;           // bound * norm = factors, i.e. the logs cancel
};

// Coordinate functionals on l_1^n attain the degree-(1,...,1) constant n^n.
inline SharpnessReport bst_sharpness_check(int n) {
    if (n < 1) throw std::invalid_argument("bst_sharpness_check: n must be >= 1");
    SharpnessReport rep;
    const double nn = static_cast<double>(n);
    rep.log_bound = nn * std::log(nn);
    const SpaceSpec S{Field::real, n, 1.0};
    rep.log_norm = std::log(monomial_norm(MultiIndex(static_cast<std::size_t>(n), 1u), S));
    rep.log_factors = 0.0;
    rep.pass = std::abs(rep.log_bound + rep.log_norm - rep.log_factors) <=
               1e-12 * std::max(1.0, std::abs(rep.log_bound));
    return rep;
}

}  // namespace plankforge
