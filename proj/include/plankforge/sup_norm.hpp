#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

#include "plankforge/polynomial.hpp"
#include "plankforge/space.hpp"

namespace plankforge {

struct AscentOptions {
    int starts = 0;  // 0 selects the default 32 * d
    int max_iters = 500;
    double tol = 1e-12;
    std::uint64_t seed = 0;
    int threads = 1;
};

// Certified-from-below sup-norm value with its maximizing point.
struct NormEstimate {
    double value = 0.0;
    std::vector<double> argmax;  // flat real coordinates (see SpaceSpec)
    int starts = 0;
    double converged_fraction = 0.0;
    std::uint64_t seed = 0;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

template <class F>
inline void parallel_for(int n, int threads, F&& body) {
    threads = std::max(1, std::min(threads, n));
    if (threads == 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&]() {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

// Flat term table for hot-loop evaluation.
struct CompiledPoly {
    int dim = 0;
    int nterms = 0;
    std::vector<std::uint32_t> exps;    // nterms * dim
    std::vector<Coeff> coeffs;
    std::vector<std::uint32_t> max_exp; // per coordinate

    CompiledPoly() = default;
    explicit CompiledPoly(const Polynomial& p)
        : dim(p.dim()), nterms(static_cast<int>(p.term_count())),
          max_exp(static_cast<std::size_t>(p.dim()), 0u) {
        exps.reserve(static_cast<std::size_t>(nterms * dim));
        coeffs.reserve(static_cast<std::size_t>(nterms));
        for (const auto& [e, c] : p.terms()) {
            for (int i = 0; i < dim; ++i) {
                exps.push_back(e[i]);
                max_exp[i] = std::max(max_exp[i], e[i]);
            }
            coeffs.push_back(c);
        }
    }
};

struct EvalScratch {
    std::vector<Coeff> pow;            // concatenated per-coordinate power tables
    std::vector<std::size_t> off;      // table offsets
    std::vector<Coeff> pre, suf;       // prefix/suffix products within a term
    std::vector<Coeff> z;
    std::vector<Coeff> cgrad;
};

// Value and complex gradient of one compiled polynomial at z.
inline Coeff eval_with_grad(const CompiledPoly& P, std::span<const Coeff> z,
                            EvalScratch& ws, bool want_grad) {
    const int d = P.dim;
    ws.off.assign(static_cast<std::size_t>(d), 0);
    std::size_t tot = 0;
    for (int i = 0; i < d; ++i) {
        ws.off[i] = tot;
        tot += P.max_exp[i] + 1;
    }
    ws.pow.resize(tot);
    for (int i = 0; i < d; ++i) {
        Coeff* tab = ws.pow.data() + ws.off[i];
        tab[0] = Coeff{1.0, 0.0};
        for (std::uint32_t k = 1; k <= P.max_exp[i]; ++k) tab[k] = tab[k - 1] * z[i];
    }
    if (want_grad) {
        ws.cgrad.assign(static_cast<std::size_t>(d), Coeff{0.0, 0.0});
        ws.pre.resize(static_cast<std::size_t>(d) + 1);
        ws.suf.resize(static_cast<std::size_t>(d) + 1);
    }
    Coeff acc{0.0, 0.0};
    const std::uint32_t* ep = P.exps.data();
    for (int t = 0; t < P.nterms; ++t, ep += d) {
        const Coeff c = P.coeffs[t];
        if (!want_grad) {
            Coeff v = c;
            for (int i = 0; i < d; ++i) v *= ws.pow[ws.off[i] + ep[i]];
            acc += v;
            continue;
        }
        ws.pre[0] = Coeff{1.0, 0.0};
        for (int i = 0; i < d; ++i)
            ws.pre[i + 1] = ws.pre[i] * ws.pow[ws.off[i] + ep[i]];
        ws.suf[d] = Coeff{1.0, 0.0};
        for (int i = d - 1; i >= 0; --i)
            ws.suf[i] = ws.suf[i + 1] * ws.pow[ws.off[i] + ep[i]];
        acc += c * ws.pre[d];
        for (int j = 0; j < d; ++j) {
            const std::uint32_t e = ep[j];
            if (e == 0) continue;
            ws.cgrad[j] += c * static_cast<double>(e) * ws.pow[ws.off[j] + (e - 1)] *
                           ws.pre[j] * ws.suf[j + 1];
        }
    }
    return acc;
}

// Subgradient of x -> ||x||_p in flat real coordinates, up to positive scale.
// For p = inf the active coordinate (lowest index among maxima) is used.
inline void norm_subgradient(const SpaceSpec& S, std::span<const double> x,
                             std::vector<double>& out) {
    const int n = S.real_dim();
    out.assign(static_cast<std::size_t>(n), 0.0);
    const auto m = coordinate_moduli(S, x);
    if (S.is_inf()) {
        int best = 0;
        for (int i = 1; i < S.d; ++i)
            if (m[i] > m[best]) best = i;
        if (S.field == Field::real) {
            out[best] = (x[best] >= 0.0) ? 1.0 : -1.0;
        } else if (m[best] > 0.0) {
            out[2 * best] = x[2 * best] / m[best];
            out[2 * best + 1] = x[2 * best + 1] / m[best];
        } else {
            out[2 * best] = 1.0;
        }
        return;
    }
    for (int i = 0; i < S.d; ++i) {
        if (m[i] == 0.0) continue;
        const double w = std::pow(m[i], S.p - 1.0);
        if (S.field == Field::real) {
            out[i] = (x[i] >= 0.0) ? w : -w;
        } else {
            out[2 * i] = w * x[2 * i] / m[i];
            out[2 * i + 1] = w * x[2 * i + 1] / m[i];
        }
    }
}

// Objective F(x) = sum_i w_i * ln|P_i(x)| over the unit ball of S.
struct LogProductObjective {
    SpaceSpec space;
    std::vector<CompiledPoly> polys;
    std::vector<double> weights;

    double value(std::span<const double> x, EvalScratch& ws) const {
        prepare_point(x, ws);
        double f = 0.0;
        for (std::size_t i = 0; i < polys.size(); ++i) {
            const Coeff v = eval_with_grad(polys[i], ws.z, ws, false);
            const double a = std::abs(v);
            if (a == 0.0) return -std::numeric_limits<double>::infinity();
            f += weights[i] * std::log(a);
        }
        return f;
    }

    double value_and_grad(std::span<const double> x, std::vector<double>& grad,
                          EvalScratch& ws) const {
        prepare_point(x, ws);
        const int n = space.real_dim();
        grad.assign(static_cast<std::size_t>(n), 0.0);
        double f = 0.0;
        for (std::size_t i = 0; i < polys.size(); ++i) {
            const Coeff v = eval_with_grad(polys[i], ws.z, ws, true);
            const double a = std::abs(v);
            if (a == 0.0) return -std::numeric_limits<double>::infinity();
            f += weights[i] * std::log(a);
            const double w = weights[i];
            for (int j = 0; j < space.d; ++j) {
                const Coeff r = ws.cgrad[j] / v;  // d/dz_j log P
                if (space.field == Field::real) {
                    grad[j] += w * r.real();
                } else {
                    grad[2 * j] += w * r.real();
                    grad[2 * j + 1] -= w * r.imag();
                }
            }
        }
        return f;
    }

private:
    void prepare_point(std::span<const double> x, EvalScratch& ws) const {
        ws.z.resize(static_cast<std::size_t>(space.d));
        if (space.field == Field::real) {
            for (int i = 0; i < space.d; ++i) ws.z[i] = Coeff{x[i], 0.0};
        } else {
            for (int i = 0; i < space.d; ++i) ws.z[i] = Coeff{x[2 * i], x[2 * i + 1]};
        }
    }
};

struct AscentResult {
    double objective = -std::numeric_limits<double>::infinity();
    std::vector<double> x;
    bool converged = false;
    int iters = 0;
};

// One projected-ascent run. sphere_only keeps iterates on the unit sphere
// (homogeneous or complex objectives); otherwise the ball interior is kept
// and the radial retraction only fires when an iterate leaves the ball.
inline AscentResult ascend_one(const LogProductObjective& obj, bool sphere_only,
                               std::uint64_t start_seed, const AscentOptions& opts,
                               EvalScratch& ws) {
    const SpaceSpec& S = obj.space;
    const int n = S.real_dim();
    std::mt19937_64 rng(start_seed);
    std::vector<double> x = sample_ball_one(S, rng);
    {
        double nrm = vector_norm(S, x);
        if (nrm == 0.0) {
            x.assign(static_cast<std::size_t>(n), 0.0);
            x[0] = 1.0;
        } else {
            for (double& v : x) v /= nrm;
        }
    }

    auto retract = [&](std::vector<double>& v) {
        const double nrm = vector_norm(S, v);
        if (nrm == 0.0) return;
        if (sphere_only || nrm > 1.0)
            for (double& c : v) c /= nrm;
    };

    double F = obj.value(x, ws);
    std::uniform_real_distribution<double> u01(-1.0, 1.0);
    for (int tries = 0; !std::isfinite(F) && tries < 32; ++tries) {
        for (double& v : x) v += 1e-3 * (tries + 1) * u01(rng);
        retract(x);
        F = obj.value(x, ws);
    }
    AscentResult res;
    res.x = x;
    res.objective = F;
    if (!std::isfinite(F)) return res;  // objective singular near every probe

    // backtracking halves from 1.0; an accepted step doubles the next probe
    std::vector<double> grad, nsub, xt(static_cast<std::size_t>(n));
    double step = 0.5;
    for (int it = 0; it < opts.max_iters; ++it) {
        res.iters = it + 1;
        const double F0 = obj.value_and_grad(x, grad, ws);
        if (sphere_only) {
            norm_subgradient(S, x, nsub);
            double gn = 0.0, nn = 0.0;
            for (int i = 0; i < n; ++i) {
                gn += grad[i] * nsub[i];
                nn += nsub[i] * nsub[i];
            }
            if (nn > 0.0) {
                const double a = gn / nn;
                for (int i = 0; i < n; ++i) grad[i] -= a * nsub[i];
            }
        }
        double gnorm = 0.0;
        for (int i = 0; i < n; ++i) gnorm += grad[i] * grad[i];
        gnorm = std::sqrt(gnorm);
        if (gnorm == 0.0 || !std::isfinite(gnorm)) {
            res.converged = true;
            break;
        }
        step = std::min(step * 2.0, 1.0);
        double Ft = -std::numeric_limits<double>::infinity();
        bool accepted = false;
        while (step > 1e-18) {
            for (int i = 0; i < n; ++i) xt[i] = x[i] + (step / gnorm) * grad[i];
            retract(xt);
            Ft = obj.value(xt, ws);
            if (Ft > F0) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            res.converged = true;
            break;
        }
        x = xt;
        const double delta = Ft - F0;
        F = Ft;
        if (delta <= opts.tol * (1.0 + std::abs(Ft))) {
            res.converged = true;
            break;
        }
    }
    res.x = x;
    res.objective = F;
    return res;
}

// Multi-start driver. Starts are independent work units with per-start seeds
// seed + index; the merge picks the strictly largest objective scanning in
// index order, so the result does not depend on scheduling.
inline AscentResult maximize_on_ball(const LogProductObjective& obj, bool sphere_only,
                                     int starts, const AscentOptions& opts,
                                     double* converged_fraction = nullptr) {
    std::vector<AscentResult> results(static_cast<std::size_t>(starts));
    parallel_for(starts, opts.threads, [&](int i) {
        EvalScratch ws;
        results[i] = ascend_one(obj, sphere_only, opts.seed + static_cast<std::uint64_t>(i),
                                opts, ws);
    });
    int best = 0, conv = 0;
    for (int i = 0; i < starts; ++i) {
        if (results[i].converged) ++conv;
        if (results[i].objective > results[best].objective) best = i;
    }
    if (converged_fraction)
        *converged_fraction = static_cast<double>(conv) / static_cast<double>(starts);
    return results[best];
}

}  // namespace detail

// Fixed seed of the normalization protocol: normalize_to_unit_norm divides by
// the estimate taken with this seed, and consumers that require norm-one
// inputs re-run the same estimate, so a polynomial normalized through the
// helper always passes their gates.
inline constexpr std::uint64_t kNormalizationSeed = 0x5eedULL;

// Multi-start projected gradient ascent on ln|P| over the unit ball.
// The returned value is always a valid lower bound for the true sup norm and
// is recomputable as |P(argmax)|. For homogeneous or complex polynomials the
// search is confined to the unit sphere (where the maximum is attained); for
// real non-homogeneous polynomials interior iterates are kept.
inline NormEstimate estimate_sup_norm(const Polynomial& P, const SpaceSpec& S,
                                      AscentOptions opts = {}) {
    S.validate();
    if (P.dim() != S.d) throw std::invalid_argument("estimate_sup_norm: dimension mismatch");
    if (P.field() == Field::complex && S.field == Field::real)
        throw std::invalid_argument("estimate_sup_norm: complex polynomial on a real space");
    const int starts = opts.starts > 0 ? opts.starts : 32 * S.d;

    NormEstimate est;
    est.starts = starts;
    est.seed = opts.seed;
    if (P.is_zero()) {
        est.argmax.assign(static_cast<std::size_t>(S.real_dim()), 0.0);
        est.converged_fraction = 1.0;
        return est;
    }

    // The search runs on P scaled to unit max coefficient modulus, which makes
    // the trajectory invariant under coefficient scaling; the value is then
    // recomputed from the original polynomial at the argmax.
    Polynomial Q = P * Coeff{1.0 / P.max_coeff_modulus(), 0.0};
    // A real-tagged polynomial on a complex space is searched as a complex one.
    detail::LogProductObjective obj;
    obj.space = S;
    obj.polys.emplace_back(Q);
    obj.weights.push_back(1.0);
    const bool sphere_only = (S.field == Field::complex) || Q.is_homogeneous();

    double conv = 0.0;
    auto best = detail::maximize_on_ball(obj, sphere_only, starts, opts, &conv);
    est.argmax = best.x;
    est.converged_fraction = conv;
    est.value = std::abs(evaluate_at_coords(P, S, est.argmax));
    return est;
}

inline NormEstimate normalization_estimate(const Polynomial& P, const SpaceSpec& S) {
    AscentOptions opts;
    opts.seed = kNormalizationSeed;
    return estimate_sup_norm(P, S, opts);
}

// Divides by the estimated sup norm. The estimate is a lower bound of the
// true norm, so the result can be slightly larger than norm one; downstream
// inequality checks only get harder from that, never easier.
inline Polynomial normalize_to_unit_norm(const Polynomial& P, const SpaceSpec& S) {
    const auto est = normalization_estimate(P, S);
    if (est.value <= 0.0)
        throw std::invalid_argument("normalize_to_unit_norm: zero polynomial");
    return P * Coeff{1.0 / est.value, 0.0};
}

}  // namespace plankforge
