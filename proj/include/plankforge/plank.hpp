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

// Numeric infeasibility: a feasibility gate or allocation hypothesis failed.
class infeasible_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class PlankRegime { bst, lp, k_custom, finite_dim };

inline std::string regime_name(PlankRegime r) {
    switch (r) {
        case PlankRegime::bst: return "bst";
        case PlankRegime::lp: return "lp";
        case PlankRegime::k_custom: return "k-custom";
        case PlankRegime::finite_dim: return "finitedim";
    }
    return "?";
}

inline PlankRegime regime_from_name(const std::string& s) {
    if (s == "bst") return PlankRegime::bst;
    if (s == "lp") return PlankRegime::lp;
    if (s == "k-custom") return PlankRegime::k_custom;
    if (s == "finitedim") return PlankRegime::finite_dim;
    throw std::invalid_argument("unknown plank regime '" + s + "'");
}

enum class AllocationMethod { closed_form, numeric_fallback, symmetric };

inline std::string allocation_method_name(AllocationMethod m) {
    switch (m) {
        case AllocationMethod::closed_form: return "closed-form";
        case AllocationMethod::numeric_fallback: return "numeric-fallback";
        case AllocationMethod::symmetric: return "symmetric";
    }
    return "?";
}

struct Allocation {
    std::vector<double> b;
    std::vector<double> t;            // positive, sums to one
    std::optional<double> c;          // the closed-form scalar, when that path ran
    AllocationMethod method = AllocationMethod::closed_form;
    double certificate_slack = 0.0;   // min margin of the certificate below
};

// min_i ( sum_j t_j ln t_j - t_i ln b_i ): nonnegative iff prod t^t >= b_i^{t_i}.
inline double lemma4_certificate(const std::vector<double>& t, const std::vector<double>& b) {
    double tlogt = 0.0;
    for (double v : t) tlogt += v * std::log(v);
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < b.size(); ++i)
        worst = std::min(worst, tlogt - t[i] * std::log(b[i]));
    return worst;
}

// min_i ( (1/t_i) ln K - ln b_i ): nonnegative iff K^{1/t_i} >= b_i (zero b_i
// entries hold trivially and are skipped).
inline double lemma7_certificate(const std::vector<double>& t, const std::vector<double>& b,
                                 double K) {
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (b[i] == 0.0) continue;
        worst = std::min(worst, std::log(K) / t[i] - std::log(b[i]));
    }
    return worst;
}

namespace detail {

// Projected subgradient ascent of min_i(sum t ln t - t_i ln b_i) over the
// simplex; used when the closed form does not apply or fails its certificate.
inline std::vector<double> lemma4_numeric_search(const std::vector<double>& b) {
    const std::size_t n = b.size();
    std::vector<double> best;
    double best_cert = -std::numeric_limits<double>::infinity();
    auto try_candidate = [&](const std::vector<double>& t) {
        const double cert = lemma4_certificate(t, b);
        if (cert > best_cert) {
            best_cert = cert;
            best = t;
        }
    };
    try_candidate(std::vector<double>(n, 1.0 / static_cast<double>(n)));
    // All-tie candidate: t_i ln b_i equal across i, i.e. t proportional to
    // -1/ln b_i. For n = 2 this is where the two certificate branches cross,
    // which carries the maximum (the branches are convex in t).
    {
        std::vector<double> t(n);
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) sum += (t[i] = -1.0 / std::log(b[i]));
        for (auto& v : t) v /= sum;
        try_candidate(t);
    }
    if (n == 2) {
        for (double x = 1e-3; x < 1.0; x += 1e-3) try_candidate({x, 1.0 - x});
        return best;
    }
    std::mt19937_64 rng(0xA110C4ULL);
    std::exponential_distribution<double> expo(1.0);
    std::vector<double> t(n), g(n);
    for (int restart = 0; restart < 64; ++restart) {
        double s = 0.0;
        for (auto& v : t) s += (v = expo(rng));
        for (auto& v : t) v /= s;
        for (int iter = 1; iter <= 300; ++iter) {
            double tlogt = 0.0;
            for (double v : t) tlogt += v * std::log(v);
            std::size_t active = 0;
            double worst = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < n; ++i) {
                const double m = tlogt - t[i] * std::log(b[i]);
                if (m < worst) {
                    worst = m;
                    active = i;
                }
            }
            double mean = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                g[j] = std::log(t[j]) + 1.0 - (j == active ? std::log(b[active]) : 0.0);
                mean += g[j];
            }
            mean /= static_cast<double>(n);
            const double step = 0.2 / std::sqrt(static_cast<double>(iter));
            double sum = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                t[j] = std::max(t[j] + step * (g[j] - mean), 1e-12);
                sum += t[j];
            }
            for (auto& v : t) v /= sum;
        }
        try_candidate(t);
    }
    return best;
}

}  // namespace detail

// Simplex weights t with prod t_j^{t_j} >= b_i^{t_i} for every i, given
// positive b summing to at most 1/n^{n-1}. Closed form for n >= 3 via the
// inverse-log weights; symmetric inputs short-circuit to t_i = 1/n with
// scalar ln n; everything else falls back to numeric search. The certificate
// is verified on every path and failures are reported, never passed through.
inline Allocation allocate_lemma4(const std::vector<double>& b) {
    const std::size_t n = b.size();
    if (n == 0) throw std::invalid_argument("allocate_lemma4: empty b");
    double sum = 0.0;
    for (double v : b) {
        if (!(v > 0.0)) throw std::invalid_argument("allocate_lemma4: b entries must be > 0");
        sum += v;
    }
    const double budget = std::pow(static_cast<double>(n), -(static_cast<double>(n) - 1.0));
    if (sum > budget + 1e-12)
        throw infeasible_error("allocate_lemma4: sum b = " + std::to_string(sum) +
                               " exceeds 1/n^{n-1} = " + std::to_string(budget));

    Allocation out;
    out.b = b;
    bool symmetric = true;
    for (double v : b) symmetric = symmetric && (v == b[0]);
    if (symmetric) {
        out.t.assign(n, 1.0 / static_cast<double>(n));
        out.c = std::log(static_cast<double>(n));
        out.method = AllocationMethod::symmetric;
        out.certificate_slack = lemma4_certificate(out.t, b);
        return out;
    }
    if (n >= 3) {
        bool small = true;
        for (double v : b) small = small && (v <= std::exp(-2.0));
        if (small) {
            std::vector<double> invlog(n);
            double isum = 0.0, ilogi = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                invlog[i] = -1.0 / std::log(b[i]);
                isum += invlog[i];
                ilogi += invlog[i] * std::log(invlog[i]);
            }
            const double c = std::exp((-1.0 - ilogi) / isum);
            std::vector<double> t(n);
            double tsum = 0.0;
            for (std::size_t i = 0; i < n; ++i) tsum += (t[i] = c * invlog[i]);
            for (auto& v : t) v /= tsum;
            const double cert = lemma4_certificate(t, b);
            if (cert >= -1e-12) {
                out.t = std::move(t);
                out.c = c;
                out.method = AllocationMethod::closed_form;
                out.certificate_slack = cert;
                return out;
            }
        }
    }
    out.t = detail::lemma4_numeric_search(b);
    out.method = AllocationMethod::numeric_fallback;
    out.certificate_slack = lemma4_certificate(out.t, b);
    if (out.certificate_slack < -1e-9)
        throw infeasible_error("allocate_lemma4: no feasible weights found (certificate " +
                               std::to_string(out.certificate_slack) + ")");
    return out;
}

// Weights for the K-regimes: s_i = ln K / ln b_i (zero for b_i = 0), padded
// to the simplex. Requires K in (0, (1/(n e^2))^{1/n}] and sum b <= n K^n;
// the padding keeps every t_i strictly positive.
inline Allocation allocate_lemma7(const std::vector<double>& b, double K) {
    const std::size_t n = b.size();
    if (n == 0) throw std::invalid_argument("allocate_lemma7: empty b");
    const double kmax = std::pow(static_cast<double>(n) * std::exp(2.0),
                                 -1.0 / static_cast<double>(n));
    if (!(K > 0.0) || K > kmax * (1.0 + 1e-12))
        throw std::invalid_argument("allocate_lemma7: K must lie in (0, (1/(n e^2))^{1/n}]");
    double sum = 0.0;
    for (double v : b) {
        if (v < 0.0) throw std::invalid_argument("allocate_lemma7: b entries must be >= 0");
        sum += v;
    }
    const double budget = static_cast<double>(n) * std::pow(K, static_cast<double>(n));
    if (sum > budget + 1e-12)
        throw infeasible_error("allocate_lemma7: sum b = " + std::to_string(sum) +
                               " exceeds n K^n = " + std::to_string(budget));

    Allocation out;
    out.b = b;
    std::vector<double> s(n, 0.0);
    double ssum = 0.0;
    std::size_t zeros = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (b[i] == 0.0) {
            ++zeros;
            continue;
        }
        s[i] = std::log(K) / std::log(b[i]);
        ssum += s[i];
    }
    if (ssum > 1.0 + 1e-12)
        throw infeasible_error("allocate_lemma7: sum s = " + std::to_string(ssum) +
                               " exceeds 1 (lemma hypothesis violated numerically)");
    // Pad the leftover 1 - sum s: proportionally to s_i over the positive
    // entries; zero entries share half of it equally so their weights stay
    // strictly positive (and every t_i ends strictly above s_i).
    out.t.assign(n, 0.0);
    const double leftover = std::max(1.0 - ssum, 0.0);
    if (zeros > 0) {
        if (!(leftover > 0.0))
            throw infeasible_error("allocate_lemma7: no slack left for zero entries");
        if (ssum == 0.0) {
            out.t.assign(n, 1.0 / static_cast<double>(n));
        } else {
            for (std::size_t i = 0; i < n; ++i)
                out.t[i] = (b[i] == 0.0)
                               ? 0.5 * leftover / static_cast<double>(zeros)
                               : s[i] + 0.5 * leftover * s[i] / ssum;
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) out.t[i] = s[i] / ssum;
    }
    out.method = AllocationMethod::closed_form;
    out.certificate_slack = lemma7_certificate(out.t, b, K);
    if (out.certificate_slack < -1e-9)
        throw infeasible_error("allocate_lemma7: certificate failed (" +
                               std::to_string(out.certificate_slack) + ")");
    return out;
}

struct Rationalization {
    std::vector<double> s;       // s_i = k_i r_i / sum k_j r_j = q_i / p
    std::vector<long long> r;    // integer exponents
    long long denominator = 0;   // the common denominator p
    long long total_degree = 0;  // sum k_i r_i = p * prod k_i
};

// Approximates simplex weights t by s_i = q_i/p with k_i r_i = q_i M,
// M = prod k_i, scanning the common denominator p and keeping the smallest
// max_i |t_i - q_i/p| subject to sum k_i r_i <= r_cap and s_i >= t_i / 2.
inline Rationalization rationalize_lemma5(const std::vector<double>& t,
                                          const std::vector<int>& k, long long r_cap) {
    const std::size_t n = t.size();
    if (n == 0 || k.size() != n) throw std::invalid_argument("rationalize_lemma5: size mismatch");
    double tsum = 0.0;
    for (double v : t) {
        if (!(v > 0.0)) throw std::invalid_argument("rationalize_lemma5: t entries must be > 0");
        tsum += v;
    }
    if (std::abs(tsum - 1.0) > 1e-9)
        throw std::invalid_argument("rationalize_lemma5: t must sum to 1");
    long long M = 1;
    for (int v : k) {
        if (v < 1) throw std::invalid_argument("rationalize_lemma5: degrees must be >= 1");
        if (M > (1LL << 50) / v) throw std::invalid_argument("rationalize_lemma5: degree product overflow");
        M *= v;
    }
    const long long p_max = r_cap / M;
    if (p_max < static_cast<long long>(n))
        throw std::invalid_argument("rationalize_lemma5: r_cap too small (needs >= n * prod k_i)");

    std::vector<long long> q(n), best_q;
    long long best_p = -1;
    double best_err = std::numeric_limits<double>::infinity();
    for (long long p = static_cast<long long>(n); p <= p_max; ++p) {
        long long qsum = 0;
        for (std::size_t i = 0; i < n; ++i) {
            q[i] = std::max<long long>(1, std::llround(t[i] * static_cast<double>(p)));
            qsum += q[i];
        }
        while (qsum > p) {
            std::size_t pick = 0;
            double most_over = -std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < n; ++i) {
                if (q[i] <= 1) continue;
                const double over = static_cast<double>(q[i]) / p - t[i];
                if (over > most_over) {
                    most_over = over;
                    pick = i;
                }
            }
            --q[pick];
            --qsum;
        }
        while (qsum < p) {
            std::size_t pick = 0;
            double most_under = -std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < n; ++i) {
                const double under = t[i] - static_cast<double>(q[i]) / p;
                if (under > most_under) {
                    most_under = under;
                    pick = i;
                }
            }
            ++q[pick];
            ++qsum;
        }
        double err = 0.0;
        bool half_ok = true;
        for (std::size_t i = 0; i < n; ++i) {
            const double si = static_cast<double>(q[i]) / static_cast<double>(p);
            err = std::max(err, std::abs(t[i] - si));
            half_ok = half_ok && (si >= t[i] / 2.0);
        }
        if (half_ok && err < best_err) {
            best_err = err;
            best_p = p;
            best_q = q;
            if (err == 0.0) break;
        }
    }
    if (best_p < 0)
        throw std::invalid_argument(
            "rationalize_lemma5: r_cap too small to reach s_i >= t_i/2");
    Rationalization out;
    out.denominator = best_p;
    out.s.resize(n);
    out.r.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.s[i] = static_cast<double>(best_q[i]) / static_cast<double>(best_p);
        out.r[i] = best_q[i] * (M / k[i]);
    }
    out.total_degree = best_p * M;
    return out;
}

struct PlankInstance {
    std::vector<Polynomial> polys;  // normalized to (estimated) norm one
    std::vector<int> degrees;
    std::vector<double> radii;
    SpaceSpec space;
    PlankRegime regime = PlankRegime::bst;
    double K = 0.0;  // k_custom: user constant; finite_dim: 1/(C 4 e d)

    // Raw polynomials are normalized on construction through the shared
    // normalization protocol.
    static PlankInstance make(std::vector<Polynomial> raw, std::vector<double> radii,
                              const SpaceSpec& space, PlankRegime regime, double K = 0.0) {
        space.validate();
        if (raw.empty()) throw std::invalid_argument("plank: needs at least one polynomial");
        if (raw.size() != radii.size())
            throw std::invalid_argument("plank: radii count must match polynomial count");
        PlankInstance inst;
        inst.space = space;
        inst.regime = regime;
        const std::size_t n = raw.size();
        for (std::size_t i = 0; i < n; ++i) {
            if (raw[i].dim() != space.d) throw std::invalid_argument("plank: dimension mismatch");
            if (raw[i].is_zero() || raw[i].degree() < 1)
                throw std::invalid_argument("plank: polynomials must have degree >= 1");
            if (radii[i] < 0.0) throw std::invalid_argument("plank: radii must be >= 0");
            inst.degrees.push_back(raw[i].degree());
            inst.polys.push_back(normalize_to_unit_norm(raw[i], space));
        }
        inst.radii = std::move(radii);
        const double C = space.field == Field::real ? 1.0 : 2.0;
        switch (regime) {
            case PlankRegime::bst:
                break;
            case PlankRegime::lp:
                if (!(space.p >= 1.0 && space.p <= 2.0))
                    throw std::invalid_argument("plank: lp regime needs p in [1,2]");
                break;
            case PlankRegime::k_custom: {
                const double kmax = std::pow(static_cast<double>(n) * std::exp(2.0),
                                             -1.0 / static_cast<double>(n));
                if (!(K > 0.0 && K < kmax))
                    throw std::invalid_argument(
                        "plank: k-custom needs 0 < K < (1/(n e^2))^{1/n}");
                inst.K = K;
                break;
            }
            case PlankRegime::finite_dim:
                inst.K = 1.0 / (C * 4.0 * std::numbers::e_v<double> * space.d);
                break;
        }
        return inst;
    }

    // Exponent of the radii in the feasibility gate (p for the lp regime).
    double gate_exponent() const { return regime == PlankRegime::lp ? space.p : 1.0; }

    double gate_lhs() const {
        const double q = gate_exponent();
        double s = 0.0;
        for (double a : radii) s += std::pow(a, q);
        return s;
    }

    double gate_budget() const {
        const double n = static_cast<double>(radii.size());
        if (regime == PlankRegime::bst || regime == PlankRegime::lp)
            return std::pow(n, -(n - 1.0));
        return n * std::pow(K, n);
    }

    bool gate_passes() const { return gate_lhs() <= gate_budget() * (1.0 + 1e-12); }
};

struct PlankReport {
    std::vector<double> witness;   // flat real coordinates
    std::vector<double> margins;   // |P_i(witness)| - a_i^{k_i}
    Allocation allocation;
    std::vector<double> s;
    std::vector<long long> r;
    long long total_degree = 0;
    double objective = 0.0;  // achieved sum r_i ln|P_i|
    int starts = 0;
    double converged_fraction = 0.0;
    bool success = false;    // all margins >= -1e-9
    std::uint64_t seed = 0;
};

struct PlankOptions {
    AscentOptions ascent;
    long long r_cap = 0;  // 0 selects 64 * n * prod k_i
};

// The constructive witness search: slack-augmented targets b, weight
// allocation, rational exponents r, then one maximization of
// F(z) = sum r_i ln|P_i(z)| over the unit ball. The product polynomial
// prod P_i^{r_i} is never expanded; the objective works on the factor list.
inline PlankReport find_witness(const PlankInstance& inst, const PlankOptions& opts = {}) {
    const std::size_t n = inst.polys.size();
    if (!inst.gate_passes())
        throw infeasible_error(
            "plank: feasibility gate violated: sum a_i^q = " + std::to_string(inst.gate_lhs()) +
            " > " + std::to_string(inst.gate_budget()) + " for regime " +
            regime_name(inst.regime));

    const double q = inst.gate_exponent();
    const double budget = inst.gate_budget();
    double lhs = inst.gate_lhs();
    const double slack = std::max(budget - lhs, 0.0);
    std::vector<double> b(n);
    for (std::size_t i = 0; i < n; ++i)
        b[i] = std::pow(inst.radii[i], q) + slack / static_cast<double>(n);

    PlankReport rep;
    rep.seed = opts.ascent.seed;
    std::vector<std::size_t> active;  // zero targets drop out: those planks are free
    const bool lemma4_regime =
        inst.regime == PlankRegime::bst || inst.regime == PlankRegime::lp;
    if (lemma4_regime) {
        std::vector<double> b_active;
        for (std::size_t i = 0; i < n; ++i) {
            if (b[i] > 0.0) {
                active.push_back(i);
                b_active.push_back(b[i]);
            }
        }
        if (active.empty()) {  // every radius is zero: any norm point works
            active.push_back(0);
            b_active.push_back(budget);
        }
        rep.allocation = allocate_lemma4(b_active);
    } else {
        for (std::size_t i = 0; i < n; ++i) active.push_back(i);
        rep.allocation = allocate_lemma7(b, inst.K);
    }

    std::vector<int> k_active;
    for (std::size_t idx : active) k_active.push_back(inst.degrees[idx]);
    long long r_cap = opts.r_cap;
    if (r_cap == 0) {
        long long prod = 1;
        for (int kv : k_active) prod *= kv;
        r_cap = 64LL * static_cast<long long>(n) * prod;
    }
    const auto rat = rationalize_lemma5(rep.allocation.t, k_active, r_cap);

    rep.s.assign(n, 0.0);
    rep.r.assign(n, 0);
    for (std::size_t j = 0; j < active.size(); ++j) {
        rep.s[active[j]] = rat.s[j];
        rep.r[active[j]] = rat.r[j];
    }
    rep.total_degree = rat.total_degree;

    detail::LogProductObjective obj;
    obj.space = inst.space;
    bool all_homog = true;
    for (std::size_t j = 0; j < active.size(); ++j) {
        obj.polys.emplace_back(inst.polys[active[j]]);
        obj.weights.push_back(static_cast<double>(rat.r[j]));
        all_homog = all_homog && inst.polys[active[j]].is_homogeneous();
    }
    const bool sphere_only = (inst.space.field == Field::complex) || all_homog;
    AscentOptions ascent = opts.ascent;
    if (ascent.starts <= 0) ascent.starts = 32 * inst.space.d;
    double conv = 0.0;
    const auto best = detail::maximize_on_ball(obj, sphere_only, ascent.starts, ascent, &conv);

    rep.witness = best.x;
    rep.objective = best.objective;
    rep.starts = ascent.starts;
    rep.converged_fraction = conv;
    rep.margins.resize(n);
    bool ok = true;
    for (std::size_t i = 0; i < n; ++i) {
        const double val = std::abs(evaluate_at_coords(inst.polys[i], inst.space, rep.witness));
        rep.margins[i] =
            val - std::pow(inst.radii[i], static_cast<double>(inst.degrees[i]));
        ok = ok && rep.margins[i] >= -1e-9;
    }
    rep.success = ok;
    return rep;
}

}  // namespace plankforge
