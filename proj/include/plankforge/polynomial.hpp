#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace plankforge {

enum class Field { real, complex };

using Coeff = std::complex<double>;

// Exponent vector of a monomial; entry i is the power of the i-th variable.
using MultiIndex = std::vector<std::uint32_t>;

inline std::uint64_t total_degree(const MultiIndex& a) {
    return std::accumulate(a.begin(), a.end(), std::uint64_t{0});
}

// Graded lexicographic order: total degree first, then entrywise comparison.
// This is the canonical iteration and serialization order.
struct GrlexLess {
    bool operator()(const MultiIndex& a, const MultiIndex& b) const {
        const std::uint64_t da = total_degree(a);
        const std::uint64_t db = total_degree(b);
        if (da != db) return da < db;
        return a < b;
    }
};

// Sparse multivariate polynomial over R or C. Coefficients are stored as
// complex pairs for both fields; the real tag rejects nonzero imaginary
// parts at insertion. Exact-zero coefficients are never stored.
class Polynomial {
public:
    using TermMap = std::map<MultiIndex, Coeff, GrlexLess>;

    Polynomial(int dim, Field field) : dim_(dim), field_(field) {
        if (dim < 1) throw std::invalid_argument("Polynomial: dimension must be >= 1");
    }

    static Polynomial constant(int dim, Field field, Coeff c) {
        Polynomial p(dim, field);
        p.add_term(MultiIndex(static_cast<std::size_t>(dim), 0u), c);
        return p;
    }

    static Polynomial monomial(int dim, Field field, const MultiIndex& exp, Coeff c) {
        Polynomial p(dim, field);
        p.add_term(exp, c);
        return p;
    }

    // Coordinate functional z_i (0-based index).
    static Polynomial coordinate(int dim, Field field, int i) {
        MultiIndex e(static_cast<std::size_t>(dim), 0u);
        e.at(static_cast<std::size_t>(i)) = 1u;
        return monomial(dim, field, e, Coeff{1.0, 0.0});
    }

    int dim() const { return dim_; }
    Field field() const { return field_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    // The zero polynomial has degree 0 by convention.
    int degree() const {
        if (terms_.empty()) return 0;
        return static_cast<int>(total_degree(std::prev(terms_.end())->first));
    }

    bool is_homogeneous() const {
        if (terms_.empty()) return true;
        return total_degree(terms_.begin()->first) ==
               total_degree(std::prev(terms_.end())->first);
    }

    // Accumulates c onto the coefficient at exp; prunes exact zeros.
    void add_term(const MultiIndex& exp, Coeff c) {
        if (static_cast<int>(exp.size()) != dim_)
            throw std::invalid_argument("Polynomial::add_term: exponent length != dim");
        if (field_ == Field::real && c.imag() != 0.0)
            throw std::invalid_argument("Polynomial::add_term: non-real coefficient in real polynomial");
        auto it = terms_.find(exp);
        if (it == terms_.end()) {
            if (c != Coeff{0.0, 0.0}) terms_.emplace(exp, c);
        } else {
            it->second += c;
            if (it->second == Coeff{0.0, 0.0}) terms_.erase(it);
        }
    }

    Coeff coeff(const MultiIndex& exp) const {
        auto it = terms_.find(exp);
        return it == terms_.end() ? Coeff{0.0, 0.0} : it->second;
    }

    double coeff_modulus_sum() const {
        double s = 0.0;
        for (const auto& [e, c] : terms_) s += std::abs(c);
        return s;
    }

    double max_coeff_modulus() const {
        double m = 0.0;
        for (const auto& [e, c] : terms_) m = std::max(m, std::abs(c));
        return m;
    }

    Polynomial& operator*=(Coeff s) {
        if (field_ == Field::real && s.imag() != 0.0)
            throw std::invalid_argument("Polynomial: complex scale on real polynomial");
        if (s == Coeff{0.0, 0.0}) {
            terms_.clear();
            return *this;
        }
        for (auto& [e, c] : terms_) c *= s;
        return *this;
    }

    friend Polynomial operator*(Polynomial p, Coeff s) {
        p *= s;
        return p;
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        return a.dim_ == b.dim_ && a.field_ == b.field_ && a.terms_ == b.terms_;
    }

private:
    int dim_;
    Field field_;
    TermMap terms_;
};

inline Polynomial add(const Polynomial& a, const Polynomial& b) {
    if (a.dim() != b.dim() || a.field() != b.field())
        throw std::invalid_argument("add: dimension or field mismatch");
    Polynomial out = a;
    for (const auto& [e, c] : b.terms()) out.add_term(e, c);
    return out;
}

// Evaluation via per-point cached coordinate power tables; 0^0 = 1.
inline Coeff evaluate(const Polynomial& P, std::span<const Coeff> z) {
    if (static_cast<int>(z.size()) != P.dim())
        throw std::invalid_argument("evaluate: point length != dim");
    const int d = P.dim();
    std::vector<std::uint32_t> maxe(static_cast<std::size_t>(d), 0u);
    for (const auto& [e, c] : P.terms())
        for (int i = 0; i < d; ++i) maxe[i] = std::max(maxe[i], e[i]);
    std::vector<std::vector<Coeff>> pow(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
        pow[i].resize(maxe[i] + 1);
        pow[i][0] = Coeff{1.0, 0.0};
        for (std::uint32_t k = 1; k <= maxe[i]; ++k) pow[i][k] = pow[i][k - 1] * z[i];
    }
    Coeff acc{0.0, 0.0};
    for (const auto& [e, c] : P.terms()) {
        Coeff t = c;
        for (int i = 0; i < d; ++i) t *= pow[i][e[i]];
        acc += t;
    }
    return acc;
}

inline Coeff evaluate(const Polynomial& P, const std::vector<Coeff>& z) {
    return evaluate(P, std::span<const Coeff>(z));
}

// Convenience for real polynomials at real points.
inline double evaluate_real(const Polynomial& P, std::span<const double> x) {
    std::vector<Coeff> z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = Coeff{x[i], 0.0};
    return evaluate(P, std::span<const Coeff>(z)).real();
}

// Analytic partial derivatives; for complex polynomials this is the complex
// derivative vector.
inline std::vector<Coeff> gradient(const Polynomial& P, std::span<const Coeff> z) {
    if (static_cast<int>(z.size()) != P.dim())
        throw std::invalid_argument("gradient: point length != dim");
    const int d = P.dim();
    std::vector<std::uint32_t> maxe(static_cast<std::size_t>(d), 0u);
    for (const auto& [e, c] : P.terms())
        for (int i = 0; i < d; ++i) maxe[i] = std::max(maxe[i], e[i]);
    std::vector<std::vector<Coeff>> pow(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
        pow[i].resize(maxe[i] + 1);
        pow[i][0] = Coeff{1.0, 0.0};
        for (std::uint32_t k = 1; k <= maxe[i]; ++k) pow[i][k] = pow[i][k - 1] * z[i];
    }
    std::vector<Coeff> g(static_cast<std::size_t>(d), Coeff{0.0, 0.0});
    for (const auto& [e, c] : P.terms()) {
        for (int j = 0; j < d; ++j) {
            if (e[j] == 0) continue;
            Coeff t = c * static_cast<double>(e[j]) * pow[j][e[j] - 1];
            for (int i = 0; i < d; ++i)
                if (i != j) t *= pow[i][e[i]];
            g[j] += t;
        }
    }
    return g;
}

inline std::vector<Coeff> gradient(const Polynomial& P, const std::vector<Coeff>& z) {
    return gradient(P, std::span<const Coeff>(z));
}

// Sparse convolution of term maps; exact-zero products are pruned, nothing else.
inline Polynomial multiply(const Polynomial& a, const Polynomial& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("multiply: dimension mismatch");
    if (a.field() != b.field()) throw std::invalid_argument("multiply: field mismatch");
    Polynomial out(a.dim(), a.field());
    MultiIndex e(static_cast<std::size_t>(a.dim()));
    for (const auto& [ea, ca] : a.terms()) {
        for (const auto& [eb, cb] : b.terms()) {
            for (int i = 0; i < a.dim(); ++i) e[i] = ea[i] + eb[i];
            out.add_term(e, ca * cb);
        }
    }
    return out;
}

// P^r by repeated squaring over multiply, r >= 1.
inline Polynomial power(const Polynomial& p, int r) {
    if (r < 1) throw std::invalid_argument("power: exponent must be >= 1");
    Polynomial base = p;
    Polynomial acc = Polynomial::constant(p.dim(), p.field(), Coeff{1.0, 0.0});
    int n = r;
    while (n > 0) {
        if (n & 1) acc = multiply(acc, base);
        n >>= 1;
        if (n > 0) base = multiply(base, base);
    }
    return acc;
}

// Sum of terms with total degree l.
inline Polynomial homogeneous_component(const Polynomial& p, int l) {
    if (l < 0) throw std::invalid_argument("homogeneous_component: l must be >= 0");
    Polynomial out(p.dim(), p.field());
    for (const auto& [e, c] : p.terms())
        if (total_degree(e) == static_cast<std::uint64_t>(l)) out.add_term(e, c);
    return out;
}

namespace detail {

inline std::vector<std::int64_t> binomial_row(std::uint32_t n) {
    std::vector<std::int64_t> row(n + 1);
    row[0] = 1;
    for (std::uint32_t m = 1; m <= n; ++m)
        row[m] = row[m - 1] * static_cast<std::int64_t>(n - m + 1) / static_cast<std::int64_t>(m);
    return row;
}

}  // namespace detail

// Q on R^{2d} with Q(x_1,y_1,...,x_d,y_d) = |P(x_1+iy_1,...,x_d+iy_d)|^2.
// Built by substituting z_j = x_j + i y_j and expanding Re^2 + Im^2, so the
// result has degree exactly 2*deg(P).
inline Polynomial realify_modulus_squared(const Polynomial& P) {
    if (P.field() != Field::complex)
        throw std::invalid_argument("realify_modulus_squared: input must be complex");
    const int d = P.dim();
    const int D = 2 * d;
    // i^k cycle for (i y)^k coefficients
    const Coeff icycle[4] = {Coeff{1, 0}, Coeff{0, 1}, Coeff{-1, 0}, Coeff{0, -1}};

    Polynomial sub(D, Field::complex);  // P(z) as a complex-coefficient poly in (x, y)
    for (const auto& [e, c] : P.terms()) {
        Polynomial term = Polynomial::constant(D, Field::complex, c);
        for (int j = 0; j < d; ++j) {
            const std::uint32_t k = e[j];
            if (k == 0) continue;
            Polynomial binext(D, Field::complex);  // (x_j + i y_j)^k
            const auto row = detail::binomial_row(k);
            for (std::uint32_t m = 0; m <= k; ++m) {
                MultiIndex ee(static_cast<std::size_t>(D), 0u);
                ee[2 * j] = m;          // x_j^m
                ee[2 * j + 1] = k - m;  // y_j^{k-m}
                binext.add_term(ee, static_cast<double>(row[m]) * icycle[(k - m) % 4]);
            }
            term = multiply(term, binext);
        }
        sub = add(sub, term);
    }
    Polynomial re(D, Field::real), im(D, Field::real);
    for (const auto& [e, c] : sub.terms()) {
        re.add_term(e, Coeff{c.real(), 0.0});
        im.add_term(e, Coeff{c.imag(), 0.0});
    }
    return add(multiply(re, re), multiply(im, im));
}

// Visits every exponent vector of total degree exactly `total` in `dim` variables.
inline void for_each_multiindex(int dim, int total,
                                const std::function<void(const MultiIndex&)>& fn) {
    MultiIndex e(static_cast<std::size_t>(dim), 0u);
    std::function<void(int, int)> rec = [&](int pos, int remaining) {
        if (pos == dim - 1) {
            e[pos] = static_cast<std::uint32_t>(remaining);
            fn(e);
            return;
        }
        for (int v = 0; v <= remaining; ++v) {
            e[pos] = static_cast<std::uint32_t>(v);
            rec(pos + 1, remaining - v);
        }
    };
    rec(0, total);
}

// Dense random polynomial with i.i.d. standard normal coefficients
// (independent real and imaginary parts in the complex case).
inline Polynomial random_polynomial(int dim, Field field, int degree, bool homogeneous,
                                    std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto draw = [&]() -> Coeff {
        if (field == Field::real) return Coeff{gauss(rng), 0.0};
        const double re = gauss(rng);
        const double im = gauss(rng);
        return Coeff{re, im};
    };
    Polynomial p(dim, field);
    const int lo = homogeneous ? degree : 0;
    for (int l = lo; l <= degree; ++l)
        for_each_multiindex(dim, l, [&](const MultiIndex& e) { p.add_term(e, draw()); });
    return p;
}

}  // namespace plankforge
