#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "plankforge/polynomial.hpp"

using namespace plankforge;

namespace {

Polynomial random_sparse_int_poly(int dim, int maxdeg, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> coef(-3, 3);
    std::uniform_int_distribution<int> deg(0, maxdeg);
    std::uniform_int_distribution<int> nterms(1, 6);
    Polynomial p(dim, Field::real);
    const int terms = nterms(rng);
    for (int t = 0; t < terms; ++t) {
        MultiIndex e(static_cast<std::size_t>(dim), 0u);
        int remaining = deg(rng);
        for (int i = 0; i < dim && remaining > 0; ++i) {
            std::uniform_int_distribution<int> part(0, remaining);
            const int v = part(rng);
            e[i] = static_cast<std::uint32_t>(v);
            remaining -= v;
        }
        p.add_term(e, Coeff{static_cast<double>(coef(rng)), 0.0});
    }
    return p;
}

std::vector<Coeff> random_point(int dim, Field field, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Coeff> z(static_cast<std::size_t>(dim));
    for (auto& v : z) v = field == Field::real ? Coeff{u(rng), 0.0} : Coeff{u(rng), u(rng)};
    return z;
}

// Independent oracle: central finite differences of the evaluation map.
std::vector<Coeff> fd_gradient(const Polynomial& P, const std::vector<Coeff>& z, double h) {
    std::vector<Coeff> g(z.size());
    for (std::size_t j = 0; j < z.size(); ++j) {
        auto zp = z, zm = z;
        zp[j] += h;
        zm[j] -= h;
        g[j] = (evaluate(P, zp) - evaluate(P, zm)) / (2.0 * h);
    }
    return g;
}

bool terms_close(const Polynomial& a, const Polynomial& b, double rtol) {
    if (a.dim() != b.dim()) return false;
    for (const auto& [e, c] : a.terms()) {
        const Coeff d = c - b.coeff(e);
        if (std::abs(d) > rtol * (1.0 + std::abs(c))) return false;
    }
    for (const auto& [e, c] : b.terms()) {
        const Coeff d = c - a.coeff(e);
        if (std::abs(d) > rtol * (1.0 + std::abs(c))) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("evaluate on simple monomials", "[poly]") {
    Polynomial p(2, Field::real);
    p.add_term({2, 1}, 1.0);
    CHECK(evaluate(p, std::vector<Coeff>{{1, 0}, {1, 0}}) == Coeff{1.0, 0.0});
    CHECK(evaluate(p, std::vector<Coeff>{{2, 0}, {3, 0}}) == Coeff{12.0, 0.0});

    Polynomial q(2, Field::complex);
    q.add_term({1, 0}, Coeff{1, 0});
    q.add_term({0, 1}, Coeff{0, 1});
    const Coeff v = evaluate(q, std::vector<Coeff>{{1, 0}, {0, 1}});
    CHECK(std::abs(v) == 0.0);  // 1 + i*i = 0
}

TEST_CASE("evaluate dimension mismatch throws", "[poly]") {
    Polynomial p(2, Field::real);
    p.add_term({1, 0}, 1.0);
    CHECK_THROWS_AS(evaluate(p, std::vector<Coeff>{{1, 0}}), std::invalid_argument);
}

TEST_CASE("0^0 = 1 in evaluation", "[poly]") {
    Polynomial p = Polynomial::constant(2, Field::real, 3.0);
    CHECK(evaluate(p, std::vector<Coeff>{{0, 0}, {0, 0}}) == Coeff{3.0, 0.0});
}

TEST_CASE("gradient simple cases", "[poly]") {
    Polynomial p(1, Field::real);
    p.add_term({2}, 1.0);
    auto g = gradient(p, std::vector<Coeff>{{3, 0}});
    CHECK(g[0] == Coeff{6.0, 0.0});

    Polynomial q(2, Field::real);
    q.add_term({1, 1}, 1.0);
    auto g2 = gradient(q, std::vector<Coeff>{{0.25, 0}, {-2, 0}});
    CHECK(g2[0] == Coeff{-2.0, 0.0});
    CHECK(g2[1] == Coeff{0.25, 0.0});
}

TEST_CASE("gradient matches central finite differences", "[poly]") {
    std::mt19937_64 rng(20260810);
    std::uniform_int_distribution<int> dims(1, 6);
    for (int rep = 0; rep < 100; ++rep) {
        const int d = dims(rng);
        std::uniform_int_distribution<int> degs(1, 8);
        const Field f = (rep % 2 == 0) ? Field::real : Field::complex;
        Polynomial p = random_polynomial(d, f, std::min(degs(rng), 9 - d), false, rng);
        const auto z = random_point(d, f, rng);
        const auto g = gradient(p, z);
        const auto gfd = fd_gradient(p, z, 1e-6);
        double gn = 0.0, err = 0.0;
        for (std::size_t j = 0; j < g.size(); ++j) {
            gn += std::norm(g[j]);
            err += std::norm(g[j] - gfd[j]);
        }
        CHECK(std::sqrt(err) <= 1e-5 * (1.0 + std::sqrt(gn)));
    }
}

TEST_CASE("multiply basics", "[poly]") {
    auto z1 = Polynomial::coordinate(2, Field::real, 0);
    auto z2 = Polynomial::coordinate(2, Field::real, 1);
    auto prod = multiply(z1, z2);
    CHECK(prod.term_count() == 1);
    CHECK(prod.coeff({1, 1}) == Coeff{1.0, 0.0});

    auto s = add(z1, z2);
    auto sq = multiply(s, s);
    CHECK(sq.coeff({2, 0}) == Coeff{1.0, 0.0});
    CHECK(sq.coeff({1, 1}) == Coeff{2.0, 0.0});
    CHECK(sq.coeff({0, 2}) == Coeff{1.0, 0.0});
}

TEST_CASE("multiply mismatch throws", "[poly]") {
    Polynomial a(2, Field::real), b(3, Field::real), c(2, Field::complex);
    a.add_term({1, 0}, 1.0);
    b.add_term({1, 0, 0}, 1.0);
    c.add_term({1, 0}, Coeff{1, 0});
    CHECK_THROWS_AS(multiply(a, b), std::invalid_argument);
    CHECK_THROWS_AS(multiply(a, c), std::invalid_argument);
}

TEST_CASE("product degree law on random pairs", "[poly]") {
    std::mt19937_64 rng(42);
    for (int rep = 0; rep < 50; ++rep) {
        auto a = random_sparse_int_poly(3, 5, rng);
        auto b = random_sparse_int_poly(3, 5, rng);
        if (a.is_zero() || b.is_zero()) continue;
        CHECK(multiply(a, b).degree() == a.degree() + b.degree());
    }
}

TEST_CASE("ring axioms on random triples", "[poly]") {
    std::mt19937_64 rng(7);
    for (int rep = 0; rep < 25; ++rep) {
        auto a = random_sparse_int_poly(2, 4, rng);
        auto b = random_sparse_int_poly(2, 4, rng);
        auto c = random_sparse_int_poly(2, 4, rng);
        CHECK(multiply(a, b) == multiply(b, a));  // exact: integer coefficients
        CHECK(terms_close(multiply(multiply(a, b), c), multiply(a, multiply(b, c)), 1e-12));
    }
}

TEST_CASE("evaluate is multiplicative", "[poly]") {
    std::mt19937_64 rng(99);
    for (int rep = 0; rep < 40; ++rep) {
        const Field f = (rep % 2 == 0) ? Field::real : Field::complex;
        auto a = random_polynomial(2, f, 3, false, rng);
        auto b = random_polynomial(2, f, 3, false, rng);
        // coefficients are rescaled into [-1, 1]
        a *= Coeff{1.0 / (a.max_coeff_modulus() + 1.0), 0.0};
        b *= Coeff{1.0 / (b.max_coeff_modulus() + 1.0), 0.0};
        const auto z = random_point(2, f, rng);
        const Coeff lhs = evaluate(multiply(a, b), z);
        const Coeff rhs = evaluate(a, z) * evaluate(b, z);
        CHECK(std::abs(lhs - rhs) <= 1e-10 * (1.0 + std::abs(rhs)));
    }
}

TEST_CASE("power basics and oracle", "[poly]") {
    auto z1 = Polynomial::coordinate(2, Field::real, 0);
    auto cube = power(z1, 3);
    CHECK(cube.term_count() == 1);
    CHECK(cube.coeff({3, 0}) == Coeff{1.0, 0.0});

    auto s = add(z1, Polynomial::coordinate(2, Field::real, 1));
    CHECK(power(s, 3).coeff({2, 1}) == Coeff{3.0, 0.0});

    std::mt19937_64 rng(5);
    auto p = random_sparse_int_poly(2, 3, rng);
    auto pp = multiply(p, p);
    CHECK(terms_close(power(p, 4), multiply(pp, pp), 1e-12));
    CHECK_THROWS_AS(power(p, 0), std::invalid_argument);
}

TEST_CASE("homogeneous_component", "[poly]") {
    Polynomial p(2, Field::real);
    p.add_term({0, 0}, 1.0);
    p.add_term({1, 0}, 1.0);
    p.add_term({1, 1}, 1.0);
    auto h2 = homogeneous_component(p, 2);
    CHECK(h2.term_count() == 1);
    CHECK(h2.coeff({1, 1}) == Coeff{1.0, 0.0});
    CHECK(homogeneous_component(p, 5).is_zero());

    std::mt19937_64 rng(11);
    auto q = random_polynomial(3, Field::complex, 4, false, rng);
    Polynomial rebuilt(3, Field::complex);
    for (int l = 0; l <= q.degree(); ++l) rebuilt = add(rebuilt, homogeneous_component(q, l));
    CHECK(rebuilt == q);
}

TEST_CASE("degree and homogeneity bookkeeping", "[poly]") {
    Polynomial zero(3, Field::real);
    CHECK(zero.degree() == 0);
    CHECK(zero.is_zero());
    CHECK(zero.is_homogeneous());

    Polynomial p(2, Field::real);
    p.add_term({2, 1}, 1.0);
    p.add_term({0, 3}, -1.0);
    CHECK(p.degree() == 3);
    CHECK(p.is_homogeneous());
    p.add_term({1, 0}, 0.5);
    CHECK_FALSE(p.is_homogeneous());

    // cancelling terms are pruned
    Polynomial q(1, Field::real);
    q.add_term({4}, 2.0);
    q.add_term({4}, -2.0);
    CHECK(q.is_zero());
}

TEST_CASE("real polynomial rejects complex coefficients", "[poly]") {
    Polynomial p(1, Field::real);
    CHECK_THROWS_AS(p.add_term({1}, Coeff{1.0, 0.5}), std::invalid_argument);
}

TEST_CASE("realify_modulus_squared simple cases", "[poly]") {
    Polynomial p(1, Field::complex);
    p.add_term({1}, Coeff{1, 0});
    auto q = realify_modulus_squared(p);  // x^2 + y^2
    CHECK(q.field() == Field::real);
    CHECK(q.dim() == 2);
    CHECK(q.coeff({2, 0}) == Coeff{1.0, 0.0});
    CHECK(q.coeff({0, 2}) == Coeff{1.0, 0.0});
    CHECK(q.term_count() == 2);

    Polynomial m(2, Field::complex);
    m.add_term({1, 1}, Coeff{1, 0});
    auto q2 = realify_modulus_squared(m);
    // (x1 x2 - y1 y2)^2 + (x1 y2 + x2 y1)^2
    CHECK(q2.coeff({2, 0, 2, 0}) == Coeff{1.0, 0.0});
    CHECK(q2.coeff({0, 2, 0, 2}) == Coeff{1.0, 0.0});
    CHECK(q2.coeff({2, 0, 0, 2}) == Coeff{1.0, 0.0});
    CHECK(q2.coeff({0, 2, 2, 0}) == Coeff{1.0, 0.0});
    CHECK(q2.degree() == 2 * m.degree());
}

TEST_CASE("realify_modulus_squared pointwise oracle", "[poly]") {
    std::mt19937_64 rng(123);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int pc = 0; pc < 5; ++pc) {
        auto p = random_polynomial(2, Field::complex, 3, false, rng);
        auto q = realify_modulus_squared(p);
        CHECK(q.degree() == 2 * p.degree());
        for (int rep = 0; rep < 200; ++rep) {
            std::vector<Coeff> z = {{u(rng), u(rng)}, {u(rng), u(rng)}};
            std::vector<Coeff> xy = {{z[0].real(), 0}, {z[0].imag(), 0},
                                     {z[1].real(), 0}, {z[1].imag(), 0}};
            const double lhs = std::norm(evaluate(p, z));
            const double rhs = evaluate(q, xy).real();
            CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(lhs)));
            CHECK(rhs >= -1e-14);  // |P|^2 is nonnegative
        }
    }
    CHECK_THROWS_AS(realify_modulus_squared(Polynomial(1, Field::real)), std::invalid_argument);
}

TEST_CASE("grlex term order", "[poly]") {
    Polynomial p(2, Field::real);
    p.add_term({2, 0}, 1.0);
    p.add_term({0, 1}, 1.0);
    p.add_term({1, 1}, 1.0);
    p.add_term({0, 0}, 1.0);
    std::vector<MultiIndex> order;
    for (const auto& [e, c] : p.terms()) order.push_back(e);
    const std::vector<MultiIndex> want = {{0, 0}, {0, 1}, {0, 2}, {1, 1}, {2, 0}};
    // degree-2 block: (0,2) < (1,1) < (2,0)
    p.add_term({0, 2}, 1.0);
    order.clear();
    for (const auto& [e, c] : p.terms()) order.push_back(e);
    CHECK(order == want);
}
