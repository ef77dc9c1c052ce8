#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "plankforge/sup_norm.hpp"

using namespace plankforge;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

MultiIndex random_alpha(int d, int maxtot, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> tot(1, maxtot);
    MultiIndex e(static_cast<std::size_t>(d), 0u);
    int remaining = tot(rng);
    std::uniform_int_distribution<int> coord(0, d - 1);
    for (int i = 0; i < remaining; ++i) e[coord(rng)]++;
    return e;
}

}  // namespace

TEST_CASE("estimate matches exact monomial norms", "[sup_norm]") {
    {
        SpaceSpec S{Field::complex, 2, 2.0};
        Polynomial p(2, Field::complex);
        p.add_term({1, 1}, Coeff{1, 0});
        auto est = estimate_sup_norm(p, S, {.seed = 1});
        CHECK(std::abs(est.value - 0.5) <= 1e-9);
    }
    {
        SpaceSpec S{Field::real, 2, 1.0};
        Polynomial p(2, Field::real);
        p.add_term({2, 2}, 1.0);
        auto est = estimate_sup_norm(p, S, {.seed = 2});
        CHECK(std::abs(est.value - 1.0 / 16.0) <= 1e-9);
    }
    {
        SpaceSpec S{Field::real, 1, 2.0};
        Polynomial p(1, Field::real);
        p.add_term({1}, 3.0);
        auto est = estimate_sup_norm(p, S, {.seed = 3});
        CHECK(est.value == 3.0);  // attained exactly at +-1
    }
}

TEST_CASE("estimate agrees with monomial_norm across p and alpha", "[sup_norm]") {
    std::mt19937_64 rng(321);
    const double ps[] = {1.0, 1.5, 2.0, 3.0, kInf};
    for (int rep = 0; rep < 12; ++rep) {
        const int d = 1 + static_cast<int>(rng() % 4);
        const double p = ps[rep % 5];
        const Field f = (rep % 2 == 0) ? Field::real : Field::complex;
        SpaceSpec S{f, d, p};
        const auto alpha = random_alpha(d, 10, rng);
        Polynomial mono = Polynomial::monomial(d, f, alpha, Coeff{1, 0});
        auto est = estimate_sup_norm(mono, S, {.starts = 64, .seed = 1000ull + static_cast<std::uint64_t>(rep)});
        const double exact = monomial_norm(alpha, S);
        INFO("d=" << d << " p=" << p << " rep=" << rep);
        CHECK(std::abs(est.value - exact) <= 1e-7 * exact);
    }
}

TEST_CASE("zero polynomial estimate", "[sup_norm]") {
    SpaceSpec S{Field::real, 2, 2.0};
    Polynomial z(2, Field::real);
    auto est = estimate_sup_norm(z, S);
    CHECK(est.value == 0.0);
    CHECK(est.argmax == std::vector<double>{0.0, 0.0});
}

TEST_CASE("value is recomputable and capped by coefficient mass", "[sup_norm]") {
    std::mt19937_64 rng(555);
    for (int rep = 0; rep < 10; ++rep) {
        const Field f = (rep % 2 == 0) ? Field::real : Field::complex;
        SpaceSpec S{f, 2, (rep % 3 == 0) ? 1.0 : 2.0};
        auto p = random_polynomial(2, f, 3, rep % 2 == 1, rng);
        auto est = estimate_sup_norm(p, S, {.seed = 77ull + static_cast<std::uint64_t>(rep)});
        CHECK(est.value == std::abs(evaluate_at_coords(p, S, est.argmax)));
        CHECK(est.value <= p.coeff_modulus_sum() + 1e-12);
        CHECK(vector_norm(S, est.argmax) <= 1.0 + 1e-12);
    }
}

TEST_CASE("scaling equivariance", "[sup_norm]") {
    std::mt19937_64 rng(808);
    auto p = random_polynomial(2, Field::real, 3, false, rng);
    SpaceSpec S{Field::real, 2, 2.0};
    AscentOptions opts{.seed = 4};
    const auto base = estimate_sup_norm(p, S, opts);
    for (double c : {2.0, 0.5, 4.0}) {  // power-of-two scalings are exact
        auto scaled = estimate_sup_norm(p * Coeff{c, 0.0}, S, opts);
        CHECK(scaled.value == c * base.value);
        CHECK(scaled.argmax == base.argmax);
    }
    auto gen = estimate_sup_norm(p * Coeff{3.7, 0.0}, S, opts);
    CHECK(std::abs(gen.value - 3.7 * base.value) <= 1e-12 * gen.value);
}

TEST_CASE("homogeneous argmax lies on the sphere", "[sup_norm]") {
    std::mt19937_64 rng(90);
    for (double p : {1.0, 2.0, kInf}) {
        SpaceSpec S{Field::real, 3, p};
        auto poly = random_polynomial(3, Field::real, 3, true, rng);
        auto est = estimate_sup_norm(poly, S, {.seed = 6});
        CHECK(std::abs(vector_norm(S, est.argmax) - 1.0) <= 1e-9);
    }
}

TEST_CASE("interior maximum of a real non-homogeneous polynomial", "[sup_norm]") {
    // 1 - x^2 on [-1,1]: maximum 1 at the interior point 0
    SpaceSpec S{Field::real, 1, 2.0};
    Polynomial p(1, Field::real);
    p.add_term({0}, 1.0);
    p.add_term({2}, -1.0);
    auto est = estimate_sup_norm(p, S, {.seed = 12});
    CHECK(std::abs(est.value - 1.0) <= 1e-9);
    CHECK(std::abs(est.argmax[0]) <= 1e-4);
}

TEST_CASE("constant polynomial", "[sup_norm]") {
    SpaceSpec S{Field::real, 2, 1.0};
    auto c = Polynomial::constant(2, Field::real, -2.5);
    auto est = estimate_sup_norm(c, S, {.seed = 5});
    CHECK(est.value == 2.5);
}

TEST_CASE("field compatibility", "[sup_norm]") {
    SpaceSpec S{Field::real, 2, 2.0};
    Polynomial p(2, Field::complex);
    p.add_term({1, 0}, Coeff{0, 1});
    CHECK_THROWS_AS(estimate_sup_norm(p, S), std::invalid_argument);
    // real polynomial on a complex space is allowed
    SpaceSpec C{Field::complex, 2, 2.0};
    Polynomial q(2, Field::real);
    q.add_term({1, 1}, 1.0);
    auto est = estimate_sup_norm(q, C, {.seed = 8});
    CHECK(std::abs(est.value - 0.5) <= 1e-9);
}

TEST_CASE("threaded run merges deterministically", "[sup_norm]") {
    std::mt19937_64 rng(2024);
    auto p = random_polynomial(3, Field::complex, 4, true, rng);
    SpaceSpec S{Field::complex, 3, 1.5};
    auto a = estimate_sup_norm(p, S, {.starts = 48, .seed = 9, .threads = 1});
    auto b = estimate_sup_norm(p, S, {.starts = 48, .seed = 9, .threads = 4});
    CHECK(a.value == b.value);
    CHECK(a.argmax == b.argmax);
}
