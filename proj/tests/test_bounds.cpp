#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "plankforge/bounds.hpp"

using namespace plankforge;

TEST_CASE("log_gamma exact points", "[bounds]") {
    CHECK(log_gamma(1.0) == Catch::Approx(0.0).margin(1e-14));
    CHECK(log_gamma(2.0) == Catch::Approx(0.0).margin(1e-14));
    CHECK(log_gamma(0.5) == Catch::Approx(0.57236494292470008707).margin(1e-13));
    CHECK(log_gamma(6.0) == Catch::Approx(std::log(120.0)).margin(1e-12));
    CHECK_THROWS_AS(log_gamma(0.0), std::domain_error);
    CHECK_THROWS_AS(log_gamma(-2.0), std::domain_error);
}

TEST_CASE("log_gamma against high-precision reference", "[bounds]") {
    // reference values computed with mpmath.loggamma at 50 digits
    struct Ref { double x, v; };
    const Ref refs[] = {
        {0.5, 0.57236494292470008707},
        {1.5, -0.12078223763524522235},
        {3.25, 0.93580193110872535826},
        {10.0, 12.801827480081469611},
        {25.5, 56.389167643719946744},
        {100.0, 359.13420536957539878},
        {1234.5, 7550.5509010778948957},
        {1e5, 1051287.7089736568949},
        {1e6, 12815504.56914761166},
    };
    for (const auto& r : refs) {
        const double got = log_gamma(r.x);
        CHECK(std::abs(got - r.v) <= std::max(1e-12, 5e-15 * std::abs(r.v)));
    }
}

TEST_CASE("harmonic numbers", "[bounds]") {
    CHECK(harmonic(1) == 1.0);
    CHECK(harmonic(2) == Catch::Approx(1.5).margin(1e-15));
    CHECK(harmonic(4) == Catch::Approx(25.0 / 12.0).margin(1e-15));
    CHECK_THROWS_AS(harmonic(0), std::invalid_argument);
}

TEST_CASE("bound_log_value examples", "[bounds]") {
    CHECK(bound_log_value({BoundKind::bst, {1, 1}, Field::real, 0, 0.0}) ==
          Catch::Approx(std::log(4.0)).margin(1e-14));
    CHECK(bound_log_value({BoundKind::bst, {2, 1}, Field::real, 0, 0.0}) ==
          Catch::Approx(std::log(27.0 / 4.0)).margin(1e-13));
    CHECK(bound_log_value({BoundKind::lp, {1, 1}, Field::complex, 0, 2.0}) ==
          Catch::Approx(std::log(2.0)).margin(1e-14));
    // finite_dim at d=1, n=1, k=1 (real): ln(4e) - ln 2 = ln(2e)
    CHECK(bound_log_value({BoundKind::finite_dim, {1}, Field::real, 1, 0.0}) ==
          Catch::Approx(std::log(2.0 * std::numbers::e)).margin(1e-13));
    // as-stated Hilbert finite constant dips below 1 at d=1, n=1, k=1
    const double as_stated =
        bound_log_value({BoundKind::hilbert_finite_as_stated, {1}, Field::real, 1, 0.0});
    CHECK(as_stated == Catch::Approx(std::log(std::numbers::e / 4.0)).margin(1e-14));
    CHECK(as_stated < 0.0);
}

TEST_CASE("bound parameter validation", "[bounds]") {
    CHECK_THROWS_AS(bound_log_value({BoundKind::bst, {}, Field::real, 0, 0.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(bound_log_value({BoundKind::bst, {0}, Field::real, 0, 0.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(bound_log_value({BoundKind::lp, {1}, Field::complex, 0, 3.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(bound_log_value({BoundKind::hilbert_real_mnpp, {1}, Field::real, 0, 0.0}),
                    std::invalid_argument);
}

TEST_CASE("eq4 matches direct integer-factorial arithmetic", "[bounds]") {
    // sqrt(2^K Gamma(K + d/2) / (Gamma(d/2) prod k_i!)) with everything exact
    // at even dimensions: Gamma(m) = (m-1)!
    auto fact = [](int m) {
        double f = 1.0;
        for (int i = 2; i <= m; ++i) f *= i;
        return f;
    };
    {
        // d=2, k=(1,1): sqrt(2^2 * Gamma(3) / (Gamma(1) * 1 * 1)) = sqrt(8)
        const double got = bound_log_value({BoundKind::hilbert_real_mnpp, {1, 1}, Field::real, 2, 0.0});
        CHECK(got == Catch::Approx(0.5 * std::log(8.0)).margin(1e-13));
    }
    {
        // d=4, k=(2,3): K=5, sqrt(2^5 * Gamma(7) / (Gamma(2) * 2! * 3!))
        const double exact = 0.5 * std::log(32.0 * fact(6) / (fact(1) * fact(2) * fact(3)));
        const double got = bound_log_value({BoundKind::hilbert_real_mnpp, {2, 3}, Field::real, 4, 0.0});
        CHECK(got == Catch::Approx(exact).margin(1e-12));
    }
}

TEST_CASE("eq3 squared is eq2; eq5 at p=1 is eq2", "[bounds]") {
    const std::vector<std::vector<int>> degree_sets = {{1, 1}, {2, 3}, {4, 1, 2}, {5, 5, 5, 5}};
    for (const auto& ks : degree_sets) {
        const double two = bound_log_value({BoundKind::bst, ks, Field::real, 0, 0.0});
        const double three = bound_log_value({BoundKind::hilbert_complex, ks, Field::complex, 0, 0.0});
        const double five = bound_log_value({BoundKind::lp, ks, Field::complex, 0, 1.0});
        CHECK(std::abs(2.0 * three - two) <= 1e-12);
        CHECK(std::abs(five - two) <= 1e-12);
    }
}

TEST_CASE("eq2 is monotone in every degree", "[bounds]") {
    for (int n = 1; n <= 5; ++n) {
        std::vector<int> ks(static_cast<std::size_t>(n), 1);
        for (int slot = 0; slot < n; ++slot) {
            for (int k = 1; k < 10; ++k) {
                ks[slot] = k;
                const double a = bound_log_value({BoundKind::bst, ks, Field::real, 0, 0.0});
                ks[slot] = k + 1;
                const double b = bound_log_value({BoundKind::bst, ks, Field::real, 0, 0.0});
                CHECK(b >= a - 1e-12);
                ks[slot] = 1;
            }
        }
    }
}

TEST_CASE("admissible bounds stay at or above 1, except the as-stated variant", "[bounds]") {
    const std::vector<std::vector<int>> degree_sets = {{1}, {1, 1}, {2, 3}, {3, 3, 3}};
    for (const auto& ks : degree_sets) {
        for (int d : {1, 2, 3, 5}) {
            for (Field f : {Field::real, Field::complex}) {
                CHECK(bound_log_value({BoundKind::bst, ks, f, d, 0.0}) >= -1e-12);
                CHECK(bound_log_value({BoundKind::hilbert_complex, ks, f, d, 0.0}) >= -1e-12);
                CHECK(bound_log_value({BoundKind::hilbert_real_mnpp, ks, f, d, 0.0}) >= -1e-12);
                CHECK(bound_log_value({BoundKind::lp, ks, f, d, 1.5}) >= -1e-12);
                CHECK(bound_log_value({BoundKind::finite_dim, ks, f, d, 0.0}) >= -1e-12);
                CHECK(bound_log_value({BoundKind::hilbert_finite_derived, ks, f, d, 0.0}) >=
                      -1e-12);
            }
        }
    }
    CHECK(bound_log_value({BoundKind::hilbert_finite_as_stated, {1}, Field::real, 1, 0.0}) <
          0.0);
}

TEST_CASE("compare_bounds matches the large-n regime", "[bounds]") {
    const auto at300 = compare_bounds(300, 200, 2);
    CHECK(at300.finite_dim_smaller);
    const auto at100 = compare_bounds(100, 200, 2);
    CHECK_FALSE(at100.finite_dim_smaller);
    const auto smoke = compare_bounds(2, 1, 1);
    CHECK(std::isfinite(smoke.log_finite_dim));
    CHECK(std::isfinite(smoke.log_mnpp));

    const auto cx = compare_bounds(2, 1000, 2);
    CHECK(cx.crossover_n >= 150);
    CHECK(cx.crossover_n <= 400);
}

TEST_CASE("as-stated base over finite-dim base reproduces 1/8", "[bounds]") {
    const double r = hilbert_vs_finite_dim_base_ratio(1, Field::real, 2.0);
    CHECK(std::abs(r - 0.125) <= 1e-15);
    // the ratio against the 4ed base is half of that
    const double r4 = hilbert_vs_finite_dim_base_ratio(1, Field::real, 4.0);
    CHECK(std::abs(r4 - 0.0625) <= 1e-15);
    // decreases in d, so 1/8 is the worst case
    double prev = r;
    for (int d = 2; d <= 16; ++d) {
        const double cur = hilbert_vs_finite_dim_base_ratio(d, Field::real, 2.0);
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("bound kind names round trip", "[bounds]") {
    for (BoundKind k : {BoundKind::bst, BoundKind::hilbert_complex, BoundKind::hilbert_real_mnpp,
                        BoundKind::lp, BoundKind::finite_dim, BoundKind::hilbert_finite_as_stated,
                        BoundKind::hilbert_finite_derived}) {
        CHECK(bound_kind_from_name(bound_kind_name(k)) == k);
    }
    CHECK(bound_kind_from_name("prop12") == BoundKind::hilbert_finite_derived);
    CHECK_THROWS_AS(bound_kind_from_name("eq9"), std::invalid_argument);
}
