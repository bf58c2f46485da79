#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "normcount/arith.hpp"
#include "normcount/form_spec.hpp"
#include "normcount/forms.hpp"
#include "normcount/lattices.hpp"
#include "normcount/regions.hpp"

#include <cmath>
#include <vector>

using namespace normcount;

namespace {

const FormSpec pell = make_form_spec(1, 0, -2);

double shortest_by_search(u64 k, i64 xi) {
    const i64 R = static_cast<i64>(std::ceil(std::sqrt(2.0 * static_cast<double>(k)))) + 1;
    i64 best = -1;
    for (i64 t = -R; t <= R; ++t)
        for (i64 s = -R; s <= R; ++s) {
            if (s == 0 && t == 0) continue;
            if (floor_mod(s - xi * t, static_cast<i64>(k)) != 0) continue;
            const i64 n = s * s + t * t;
            if (best < 0 || n < best) best = n;
        }
    return std::sqrt(static_cast<double>(best));
}

} // namespace

TEST_CASE("lambda1 examples") {
    auto a = lambda1(7, 3);
    CHECK(a.lambda1 == doctest::Approx(std::sqrt(5.0)));
    CHECK(a.s == -1);
    CHECK(a.t == 2);
    auto b = lambda1(5, 2);
    CHECK(b.lambda1 == doctest::Approx(std::sqrt(5.0)));
    CHECK(b.s == 2);
    CHECK(b.t == 1);
    auto c = lambda1(11, 0);
    CHECK(c.lambda1 == doctest::Approx(1));
    CHECK(c.s == 0);
    CHECK(c.t == 1);
}

TEST_CASE("lambda1 matches exhaustive search and reduced bases are unimodular") {
    for (u64 k = 1; k <= 150; ++k) {
        for (i64 xi = 0; xi < static_cast<i64>(k); ++xi) {
            const auto r = lambda1(k, xi);
            REQUIRE(r.lambda1 == doctest::Approx(shortest_by_search(k, xi)));
            const i64 det = r.b1s * r.b2t - r.b1t * r.b2s;
            REQUIRE(std::llabs(det) == static_cast<i64>(k));
            REQUIRE(floor_mod(r.s - xi * r.t, static_cast<i64>(k)) == 0);
            REQUIRE(r.lambda1 <= std::sqrt(2.0 * k / std::sqrt(3.0)) + 1e-9);
        }
    }
}

TEST_CASE("lambda_star_count examples") {
    // exhaustive count of coprime pairs in [-10, 10]^2
    CHECK(lambda_star_count(pell, 10, 0, 1, {0, 0}, 1) == 256);
    CHECK(lambda_star_count(pell, 100, 0, 5, {0, 0}, 1) == 0);
    u64 brute = 0;
    for (i64 s = -100; s <= 100; ++s)
        for (i64 t = -100; t <= 100; ++t)
            if (gcd_abs(s, t) == 1 && (s * s - 2 * t * t) % 7 == 0) ++brute;
    CHECK(lambda_star_count(pell, 100, 0, 7, {0, 0}, 1) == brute);
}

TEST_CASE("lambda_star_count agrees with the naive reference") {
    const std::vector<FormSpec> forms{pell, make_form_spec(1, 1, 5), make_form_spec(2, 3, -4)};
    for (const auto& F : forms) {
        for (u64 k : {1ull, 7ull, 17ull, 23ull, 119ull, 161ull}) {
            for (double z : {0.0, 30.0, 500.0}) {
                REQUIRE(lambda_star_count(F, 60, z, k, {0, 0}, 1) == lambda_star_count_naive(F, 60, z, k, {0, 0}, 1));
                REQUIRE(lambda_star_count(F, 60, z, k, {1, 1}, 10) ==
                        lambda_star_count_naive(F, 60, z, k, {1, 1}, 10));
            }
        }
    }
    for (i64 B = 1; B <= 200; B += 13) {
        u64 coprime = 0;
        for (i64 s = -B; s <= B; ++s)
            for (i64 t = -B; t <= B; ++t)
                if (gcd_abs(s, t) == 1) ++coprime;
        REQUIRE(lambda_star_count(pell, B, 0, 1, {0, 0}, 1) == coprime);
    }
}

TEST_CASE("class density and estimate") {
    CHECK(coprime_class_density(1) == doctest::Approx(6 / (M_PI * M_PI)).epsilon(1e-6));
    const double e1 = lambda_star_estimate(pell, 100, 0, 7, 1);
    CHECK(e1 == doctest::Approx(coprime_class_density(1) * 4e4 * 2 * (7.0 / 8.0) / 7));
    // the estimate scales with the volume
    const double ratio = lambda_star_estimate(make_form_spec(1, 0, 1), 20, 0, 5, 1) /
                         lambda_star_estimate(make_form_spec(1, 0, 1), 10, 0, 5, 1);
    CHECK(ratio == doctest::Approx(4));
    const double dense = lambda_star_estimate(pell, 2000, 0, 7, 1);
    const double exact = static_cast<double>(lambda_star_count(pell, 2000, 0, 7, {0, 0}, 1));
    CHECK(std::abs(exact - dense) / dense < 0.02);
}

TEST_CASE("inverse lambda1 sum") {
    double direct = 0;
    for (u64 k = 1; k <= 10; ++k)
        for (u64 xi : roots_mod(pell, k)) direct += 1.0 / lambda1(k, static_cast<i64>(xi)).lambda1;
    CHECK(inv_lambda1_sum(pell, 10) == doctest::Approx(direct));
    CHECK(inv_lambda1_sum(pell, 10) > 0);
    const double r2 = inv_lambda1_sum(pell, 100) / std::pow(100.0, 0.55);
    const double r3 = inv_lambda1_sum(pell, 1000) / std::pow(1000.0, 0.55);
    const double r4 = inv_lambda1_sum(pell, 10000) / std::pow(10000.0, 0.55);
    CHECK(r3 < r2);
    CHECK(r4 < r3);
}
