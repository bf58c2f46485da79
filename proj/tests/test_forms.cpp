#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "normcount/arith.hpp"
#include "normcount/errors.hpp"
#include "normcount/fields.hpp"
#include "normcount/forms.hpp"

#include <random>
#include <vector>

using namespace normcount;

namespace {

u64 brute_roots(const FormSpec& F, u64 k) {
    u64 c = 0;
    for (u64 x = 0; x < k; ++x) {
        const i128 v = F.eval(static_cast<i64>(x), 1) % static_cast<i128>(k);
        if (v == 0) ++c;
    }
    return c;
}

u64 brute_pairs(const FormSpec& F, u64 k) {
    u64 c = 0;
    for (u64 x = 0; x < k; ++x)
        for (u64 y = 0; y < k; ++y)
            if (F.eval(static_cast<i64>(x), static_cast<i64>(y)) % static_cast<i128>(k) == 0) ++c;
    return c;
}

u64 uabs(i64 x) { return x < 0 ? static_cast<u64>(-x) : static_cast<u64>(x); }

const FormSpec pell = make_form_spec(1, 0, -2);

} // namespace

TEST_CASE("form spec") {
    CHECK_THROWS_AS(make_form_spec(1, 2, 1), InvalidArgument);
    CHECK_THROWS_AS(make_form_spec(1, 0, -4), InvalidArgument);
    CHECK_THROWS_AS(make_form_spec(0, 0, 0), InvalidArgument);
    CHECK(pell.disc() == 8);
    CHECK(pell.to_string() == "s^2 - 2t^2");
    CHECK(make_form_spec(1, 1, 5).to_string() == "s^2 + st + 5t^2");
}

TEST_CASE("b_F") {
    CHECK(b_F(pell) == doctest::Approx(2));
    CHECK(b_F(make_form_spec(1, 0, 1)) == doctest::Approx(2));
    CHECK(b_F(make_form_spec(1, 1, 1)) == doctest::Approx(3));
    // grid oracle
    for (const auto& F : {make_form_spec(2, 3, -4), make_form_spec(3, -1, 7), make_form_spec(-1, 4, 1)}) {
        double best = 0;
        const int N = 400;
        for (int i = -N; i <= N; ++i)
            for (int j = -N; j <= N; ++j) {
                const double s = double(i) / N, t = double(j) / N;
                best = std::max(best, std::abs(F.a * s * s + F.b * s * t + F.c * t * t));
            }
        CHECK(b_F(F) >= best - 1e-12);
        CHECK(b_F(F) <= best * (1 + 1e-4) + 1e-4);
    }
}

TEST_CASE("rho_minus examples") {
    CHECK(rho_minus_pp(pell, 7, 1) == 2);
    CHECK(rho_minus_pp(pell, 7, 2) == 2);
    CHECK(rho_minus_pp(pell, 5, 1) == 0);
    CHECK(rho_minus(pell, u64{119}) == 4);
    CHECK(rho_minus(pell, u64{119}, 7) == 2);
    CHECK(rho_minus(pell, u64{1}, 5) == 1);
    CHECK(quadratic_roots_mod_prime_power(1, 0, -2, 7, 2) == std::vector<u64>{10, 39});
}

TEST_CASE("rho_full examples") {
    CHECK(rho_full(pell, 7) == 13);
    CHECK(rho_full(pell, 5) == 1);
    CHECK(rho_full(pell, 1) == 1);
}

TEST_CASE("roots_mod examples") {
    CHECK(roots_mod(pell, u64{7}) == std::vector<u64>{3, 4});
    CHECK(roots_mod(pell, u64{17}) == std::vector<u64>{6, 11});
    const auto r = roots_mod(pell, u64{119});
    REQUIRE(r.size() == 4);
    for (u64 x : r) {
        CHECK(x % 7 >= 3);
        CHECK(x % 7 <= 4);
        CHECK((x % 17 == 6 || x % 17 == 11));
    }
}

TEST_CASE("root counts agree with exhaustive scans") {
    const std::vector<FormSpec> forms{pell, make_form_spec(1, 0, 1), make_form_spec(1, 1, 5), make_form_spec(1, 3, -5),
                                      make_form_spec(2, 3, -4), make_form_spec(9, 0, -2)};
    for (const auto& F : forms) {
        for (u64 k = 1; k <= 400; ++k) {
            REQUIRE(rho_minus(F, k) == brute_roots(F, k));
            REQUIRE(roots_mod(F, k).size() == brute_roots(F, k));
        }
        for (u64 p : primes_up_to(13))
            for (int nu = 1; nu <= 4; ++nu) {
                u64 q = 1;
                for (int i = 0; i < nu; ++i) q *= p;
                if (q > 2500) break;
                REQUIRE(rho_minus_pp(F, p, nu) == brute_roots(F, q));
            }
        for (u64 k = 1; k <= 40; ++k) REQUIRE(rho_full(F, k) == brute_pairs(F, k));
    }
}

TEST_CASE("closed-form roots beyond the scan threshold") {
    // 67 | a, 71 | disc
    const std::vector<FormSpec> forms{pell, make_form_spec(67, 1, -3), make_form_spec(1, 0, -71),
                                      make_form_spec(3, 5, 11)};
    for (const auto& F : forms) {
        for (u64 p : primes_up_to(3000)) {
            if (p < 60) continue;
            REQUIRE(rho_minus_pp(F, p, 1) == brute_roots(F, p));
            REQUIRE(roots_mod(F, p).size() == brute_roots(F, p));
        }
        for (u64 p : {67ull, 71ull, 73ull}) REQUIRE(rho_minus_pp(F, p, 2) == brute_roots(F, p * p));
        REQUIRE(rho_minus_pp(F, 71, 3) == brute_roots(F, 71 * 71 * 71));
    }
}

TEST_CASE("Hensel stability and the pair-count identity") {
    const std::vector<FormSpec> forms{pell, make_form_spec(1, 1, 5), make_form_spec(3, -1, 7)};
    for (const auto& F : forms) {
        const u64 bad = uabs(F.disc()) * uabs(F.c) * 2;
        for (u64 p : primes_up_to(200)) {
            if (bad % p == 0) continue;
            const u64 r = rho_minus_pp(F, p, 1);
            for (int nu = 2; nu <= 3; ++nu) REQUIRE(rho_minus_pp(F, p, nu) == r);
            if (F.a % static_cast<i64>(p) != 0) REQUIRE(rho_full_pp(F, p, 1) == 1 + (p - 1) * r);
        }
    }
}

TEST_CASE("compute_W") {
    const AbelianField cubic(make_field_spec(9, {1, 8}, true));
    const auto M = compute_W(cubic, pell);
    CHECK(M.w0 == 9);
    CHECK(M.W == 630);
    CHECK_FALSE(M.reasons.empty());

    const AbelianField g(make_field_spec(4, {1}, true));
    const auto G = compute_W(g, make_form_spec(1, 0, 1), 5);
    CHECK(G.W == 60);

    // W only grows with w0_min
    CHECK(compute_W(cubic, pell, 20).W % 630 == 0);
}

TEST_CASE("base points") {
    const AbelianField cubic(make_field_spec(9, {1, 8}, true));
    CHECK(is_admissible_base_point(cubic, pell, 630, 1, 1));
    CHECK(is_admissible_base_point(cubic, pell, 630, 1, 0));
    // F(2, 1) = 2 is not a unit mod 630
    CHECK_FALSE(is_admissible_base_point(cubic, pell, 630, 2, 1));
    const auto b = find_base_point(cubic, pell, 630);
    CHECK(is_admissible_base_point(cubic, pell, 630, b.s, b.t));

    const AbelianField g(make_field_spec(4, {1}, true));
    const FormSpec sq = make_form_spec(1, 0, 1);
    CHECK(is_admissible_base_point(g, sq, 60, 1, 0));
    const auto gb = find_base_point(g, sq, 60);
    CHECK(is_admissible_base_point(g, sq, 60, gb.s, gb.t));

    // 3s^2 + 7t^2 = 3(s^2 + t^2) mod 4 is never 1 mod 4
    const FormSpec bad = make_form_spec(3, 0, 7);
    bool any = false;
    for (i64 s = 0; s < 4; ++s)
        for (i64 t = 0; t < 4; ++t) any = any || is_admissible_base_point(g, bad, 4, s, t);
    CHECK_FALSE(any);
    CHECK_THROWS_AS(find_base_point(g, bad, 4), HypothesisError);
}
