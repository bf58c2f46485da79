#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "normcount/errors.hpp"
#include "normcount/form_spec.hpp"
#include "normcount/forms.hpp"
#include "normcount/regions.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace normcount;

namespace {

struct MonteCarlo {
    double mean = 0;
    double stderr_ = 0;
};

MonteCarlo mc_volume(const FormSpec& F, double B, double z, int samples, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-B, B);
    long hits = 0;
    for (int i = 0; i < samples; ++i) {
        const double s = U(rng), t = U(rng);
        if (std::abs(F.a * s * s + F.b * s * t + F.c * t * t) >= z) ++hits;
    }
    const double area = 4 * B * B;
    const double p = double(hits) / samples;
    return {area * p, area * std::sqrt(p * (1 - p) / samples)};
}

} // namespace

TEST_CASE("volume examples") {
    const FormSpec disk = make_form_spec(1, 0, 1);
    CHECK(vol_region(disk, 10, 0) == doctest::Approx(400).epsilon(1e-9));
    CHECK(vol_region(disk, 10, 50) == doctest::Approx(400 - 50 * M_PI).epsilon(1e-9));
    CHECK(vol_region(disk, 10, 201) == doctest::Approx(0));
    CHECK(delta_vol(disk, 10, 50, 100) == doctest::Approx(50 * M_PI).epsilon(1e-9));
    CHECK_THROWS_AS(delta_vol(disk, 10, 100, 50), InvalidArgument);
}

TEST_CASE("volume agrees with Monte Carlo") {
    const FormSpec pell = make_form_spec(1, 0, -2);
    const auto mc = mc_volume(pell, 10, 10, 10000000, 1);
    CHECK(std::abs(vol_region(pell, 10, 10) - mc.mean) <= 3 * mc.stderr_);

    const std::vector<FormSpec> forms{make_form_spec(1, 1, 5), make_form_spec(2, 3, -4), make_form_spec(1, 3, -5)};
    unsigned seed = 2;
    for (const auto& F : forms) {
        for (double B : {3.0, 20.0}) {
            for (double frac : {0.05, 0.3, 0.7}) {
                const double z = frac * b_F(F) * B * B;
                const auto m = mc_volume(F, B, z, 1000000, seed++);
                CHECK(std::abs(vol_region(F, B, z) - m.mean) <= 4 * m.stderr_ + 1e-9);
            }
        }
    }
}

TEST_CASE("closed form and quadrature agree on diagonal forms") {
    for (const auto& F : {make_form_spec(1, 0, -2), make_form_spec(3, 0, 5), make_form_spec(-2, 0, 7)}) {
        for (double z : {0.0, 1.0, 17.5, 300.0, 5000.0}) {
            const double a = vol_region_closed_form(F, 30, z);
            const double b = vol_region_quadrature(F, 30, z);
            CHECK(std::abs(a - b) <= 1e-6 * 900);
        }
    }
}

TEST_CASE("monotone in z and telescoping") {
    const std::vector<FormSpec> forms{make_form_spec(1, 0, -2), make_form_spec(1, 1, 5), make_form_spec(2, 3, -4)};
    for (const auto& F : forms) {
        double prev = vol_region(F, 50, 0);
        for (double z = 10; z <= b_F(F) * 2500 + 10; z += 97) {
            const double v = vol_region(F, 50, z);
            REQUIRE(v <= prev + 1e-6);
            prev = v;
        }
        const double a = delta_vol(F, 50, 3, 40);
        const double b = delta_vol(F, 50, 40, 900);
        CHECK(a + b == doctest::Approx(delta_vol(F, 50, 3, 900)).epsilon(1e-9));
        CHECK(a >= 0);
    }
}

TEST_CASE("definite forms lose at most V z near the origin") {
    const FormSpec F = make_form_spec(1, 1, 5);
    const double V = definite_unit_area(F);
    CHECK(V == doctest::Approx(2 * M_PI / std::sqrt(19.0)));
    for (double z : {1.0, 10.0, 100.0, 1000.0}) CHECK(4e4 - vol_region(F, 100, z) <= V * z + 1e-6);
}

TEST_CASE("indefinite sublevel and strip bounds") {
    const FormSpec pell = make_form_spec(1, 0, -2);
    for (double B : {10.0, 100.0}) {
        for (double z : {0.5, 1.0, 10.0}) {
            CHECK(4 * B * B - vol_region(pell, B, z) <= sublevel_area_bound(pell, B, z) + 1e-9);
        }
    }
    const double B = 10, z = 1;
    double worst = 0;
    for (int l = 1; l <= 50; ++l) {
        const double d = delta_vol(pell, B, l * z, (l + 1) * z);
        CHECK(d <= strip_area_bound(pell, B, z, l) + 1e-9);
        worst = std::max(worst, d / (z * std::log(B)));
    }
    CHECK(worst < 10);
}
