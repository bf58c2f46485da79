#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "normcount/arith.hpp"
#include "normcount/engine.hpp"
#include "normcount/errors.hpp"
#include "normcount/fields.hpp"
#include "normcount/forms.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace normcount;

namespace {

AbelianField cubic9() { return AbelianField(make_field_spec(9, {1, 8}, true)); }
AbelianField zeta8() { return AbelianField(make_field_spec(8, {1}, true)); }

const FormSpec pell = make_form_spec(1, 0, -2);

u64 uabs128(i128 v) { return static_cast<u64>(v < 0 ? -v : v); }

// f_p | v_p for every p, read off splitting data
bool norm_by_splitting(const AbelianField& L, u64 v) {
    for (const auto& pp : factor(v).factors)
        if (pp.e % L.splitting_data(pp.p).f != 0) return false;
    return true;
}

bool varpi_by_splitting(const AbelianField& L, u64 v) {
    for (const auto& pp : factor(v).factors) {
        const auto sd = L.splitting_data(pp.p);
        if (pp.e % (sd.e * sd.f) != 0) return false;
    }
    return true;
}

struct Naive {
    u64 exact = 0;
    u64 loc = 0;
    u64 varpi = 0;
};

Naive naive_counts(const AbelianField& L, const FormSpec& F, i64 B, bool negatives_ok) {
    Naive n;
    for (i64 s = -B; s <= B; ++s)
        for (i64 t = -B; t <= B; ++t) {
            const i128 val = F.eval(s, t);
            if (val == 0) continue;
            const u64 v = uabs128(val);
            const bool sign_ok = val > 0 || negatives_ok;
            const bool norm = norm_by_splitting(L, v);
            if (norm && sign_ok) ++n.exact;
            if (norm && sign_ok) ++n.loc;
            if (varpi_by_splitting(L, v)) ++n.varpi;
        }
    return n;
}

SweepConfig box(i64 B, Strategy s = Strategy::automatic, unsigned threads = 1) {
    SweepConfig c;
    c.B = B;
    c.strategy = s;
    c.threads = threads;
    return c;
}

} // namespace

TEST_CASE("strategy names") {
    for (auto s : {Strategy::automatic, Strategy::naive, Strategy::spf_table, Strategy::row_sieve})
        CHECK(parse_strategy(to_string(s)) == s);
    CHECK_THROWS_AS(parse_strategy("fast"), InvalidArgument);
    for (auto m : {CountMode::exact_norm, CountMode::squarefree_detector}) CHECK(parse_count_mode(to_string(m)) == m);
    for (auto p : {NegativeNorms::automatic, NegativeNorms::assume_ok, NegativeNorms::reject})
        CHECK(parse_negative_norms(to_string(p)) == p);
}

TEST_CASE("factorization streams agree across strategies") {
    for (const auto& F : {pell, make_form_spec(1, 1, 5), make_form_spec(2, 3, -4)}) {
        const auto naive = collect_stream(F, box(120, Strategy::naive));
        const auto spf = collect_stream(F, box(120, Strategy::spf_table));
        const auto row = collect_stream(F, box(120, Strategy::row_sieve));
        REQUIRE(naive.size() == spf.size());
        REQUIRE(naive.size() == row.size());
        for (std::size_t i = 0; i < naive.size(); ++i) {
            REQUIRE(same_point(naive[i], spf[i]));
            REQUIRE(same_point(naive[i], row[i]));
        }
    }
}

TEST_CASE("stream points carry the factorization of |F|") {
    const auto pts = collect_stream(pell, box(50, Strategy::row_sieve));
    CHECK(pts.size() == 101u * 101u - 1);
    for (const auto& pt : pts) {
        REQUIRE(pt.value == pell.eval(pt.s, pt.t));
        REQUIRE(pt.abs_value == uabs128(pt.value));
        REQUIRE(pt.factorization() == factor(pt.abs_value));
        REQUIRE(pt.squarefree() == is_squarefree(factor(pt.abs_value)));
        if (pt.s == 1 && pt.t == 1) CHECK(pt.nf == 0);
    }
}

TEST_CASE("restricted sweeps") {
    SweepConfig c = box(80, Strategy::row_sieve);
    c.coprime_only = true;
    c.squarefree_only = true;
    c.W = 630;
    c.base = {1, 0};
    for (const auto& pt : collect_stream(pell, c)) {
        REQUIRE(gcd_abs(pt.s, pt.t) == 1);
        REQUIRE(pt.squarefree());
        REQUIRE(floor_mod(pt.s - 1, 630) == 0);
        REQUIRE(floor_mod(pt.t, 630) == 0);
    }
    c.strategy = Strategy::naive;
    const auto a = collect_stream(pell, c);
    c.strategy = Strategy::spf_table;
    CHECK(a.size() == collect_stream(pell, c).size());
}

TEST_CASE("counts are independent of the thread count") {
    const auto L = cubic9();
    for (auto s : {Strategy::spf_table, Strategy::row_sieve}) {
        const auto one = count_all(L, pell, {64, 200, 300}, box(0, s, 1));
        const auto four = count_all(L, pell, {64, 200, 300}, box(0, s, 4));
        const auto many = count_all(L, pell, {64, 200, 300}, box(0, s, 13));
        for (std::size_t i = 0; i < one.size(); ++i) {
            CHECK(one[i].exact_norm == four[i].exact_norm);
            CHECK(one[i].loc_upper == many[i].loc_upper);
            CHECK(one[i].varpi_sum == many[i].varpi_sum);
            CHECK(one[i].detector == four[i].detector);
        }
    }
}

TEST_CASE("count_NFL against the splitting-data oracle") {
    const auto c = cubic9();
    const auto n = naive_counts(c, pell, 100, true);
    CHECK(count_NFL(c, pell, box(100), CountMode::exact_norm) == n.exact);
    CHECK(count_loc_upper(c, pell, box(100)) == n.loc);
    CHECK(count_varpi_sum(c, pell, box(100)) == n.varpi);

    const auto z = zeta8();
    const auto m = naive_counts(z, pell, 100, false);
    CHECK(count_NFL(z, pell, box(100), CountMode::exact_norm) == m.exact);
    CHECK(count_loc_upper(z, pell, box(100)) == m.loc);
    CHECK(count_varpi_sum(z, pell, box(100)) == m.varpi);

    for (auto s : {Strategy::naive, Strategy::spf_table, Strategy::row_sieve})
        CHECK(count_NFL(c, pell, box(100, s), CountMode::exact_norm) == n.exact);
}

TEST_CASE("count_all matches separate sweeps") {
    const auto c = cubic9();
    SweepConfig cfg = box(0);
    cfg.W = 630;
    cfg.base = {1, 0};
    const auto all = count_all(c, pell, {30, 90, 150}, cfg);
    REQUIRE(all.size() == 3);
    for (const auto& bc : all) {
        SweepConfig one = cfg;
        one.B = bc.B;
        CHECK(bc.points == static_cast<u64>((2 * bc.B + 1) * (2 * bc.B + 1) - 1));
        CHECK(bc.exact_norm == count_NFL(c, pell, box(bc.B), CountMode::exact_norm));
        CHECK(bc.detector == count_NFL(c, pell, one, CountMode::squarefree_detector));
        CHECK(bc.loc_upper == count_loc_upper(c, pell, box(bc.B)));
        CHECK(bc.varpi_sum == count_varpi_sum(c, pell, box(bc.B)));
    }
}

TEST_CASE("count properties") {
    const auto c = cubic9();
    // F(1, 1) = -1 is a norm
    CHECK(count_NFL(c, pell, box(1), CountMode::exact_norm) >= 1);
    const auto pts = collect_stream(pell, box(1));
    bool seen = false;
    for (const auto& pt : pts)
        if (pt.s == 1 && pt.t == 1) seen = is_norm_value(c, pt, true);
    CHECK(seen);

    u64 prev = 0;
    for (i64 B = 2; B <= 120; B += 7) {
        const u64 n = count_NFL(c, pell, box(B), CountMode::exact_norm);
        REQUIRE(n >= prev);
        prev = n;
    }
    const auto counts = count_all(c, pell, {50, 150, 250}, box(0));
    for (const auto& bc : counts) {
        CHECK(bc.detector <= bc.exact_norm);
        CHECK(bc.exact_norm <= bc.loc_upper);
    }
}

TEST_CASE("detector undercounts the exact count on the same class") {
    const auto c = cubic9();
    SweepConfig cls = box(150);
    cls.W = 630;
    cls.base = {1, 0};
    const u64 detector = count_NFL(c, pell, cls, CountMode::squarefree_detector);
    cls.coprime_only = true;
    u64 exact_in_class = 0;
    for (const auto& pt : collect_stream(pell, cls))
        if (is_norm_value(c, pt, true)) ++exact_in_class;
    CHECK(detector > 0);
    CHECK(detector <= exact_in_class);
}

TEST_CASE("detector identity mu^2 1_N = mu^2 r_L / n^omega on the class") {
    const auto c = cubic9();
    const u64 W = 630;
    const BasePoint base{1, 0};
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<i64> U(-3000, 3000);
    int tested = 0;
    for (int i = 0; i < 10000; ++i) {
        const i64 s = base.s + static_cast<i64>(W) * U(rng);
        const i64 t = base.t + static_cast<i64>(W) * U(rng);
        if (gcd_abs(s, t) != 1) continue;
        const u64 v = uabs128(pell.eval(s, t));
        const auto f = factor(v);
        const double mu2 = is_squarefree(f) ? 1.0 : 0.0;
        bool all_split = true;
        for (const auto& pp : f.factors) all_split = all_split && c.is_norm_prime(pp.p);
        const double lhs = mu2 * (all_split ? 1.0 : 0.0);
        const double rhs =
            mu2 * static_cast<double>(c.r_L(f)) / std::pow(3.0, static_cast<double>(f.factors.size()));
        REQUIRE(lhs == doctest::Approx(rhs));
        ++tested;
    }
    CHECK(tested > 5000);
}

TEST_CASE("hypothesis checks") {
    const AbelianField no_pid(make_field_spec(9, {1, 8}, false));
    CHECK_THROWS_AS(count_NFL(no_pid, pell, box(10), CountMode::exact_norm), HypothesisError);
    // Q(sqrt 2) is totally real of even degree: the sign of units decides
    const AbelianField real_quadratic(make_field_spec(8, {1, 7}, true));
    CHECK_THROWS_AS(count_NFL(real_quadratic, pell, box(10), CountMode::exact_norm), HypothesisError);
    CHECK_NOTHROW(
        count_NFL(real_quadratic, pell, box(10), CountMode::exact_norm, NegativeNorms::assume_ok));
    CHECK(negative_values_allowed(cubic9(), NegativeNorms::automatic));
    CHECK_FALSE(negative_values_allowed(zeta8(), NegativeNorms::automatic));
    CHECK_FALSE(negative_values_allowed(cubic9(), NegativeNorms::reject));
    const u64 rejected = count_NFL(cubic9(), pell, box(40), CountMode::exact_norm, NegativeNorms::reject);
    CHECK(rejected < count_NFL(cubic9(), pell, box(40), CountMode::exact_norm));
}

TEST_CASE("asymptotic fit") {
    std::vector<std::pair<double, double>> synthetic;
    for (double B : {100.0, 200.0, 400.0, 800.0}) synthetic.push_back({B, B * B});
    const auto fit = asymptotic_fit(synthetic, 2, 2);
    CHECK(fit.exponent == 0);
    CHECK(fit.spread == doctest::Approx(1));
    for (double cb : fit.c) CHECK(cb == doctest::Approx(1));
    const auto cubic = asymptotic_fit({{256, 100}, {512, 300}, {1024, 1000}}, 1, 3);
    CHECK(cubic.exponent == doctest::Approx(2.0 / 3));
    CHECK(cubic.c[0] == doctest::Approx(100 * std::pow(std::log(256.0), 2.0 / 3) / (256.0 * 256)));
    CHECK_THROWS_AS(asymptotic_fit({{1, 1}, {2, 2}}, 1, 3), InvalidArgument);
}

TEST_CASE("Nair-Tenenbaum product and Chebotarev slope") {
    const auto c = cubic9();
    const auto prods = nt_product_at(c, pell, {1000, 10000, 100000});
    for (const auto& p : prods) {
        CHECK(p.product > 0);
        CHECK(p.product <= 1);
        CHECK(p.diagnostic == doctest::Approx(p.product * std::pow(std::log(static_cast<double>(p.B)), 2.0 / 3)));
    }
    CHECK(prods[0].product >= prods[2].product);
    CHECK(nt_product(c, pell, 10000).product == doctest::Approx(prods[1].product));
    const auto fit = chebotarev_slope(c, pell, {1000, 10000, 100000, 1000000});
    CHECK(fit.expected == doctest::Approx(1.0 / 3));
    CHECK(std::abs(fit.slope - fit.expected) < 0.1 * fit.expected);

    CHECK(ols_slope({1, 2, 3, 4}, {3, 5, 7, 9}) == doctest::Approx(2));
}
