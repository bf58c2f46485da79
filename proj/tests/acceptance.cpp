// Acceptance suite: one PASS/FAIL line per criterion.
#include "normcount/arith.hpp"
#include "normcount/config.hpp"
#include "normcount/engine.hpp"
#include "normcount/fields.hpp"
#include "normcount/forms.hpp"
#include "normcount/lattices.hpp"
#include "normcount/series.hpp"
#include "normcount/sieve.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <thread>
#include <vector>

using namespace normcount;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void run(int id, const char* name, double budget_s, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (dt > budget_s) {
        o.pass = false;
        o.detail += " [over time budget " + std::to_string(budget_s) + " s]";
    }
    if (!o.pass) ++failures;
    std::printf("%s %2d %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), dt);
    std::fflush(stdout);
}

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

const FormSpec shipped_form = make_form_spec(1, 0, -2);
FieldSpec q9() { return make_field_spec(9, {1, 8}, true); }
FieldSpec q8() { return make_field_spec(8, {1}, true); }

Outcome c1() {
    const AbelianField L(make_field_spec(4, {1}, true));
    const int K = 10000;
    std::vector<u64> reps(K + 1, 0);
    for (i64 a = -100; a <= 100; ++a) {
        for (i64 b = -100; b <= 100; ++b) {
            const i64 k = a * a + b * b;
            if (k >= 1 && k <= K) ++reps[k];
        }
    }
    for (int k = 1; k <= K; ++k) {
        if (reps[k] % 4 != 0 || L.r_L(static_cast<u64>(k)) != static_cast<i64>(reps[k] / 4)) {
            return {false, "mismatch at k = " + std::to_string(k)};
        }
    }
    return {true, "r_L(k) = #{a^2 + b^2 = k} / 4 for all k <= 10^4"};
}

Outcome c2() {
    const AbelianField L(q9());
    int checked = 0;
    for (u64 p : primes_up_to(10000)) {
        if (p == 3) continue;
        const bool norm = L.is_norm_prime(p);
        const bool congr = p % 9 == 1 || p % 9 == 8;
        std::complex<double> s = 0;
        for (std::size_t i = 0; i < L.characters().size(); ++i) s += L.char_value(i, static_cast<i64>(p));
        const double avg = s.real() / 3.0;
        const bool by_chars = std::abs(avg - 1.0) < 1e-9;
        if (!by_chars && std::abs(avg) > 1e-9) return {false, "character average not in {0,1} at p = " + std::to_string(p)};
        if (norm != congr || norm != by_chars) return {false, "disagreement at p = " + std::to_string(p)};
        ++checked;
    }
    return {true, std::to_string(checked) + " primes: norm <=> p = +-1 mod 9 <=> (1/3) sum chi(p) = 1"};
}

Outcome c3() {
    const std::vector<FormSpec> forms{shipped_form, make_form_spec(1, 1, 5), make_form_spec(1, 3, -5)};
    int cases = 0;
    for (const auto& F : forms) {
        const i64 D = F.disc();
        const u64 aD = static_cast<u64>(D < 0 ? -D : D);
        for (u64 p : primes_up_to(200)) {
            // rho^-(p^nu) = rho^-(p) for p not dividing disc F(0, 1)
            if (aD % p != 0 && floor_mod(F.c, static_cast<i64>(p)) != 0) {
                u64 base = 0;
                u64 pn = 1;
                for (int nu = 1; nu <= 3; ++nu) {
                    pn *= p;
                    u64 cnt = 0;
                    for (u64 x = 0; x < pn; ++x) {
                        const i128 v = F.eval(static_cast<i64>(x), 1);
                        if (v % static_cast<i128>(pn) == 0) ++cnt;
                    }
                    if (nu == 1) base = cnt;
                    if (cnt != base || rho_minus_pp(F, p, nu) != cnt) {
                        return {false, F.to_string() + ": rho^- mismatch at p = " + std::to_string(p)};
                    }
                    ++cases;
                }
            }
            // rho_F(p) = 1 + (p - 1) rho^-(p) for p not dividing 2 disc
            if (p != 2 && aD % p != 0) {
                u64 full = 0;
                for (u64 x = 0; x < p; ++x) {
                    for (u64 y = 0; y < p; ++y) {
                        if (F.eval(static_cast<i64>(x), static_cast<i64>(y)) % static_cast<i128>(p) == 0) ++full;
                    }
                }
                if (full != 1 + (p - 1) * rho_minus_pp(F, p, 1) || rho_full_pp(F, p, 1) != full) {
                    return {false, F.to_string() + ": rho_F identity fails at p = " + std::to_string(p)};
                }
                ++cases;
            }
        }
    }
    return {true, std::to_string(cases) + " exhaustive scans over 3 forms"};
}

Outcome c4() {
    const double z = 30, y = std::pow(z, 6);
    const auto lo = beta_weights(y, 1, SieveSign::lower, z);
    const auto up = beta_weights(y, 1, SieveSign::upper, z);
    const bool ok = check_weights(lo, 100000) && check_weights(up, 100000);
    return {ok, "lambda^- support " + std::to_string(lo.support.size()) + ", lambda^+ support " +
                    std::to_string(up.support.size()) + ", n <= 10^5"};
}

Outcome c5() {
    const double z = 30, y = std::pow(z, 6);
    const auto lo = beta_weights(y, 1, SieveSign::lower, z);
    const auto up = beta_weights(y, 1, SieveSign::upper, z);
    const auto r = fundamental_lemma_check([](u64 p) { return 1.0 / static_cast<double>(p); }, up, lo, z);
    const bool ok = r.ratio_lower >= 0.95 && r.ratio_lower <= 1.05 && r.ratio_upper >= 0.95 && r.ratio_upper <= 1.05 &&
                    r.ratio_lower <= r.ratio_upper;
    return {ok, "ratio^- = " + fmt("%.10f", r.ratio_lower) + ", ratio^+ = " + fmt("%.10f", r.ratio_upper)};
}

Outcome c6() {
    const AbelianField L(q9());
    const FormSpec& F = shipped_form;
    const u64 W = compute_W(L, F).W;
    const auto v0 = v0_weight();
    const double c = c_FL(L, F, v0, W, 10'000'000).value;
    std::string detail = "W = " + std::to_string(W);
    bool ok = true;
    const std::vector<std::pair<u64, u64>> cases{{1, 1}, {7, 1}, {1, 7}, {17, 1}, {1, 17}};
    for (auto [a, k1] : cases) {
        const double S = frakS(L, F, 1e6, a, k1, v0, W);
        const double u = u_FL(L, F, v0, W, factor(a * k1));
        const double sig = sigma_k(L, F, k1, a, v0, W, 1'000'000'000).value;
        const double target = c * u * sig;
        const double rel = std::abs(S - target) / std::abs(target);
        ok = ok && rel < 0.02;
        detail += "; (" + std::to_string(a) + "," + std::to_string(k1) + ") rel " + fmt("%.4f", rel);
    }
    return {ok, detail};
}

Outcome c7() {
    const FormSpec& F = shipped_form;
    const i64 B = 10000;
    std::string detail;
    bool ok = true;
    for (u64 k : {1, 7, 17, 119}) {
        const double cnt = static_cast<double>(lambda_star_count(F, B, 0, k, {0, 0}, 1));
        const double main = lambda_star_estimate(F, B, 0, k, 1);
        const double rel = std::abs(cnt - main) / main;
        ok = ok && rel <= 0.02;
        detail += (detail.empty() ? "" : "; ") + std::string("k=") + std::to_string(k) + " rel " + fmt("%.5f", rel);
    }
    return {ok, "W = 1; " + detail};
}

Outcome c8() {
    const FormSpec& F = shipped_form;
    const AbelianField L9(q9()), L8(q8());
    const std::vector<u64> cut{10000, 100000, 1000000};
    const auto mr = mertens_rho_at(F, cut);
    const auto mt = mertens_twisted_at(L9, F, cut);
    const auto mt8 = mertens_twisted_at(L8, F, cut);
    const double d1 = std::abs(mr[2].constant - mr[1].constant);
    const double d2 = std::abs(mt[2].value - mt[1].value);
    const double d3 = std::abs(mt8[2].constant - mt8[1].constant);
    const bool grows = mt8[2].value > mt8[1].value && mt8[1].value > mt8[0].value;
    const bool ok = d1 < 0.05 && d2 < 0.05 && d3 < 0.05 && grows;
    return {ok, "untwisted |delta const| " + fmt("%.4f", d1) + ", twisted |delta| " + fmt("%.4f", d2) +
                    ", reducible |delta const| " + fmt("%.4f", d3) + ", reducible sum " + fmt("%.3f", mt8[0].value) +
                    " -> " + fmt("%.3f", mt8[2].value)};
}

std::vector<BoxCounts> shipped_counts;

Outcome c9() {
    const AbelianField L(q9());
    const FormSpec& F = shipped_form;
    SweepConfig cfg;
    cfg.W = compute_W(L, F).W;
    cfg.base = find_base_point(L, F, cfg.W);
    cfg.threads = 1;
    shipped_counts = count_all(L, F, {256, 512, 1024, 2048, 4096}, cfg);
    std::vector<std::pair<double, double>> pts;
    std::string detail;
    for (const auto& c : shipped_counts) pts.push_back({static_cast<double>(c.B), static_cast<double>(c.exact_norm)});
    const auto fit = asymptotic_fit(pts, 1, 3);
    for (std::size_t i = 0; i < fit.c.size(); ++i) detail += fmt("%.4f ", fit.c[i]);
    return {fit.spread < 1.30, "c_B = " + detail + "spread " + fmt("%.4f", fit.spread) + " (single-threaded)"};
}

Outcome c10() {
    if (shipped_counts.empty()) return {false, "criterion 9 produced no counts"};
    std::string detail;
    bool ok = true;
    for (const auto& c : shipped_counts) {
        ok = ok && c.detector <= c.exact_norm && c.exact_norm <= c.loc_upper;
        detail += (detail.empty() ? "" : "; ") + std::string("B=") + std::to_string(c.B) + " " +
                  std::to_string(c.detector) + " <= " + std::to_string(c.exact_norm) + " <= " +
                  std::to_string(c.loc_upper) + " (varpi sum " + std::to_string(c.varpi_sum) + ")";
    }
    return {ok, detail};
}

Outcome c11() {
    const AbelianField L(q8());
    const FieldSpec s0 = construct_L0(L, shipped_form);
    if (s0.q != 4 || s0.H != std::vector<u64>{1}) return {false, "L0 = (" + std::to_string(s0.q) + ", ...) != (4,{1})"};
    const AbelianField L0(s0);
    int checked = 0;
    for (u64 p : primes_up_to(10000)) {
        if (p % 8 != 1) continue;
        if (L.r_L(p) != 2 * L0.r_L(p)) return {false, "identity fails at p = " + std::to_string(p)};
        ++checked;
    }
    return {true, "L0 = (4,{1}); r_L(p) = 2 r_L0(p) on " + std::to_string(checked) + " primes p = 1 mod 8"};
}

Outcome c12() {
    const AbelianField L(q9());
    const std::vector<u64> cut{1000, 10000, 100000, 1000000};
    const auto nt = nt_product_at(L, shipped_form, cut);
    double lo = nt[0].diagnostic, hi = lo;
    for (const auto& x : nt) {
        lo = std::min(lo, x.diagnostic);
        hi = std::max(hi, x.diagnostic);
    }
    const double drift = hi / lo - 1;
    const auto ch = chebotarev_slope(L, shipped_form, cut);
    const double slope_err = std::abs(ch.slope - ch.expected) / ch.expected;
    return {drift < 0.15 && slope_err < 0.10,
            "diagnostic drift " + fmt("%.4f", drift) + ", slope " + fmt("%.4f", ch.slope) + " vs r/n " +
                fmt("%.4f", ch.expected)};
}

Outcome c13() {
    std::string detail;
    for (const auto& spec : {q9(), q8()}) {
        const AbelianField L(spec);
        const FormSpec& F = shipped_form;
        const u64 W = compute_W(L, F).W;
        const BasePoint base = find_base_point(L, F, W);
        for (i64 B : {50, 200}) {
            std::vector<std::vector<SweepPoint>> streams;
            std::vector<u64> exact, det;
            for (Strategy s : {Strategy::naive, Strategy::spf_table, Strategy::row_sieve}) {
                SweepConfig cfg;
                cfg.B = B;
                cfg.strategy = s;
                streams.push_back(collect_stream(F, cfg));
                exact.push_back(count_NFL(L, F, cfg, CountMode::exact_norm));
                SweepConfig dc = cfg;
                dc.W = W;
                dc.base = base;
                det.push_back(count_NFL(L, F, dc, CountMode::squarefree_detector));
            }
            for (std::size_t i = 1; i < streams.size(); ++i) {
                if (streams[i].size() != streams[0].size()) return {false, "stream lengths differ"};
                for (std::size_t j = 0; j < streams[0].size(); ++j) {
                    if (!same_point(streams[i][j], streams[0][j])) return {false, "streams differ"};
                }
                if (exact[i] != exact[0] || det[i] != det[0]) return {false, "counts differ"};
            }
            // naive oracle: factor every value independently
            for (const auto& pt : streams[0]) {
                if (pt.factorization() != factor(pt.abs_value)) return {false, "stream disagrees with factor()"};
            }
            detail += (detail.empty() ? "" : "; ") + field_to_string(spec) + " B=" + std::to_string(B) + " " +
                      std::to_string(streams[0].size()) + " points";
        }
    }
    return {true, detail};
}

} // namespace

int main() {
    run(1, "r_L oracle equivalence", 5, c1);
    run(2, "norm detection", 1, c2);
    run(3, "Hensel/rho suite", 10, c3);
    run(4, "sieve weights", 10, c4);
    run(5, "fundamental lemma ratio", 10, c5);
    run(6, "Euler-product limit", 120, c6);
    run(7, "lattice estimate", 120, c7);
    run(8, "Mertens constants", 60, c8);
    run(9, "main theorem order", 600, c9);
    run(10, "upper/lower consistency", 600, c10);
    run(11, "L0 identity", 60, c11);
    run(12, "Nair-Tenenbaum product", 120, c12);
    run(13, "strategy equivalence", 600, c13);
    std::printf("%d of 13 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
