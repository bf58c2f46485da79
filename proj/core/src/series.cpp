#include "normcount/series.hpp"

#include "normcount/errors.hpp"
#include "normcount/forms.hpp"
#include "normcount/regions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace normcount {

namespace {

double binom(int n, int k) {
    double r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// d_{n-1}(p^e): bound for |psi_L(p^e)|
double divisor_bound(int n, int e) { return binom(e + n - 2, n - 2); }

u64 abs_u(i64 x) { return static_cast<u64>(x < 0 ? -x : x); }

int valuation(u64 n, u64 p) {
    if (n == 0) return 0;
    int v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

u64 gcd_product(u64 x, u64 y, u64 a) {
    // gcd(x * y, a)
    if (a == 0) return 0;
    return gcd(mulmod(x % a, y % a, a), a);
}

// rho^-(p^e) v(p) restricted to primes not dividing `exclude`, tabulated for k <= y
std::vector<double> rho_weight_table(const FormSpec& F, const LocalWeight& v, u64 exclude, u64 W, u64 y) {
    std::vector<double> t(y + 1, 0.0);
    if (y == 0) return t;
    t[1] = 1.0;
    const SpfTable spf(y);
    for (u64 k = 2; k <= y; ++k) {
        const u64 p = spf.spf(k);
        u64 m = k;
        int e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        if (W % p == 0) {
            t[k] = 0.0;
            continue;
        }
        if (m == 1) {
            t[k] = exclude % p == 0 ? 1.0 : static_cast<double>(rho_minus_pp(F, p, e)) * v.at_prime(p);
        } else {
            t[k] = t[k / m] * t[m];
        }
    }
    return t;
}

} // namespace

double LocalWeight::operator()(const Factorization& k) const {
    double r = 1.0;
    for (const auto& pp : k.factors) r *= at_prime(pp.p);
    return r;
}

double LocalWeight::restricted(const Factorization& k, u64 exclude) const {
    double r = 1.0;
    for (const auto& pp : k.factors) {
        if (exclude % pp.p != 0) r *= at_prime(pp.p);
    }
    return r;
}

LocalWeight unit_weight() { return {"1", [](u64) { return 1.0; }, 0.0}; }

LocalWeight v0_weight() {
    return {"v0", [](u64 p) { return 1.0 / (1.0 + 1.0 / static_cast<double>(p)); }, 1.0};
}

std::complex<double> local_psi_factor(const AbelianField& L, u64 p, double w) {
    return L.local_psi_factor(p, w);
}

double psi_local_series(const AbelianField& L, u64 p, double x) {
    if (!L.is_ramified(p)) return L.local_psi_factor(p, x).real();
    double s = 1.0, xn = 1.0;
    for (int nu = 1; nu < 200; ++nu) {
        xn *= x;
        if (xn * divisor_bound(L.degree(), nu) < 1e-18) break;
        s += static_cast<double>(L.psi_prime_power(p, nu)) * xn;
    }
    return s;
}

double c_FL_local(const AbelianField& L, const FormSpec& F, const LocalWeight& v, u64 p) {
    const double pd = static_cast<double>(p);
    const double vp = v.at_prime(p);
    if (!L.is_ramified(p) && abs_u(F.disc()) % p != 0) {
        const double E = L.local_psi_factor(p, 1.0 / pd).real();
        return 1.0 + vp * static_cast<double>(rho_minus_pp(F, p, 1)) * (E - 1.0);
    }
    double s = 1.0, pn = 1.0;
    for (int nu = 1; nu < 64; ++nu) {
        pn *= pd;
        const double rho = static_cast<double>(rho_minus_pp(F, p, nu));
        const double bound = divisor_bound(L.degree(), nu) * rho / pn;
        s += vp * static_cast<double>(L.psi_prime_power(p, nu)) * rho / pn;
        if (bound < 1e-17) break;
    }
    return s;
}

TruncatedProduct c_FL(const AbelianField& L, const FormSpec& F, const LocalWeight& v, u64 W, u64 P) {
    TruncatedProduct out;
    out.cutoff = P;
    const std::vector<u64> primes = primes_up_to(P);
    double log_prod = 0.0;
    std::vector<double> first_order;
    first_order.reserve(primes.size());
    double S = 0.0;
    for (u64 p : primes) {
        if (W % p == 0) {
            first_order.push_back(S);
            continue;
        }
        const double local = c_FL_local(L, F, v, p);
        if (local <= 0) throw InvalidArgument("c_FL: non-positive local factor at p = " + std::to_string(p));
        log_prod += std::log(local);
        S += v.at_prime(p) * static_cast<double>(static_cast<i64>(rho_minus_pp(F, p, 1)) * L.psi_prime(p)) / static_cast<double>(p);
        first_order.push_back(S);
    }
    out.value = std::exp(log_prod);
    if (!(out.value > 0)) throw InvalidArgument("c_FL: partial product is not positive");
    const double root = std::sqrt(static_cast<double>(P));
    double osc = 0.0;
    for (std::size_t i = 0; i < primes.size(); ++i) {
        if (static_cast<double>(primes[i]) >= root) osc = std::max(osc, std::abs(S - first_order[i]));
    }
    const double n1 = L.degree() - 1;
    const double second_order = 16.0 * n1 * n1 / static_cast<double>(std::max<u64>(P, 2));
    out.tail = out.value * std::expm1(2.0 * osc + second_order);
    out.rigorous = false;
    return out;
}

double u_FL(const AbelianField& L, const FormSpec& F, const LocalWeight& v, u64 W, const Factorization& k) {
    double r = 1.0;
    for (const auto& pp : k.factors) {
        if (W % pp.p == 0) continue;
        r /= c_FL_local(L, F, v, pp.p);
    }
    return r;
}

double g_FL(const AbelianField& L, const FormSpec& F, const Factorization& d) {
    double r = static_cast<double>(rho_minus(F, d));
    if (r == 0) return 0.0;
    for (const auto& pp : d.factors) {
        const double pd = static_cast<double>(pp.p);
        const double psi_p = static_cast<double>(L.psi_prime_power(pp.p, 1));
        // 1 + psi(p) + (sum_{nu>=0} psi(p^nu)/p^nu - 1 - psi(p)/p)
        r *= 1.0 + psi_p + (psi_local_series(L, pp.p, 1.0 / pd) - 1.0 - psi_p / pd);
    }
    return r;
}

SeriesValue sigma_k(const AbelianField& L, const FormSpec& F, u64 k1, u64 a, const LocalWeight& u, u64 W,
                    u64 bound) {
    if (k1 == 0 || a == 0) throw InvalidArgument("sigma_k: k1 and a must be positive");
    bound = std::min<u64>(bound, 1'000'000'000);
    const u64 ak = a * k1;
    std::vector<u64> primes;
    for (const auto& pp : factor(ak).factors) {
        if (W % pp.p != 0) primes.push_back(pp.p);
    }
    SeriesValue out;
    double abs_partial = 0.0;
    for (u64 l : divisors_supported_on(primes, bound)) {
        const Factorization lf = l == 1 ? Factorization{} : factor(l);
        const double rho = static_cast<double>(rho_minus(F, lf, ak)) * u.restricted(lf, ak);
        const double g = static_cast<double>(gcd_product(k1, l, a));
        out.value += static_cast<double>(L.psi(lf)) * rho * g / static_cast<double>(l);
        double db = 1.0;
        for (const auto& pp : lf.factors) db *= divisor_bound(L.degree(), pp.e);
        abs_partial += db * static_cast<double>(a) / static_cast<double>(l);
    }
    double full_abs = static_cast<double>(a);
    for (u64 p : primes) full_abs *= std::pow(1.0 - 1.0 / static_cast<double>(p), -(L.degree() - 1));
    out.tail = std::max(0.0, full_abs - abs_partial);
    return out;
}

double sigma_k_product(const AbelianField& L, const FormSpec&, u64 k1, u64 a, u64 W) {
    if (k1 == 0 || a == 0) throw InvalidArgument("sigma_k_product: k1 and a must be positive");
    double r = 1.0;
    for (const auto& pp : factor(a * k1).factors) {
        const u64 p = pp.p;
        const double pd = static_cast<double>(p);
        const int va = valuation(a, p), vk = valuation(k1, p);
        if (W % p == 0) {
            r *= std::pow(pd, std::min(va, vk));
            continue;
        }
        const int N = std::max(0, va - vk);
        double head = 0.0, head_plain = 0.0, pn = 1.0;
        for (int nu = 0; nu < N; ++nu) {
            const double psi = nu == 0 ? 1.0 : static_cast<double>(L.psi_prime_power(p, nu));
            head += psi * std::pow(pd, std::min(vk + nu, va)) / pn;
            head_plain += psi / pn;
            pn *= pd;
        }
        r *= head + std::pow(pd, va) * (psi_local_series(L, p, 1.0 / pd) - head_plain);
    }
    return r;
}

double sigma1_closed_product(const AbelianField& L, u64 d, u64 m, u64 W) {
    if (d == 0 || m == 0) throw InvalidArgument("sigma1_closed_product: d and m must be positive");
    const Factorization df = factor(d);
    if (!is_squarefree(df)) throw InvalidArgument("sigma1_closed_product: d must be squarefree");
    double r = 1.0;
    for (const auto& pp : factor(d * m).factors) {
        const u64 p = pp.p;
        if (W % p == 0) continue;
        const double pd = static_cast<double>(p);
        const double S = psi_local_series(L, p, 1.0 / pd);
        if (m % p != 0) {
            r *= S;
        } else {
            const double psi_p = static_cast<double>(L.psi_prime_power(p, 1));
            r *= 1.0 + psi_p + (S - 1.0 - psi_p / pd);
        }
    }
    return r;
}

std::vector<i64> psi_table(const AbelianField& L, u64 y) {
    std::vector<i64> t(y + 1, 0);
    if (y == 0) return t;
    t[1] = 1;
    const SpfTable spf(y);
    for (u64 k = 2; k <= y; ++k) {
        const u64 p = spf.spf(k);
        u64 m = k;
        int e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        t[k] = m == 1 ? L.psi_prime_power(p, e) : t[k / m] * t[m];
    }
    return t;
}

std::vector<double> frakS_partial(const AbelianField& L, const FormSpec& F, const std::vector<u64>& cutoffs, u64 a,
                                  u64 k1, const LocalWeight& v, u64 W) {
    if (a == 0 || k1 == 0 || W == 0) throw InvalidArgument("frakS: a, k1, W must be positive");
    std::vector<double> out;
    if (cutoffs.empty()) return out;
    if (!std::is_sorted(cutoffs.begin(), cutoffs.end())) throw InvalidArgument("frakS: cutoffs must be ascending");
    const u64 y = cutoffs.back();
    const auto psi = psi_table(L, y);
    const auto rho = rho_weight_table(F, v, a * k1, W, y);
    double s = 0.0;
    std::size_t idx = 0;
    for (u64 k = 1; k <= y; ++k) {
        while (idx < cutoffs.size() && cutoffs[idx] < k) out.push_back(s), ++idx;
        if (rho[k] == 0.0 || psi[k] == 0) continue;
        s += static_cast<double>(psi[k]) * rho[k] * static_cast<double>(gcd_product(k1, k, a)) / static_cast<double>(k);
    }
    while (idx < cutoffs.size()) out.push_back(s), ++idx;
    return out;
}

double frakS(const AbelianField& L, const FormSpec& F, double y, u64 a, u64 k1, const LocalWeight& v, u64 W) {
    if (y < 1) return 0.0;
    return frakS_partial(L, F, {static_cast<u64>(std::floor(y))}, a, k1, v, W).front();
}

double frakS_vol(const AbelianField& L, const FormSpec& F, double y, u64 a, u64 k1, const LocalWeight& v, u64 W,
                 double B, double z) {
    if (y < 1) return 0.0;
    if (static_cast<double>(k1) * z * y > b_F(F) * B * B) {
        throw InvalidArgument("frakS_vol: requires k1 z y <= b_F B^2");
    }
    const u64 Y = static_cast<u64>(std::floor(y));
    const auto psi = psi_table(L, Y);
    const auto rho = rho_weight_table(F, v, a * k1, W, Y);
    double s = 0.0;
    for (u64 k = 1; k <= Y; ++k) {
        if (rho[k] == 0.0 || psi[k] == 0) continue;
        const double vol = vol_region(F, B, z * static_cast<double>(k1) * static_cast<double>(k));
        s += static_cast<double>(psi[k]) * rho[k] * static_cast<double>(gcd_product(k1, k, a)) /
             static_cast<double>(k) * vol;
    }
    return s;
}

std::complex<double> frakS_box(const AbelianField& L, const FormSpec& F, const BoxSpec& box, u64 a,
                               const LocalWeight& v, u64 W, const VolumeWeight* vol) {
    const std::size_t dim = static_cast<std::size_t>(L.degree() - 1);
    if (box.lo.size() != dim || box.hi.size() != dim) throw InvalidArgument("frakS_box: box dimension must be n - 1");
    if (box.product_cap == 0) throw InvalidArgument("frakS_box: product_cap is required");
    if (a == 0) throw InvalidArgument("frakS_box: a must be positive");
    const u64 cap = box.product_cap;
    const auto rho = rho_weight_table(F, v, a, W, cap);
    const int M = L.root_order();
    std::vector<std::complex<double>> roots(M);
    for (int j = 0; j < M; ++j) roots[j] = std::polar(1.0, 2.0 * std::numbers::pi * j / M);

    std::complex<double> total = 0.0;
    auto rec = [&](auto&& self, std::size_t i, u64 prod, int expo, bool outside) -> void {
        if (i == dim) {
            if (box.exclude_cube && !outside) return;
            if (rho[prod] == 0.0) return;
            double w = rho[prod] * static_cast<double>(gcd(prod % a, a)) / static_cast<double>(prod);
            if (vol) w *= vol_region(F, vol->B, vol->z * static_cast<double>(prod));
            total += w * roots[expo];
            return;
        }
        const u64 lo = std::max<u64>(1, box.lo[i]);
        u64 hi = cap / prod;
        if (box.hi[i]) hi = std::min(hi, box.hi[i]);
        for (u64 k = lo; k <= hi; ++k) {
            const auto e = L.char_exponent(i + 1, static_cast<i64>(k));
            if (!e) continue;
            self(self, i + 1, prod * k, (expo + *e) % M, outside || (box.exclude_cube && k > box.exclude_cube));
        }
    };
    rec(rec, 0, 1, 0, false);
    return total;
}

std::vector<MertensValue> mertens_rho_at(const FormSpec& F, const std::vector<u64>& cutoffs) {
    std::vector<MertensValue> out;
    if (cutoffs.empty()) return out;
    if (!std::is_sorted(cutoffs.begin(), cutoffs.end())) throw InvalidArgument("mertens: cutoffs must be ascending");
    double s = 0.0;
    std::size_t idx = 0;
    auto emit = [&](u64 z) {
        const double zd = static_cast<double>(z);
        out.push_back({s, zd > 3 ? s - std::log(std::log(zd)) : std::nan("")});
    };
    for (u64 p : primes_up_to(cutoffs.back())) {
        while (idx < cutoffs.size() && cutoffs[idx] < p) emit(cutoffs[idx++]);
        s += static_cast<double>(rho_minus_pp(F, p, 1)) / static_cast<double>(p);
    }
    while (idx < cutoffs.size()) emit(cutoffs[idx++]);
    return out;
}

std::vector<MertensValue> mertens_twisted_at(const AbelianField& L, const FormSpec& F,
                                             const std::vector<u64>& cutoffs) {
    std::vector<MertensValue> out;
    if (cutoffs.empty()) return out;
    if (!std::is_sorted(cutoffs.begin(), cutoffs.end())) throw InvalidArgument("mertens: cutoffs must be ascending");
    double s = 0.0;
    std::size_t idx = 0;
    auto emit = [&](u64 z) {
        const double zd = static_cast<double>(z);
        out.push_back({s, zd > 3 ? s - std::log(std::log(zd)) : std::nan("")});
    };
    for (u64 p : primes_up_to(cutoffs.back())) {
        while (idx < cutoffs.size() && cutoffs[idx] < p) emit(cutoffs[idx++]);
        s += static_cast<double>(L.psi_prime(p) * static_cast<i64>(rho_minus_pp(F, p, 1))) / static_cast<double>(p);
    }
    while (idx < cutoffs.size()) emit(cutoffs[idx++]);
    return out;
}

MertensValue mertens_rho(const FormSpec& F, double z) {
    if (!(z >= 0)) throw InvalidArgument("mertens_rho: z must be nonnegative");
    return mertens_rho_at(F, {static_cast<u64>(z)}).front();
}

MertensValue mertens_twisted(const AbelianField& L, const FormSpec& F, double z) {
    if (!(z >= 0)) throw InvalidArgument("mertens_twisted: z must be nonnegative");
    return mertens_twisted_at(L, F, {static_cast<u64>(z)}).front();
}

double local_factor_identity(const AbelianField& L, const FormSpec& F, u64 p, double s) {
    if (!is_prime(p)) throw InvalidArgument("local_factor_identity: p must be prime");
    if (L.is_ramified(p) || abs_u(F.disc()) % p == 0 || abs_u(F.a) % p == 0) {
        throw InvalidArgument("local_factor_identity: p must not divide q_L disc(F) F(1, 0)");
    }
    const double x = std::pow(static_cast<double>(p), -s);
    const u64 rho = rho_minus_pp(F, p, 1);
    const std::complex<double> lf = 1.0 + static_cast<double>(rho) * (L.local_psi_factor(p, x) - 1.0);
    std::complex<double> euler = 1.0;
    for (int i = 1; i < L.degree(); ++i) {
        const std::complex<double> chi = L.char_value(i, static_cast<i64>(p));
        if (rho == 2) {
            euler *= (1.0 - chi * x) * (1.0 - chi * x);
        } else if (rho == 0) {
            euler *= 1.0 - chi * chi * x * x;
        } else {
            throw std::logic_error("local_factor_identity: unexpected root count");
        }
    }
    return std::abs(lf * euler - 1.0);
}

} // namespace normcount
