#include "normcount/lattices.hpp"

#include "normcount/errors.hpp"
#include "normcount/regions.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace normcount {

namespace {

struct Vec {
    i128 s, t;
    i128 norm() const { return s * s + t * t; }
};

i128 dot(const Vec& u, const Vec& v) { return u.s * v.s + u.t * v.t; }

i128 floor_div(i128 a, i128 b) {
    i128 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

Vec canonical_sign(Vec v) {
    if (v.t < 0 || (v.t == 0 && v.s < 0)) return {-v.s, -v.t};
    return v;
}

struct Interval {
    i64 lo, hi;
};

// Integer s in [-B, B] with |F(s, t)| >= z, as disjoint sorted intervals.
std::vector<Interval> admissible_s(const FormSpec& F, i64 t, i64 B, double z) {
    if (z <= 0) return {{-B, B}};
    const auto ok = [&](i64 s) {
        const i128 v = F.eval(s, t);
        return static_cast<long double>(v < 0 ? -v : v) >= static_cast<long double>(z);
    };
    std::vector<long double> roots;
    const long double a = F.a, b = static_cast<long double>(F.b) * t, c = static_cast<long double>(F.c) * t * t;
    for (long double sign : {1.0L, -1.0L}) {
        const long double cc = c - sign * z;
        if (a == 0) {
            if (b != 0) roots.push_back(-cc / b);
            continue;
        }
        const long double disc = b * b - 4 * a * cc;
        if (disc < 0) continue;
        const long double r = std::sqrt(disc);
        roots.push_back((-b - r) / (2 * a));
        roots.push_back((-b + r) / (2 * a));
    }
    std::vector<i64> checks{-B, B};
    for (long double r : roots) {
        if (!(r > -B - 2 && r < B + 2)) continue;
        const i64 f = static_cast<i64>(std::floor(r));
        for (i64 d = -1; d <= 2; ++d) checks.push_back(std::clamp(f + d, -B, B));
    }
    std::sort(checks.begin(), checks.end());
    checks.erase(std::unique(checks.begin(), checks.end()), checks.end());

    std::vector<Interval> out;
    auto emit = [&](i64 lo, i64 hi) {
        if (!out.empty() && out.back().hi + 1 == lo) {
            out.back().hi = hi;
        } else {
            out.push_back({lo, hi});
        }
    };
    for (std::size_t i = 0; i < checks.size(); ++i) {
        if (ok(checks[i])) emit(checks[i], checks[i]);
        if (i + 1 < checks.size() && checks[i + 1] > checks[i] + 1) {
            // predicate is constant strictly between consecutive checkpoints
            if (ok(checks[i] + 1)) emit(checks[i] + 1, checks[i + 1] - 1);
        }
    }
    return out;
}

// #{s in [lo, hi] : s = r mod m}
i64 count_progression(i64 lo, i64 hi, i128 r, i128 m) {
    if (hi < lo) return 0;
    return static_cast<i64>(floor_div(hi - r, m) - floor_div(lo - 1 - r, m));
}

// s = r1 mod m1 and s = r2 mod m2; returns false when incompatible
bool crt(i128 r1, i128 m1, i128 r2, i128 m2, i128& r, i128& m) {
    const i128 g = static_cast<i128>(normcount::gcd(static_cast<u64>(m1), static_cast<u64>(m2)));
    const i128 diff = r2 - r1;
    if (diff % g != 0) return false;
    const i128 m2g = m2 / g;
    const i128 inv = static_cast<i128>(invmod(static_cast<u64>(((m1 / g) % m2g + m2g) % m2g), static_cast<u64>(m2g)));
    i128 k = ((diff / g) % m2g + m2g) % m2g * inv % m2g;
    m = m1 / g * m2;
    r = ((r1 + k * m1) % m + m) % m;
    return true;
}

struct SignedDivisor {
    i64 d;
    int mu;
};

std::vector<SignedDivisor> squarefree_divisors(u64 n) {
    std::vector<SignedDivisor> out{{1, 1}};
    if (n <= 1) return out;
    for (const auto& pp : factor(n).factors) {
        const std::size_t old = out.size();
        for (std::size_t i = 0; i < old; ++i) out.push_back({out[i].d * static_cast<i64>(pp.p), -out[i].mu});
    }
    return out;
}

void check_lattice_args(i64 B, double z, u64 k, u64 W) {
    if (B < 1) throw InvalidArgument("lambda_star: B must be positive");
    if (!(z >= 0)) throw InvalidArgument("lambda_star: z must be non-negative");
    if (k == 0 || W == 0) throw InvalidArgument("lambda_star: k and W must be positive");
    if (gcd(k, W) != 1) throw InvalidArgument("lambda_star: k must be coprime to W");
}

} // namespace

ReducedLattice lambda1(u64 k, i64 xi) {
    if (k == 0) throw InvalidArgument("lambda1: k must be positive");
    Vec u{static_cast<i128>(k), 0};
    Vec v{static_cast<i128>(floor_mod(xi, static_cast<i64>(k))), 1};
    if (v.norm() < u.norm()) std::swap(u, v);
    for (;;) {
        const i128 m = floor_div(2 * dot(u, v) + u.norm(), 2 * u.norm());
        v = {v.s - m * u.s, v.t - m * u.t};
        if (v.norm() < u.norm()) {
            std::swap(u, v);
        } else {
            break;
        }
    }
    const i128 best = u.norm();
    std::vector<Vec> cands{u, v, {u.s + v.s, u.t + v.t}, {u.s - v.s, u.t - v.t}};
    Vec pick{0, 0};
    bool have = false;
    for (auto c : cands) {
        if (c.norm() != best) continue;
        c = canonical_sign(c);
        auto key = [](const Vec& w) { return std::make_tuple(w.t == 0 ? 1 : 0, w.t, w.s); };
        if (!have || key(c) < key(pick)) {
            pick = c;
            have = true;
        }
    }
    ReducedLattice r;
    r.lambda1 = std::sqrt(static_cast<double>(best));
    r.s = static_cast<i64>(pick.s);
    r.t = static_cast<i64>(pick.t);
    r.b1s = static_cast<i64>(u.s);
    r.b1t = static_cast<i64>(u.t);
    r.b2s = static_cast<i64>(v.s);
    r.b2t = static_cast<i64>(v.t);
    return r;
}

u64 lambda_star_count_naive(const FormSpec& F, i64 B, double z, u64 k, BasePoint base, u64 W) {
    check_lattice_args(B, z, k, W);
    const i64 w = static_cast<i64>(W), kk = static_cast<i64>(k);
    u64 cnt = 0;
    for (i64 t = -B; t <= B; ++t) {
        if (floor_mod(t - base.t, w) != 0) continue;
        for (i64 s = -B; s <= B; ++s) {
            if (floor_mod(s - base.s, w) != 0) continue;
            if (gcd_abs(s, t) != 1) continue;
            const i128 v = F.eval(s, t);
            if (v % kk != 0) continue;
            if (static_cast<long double>(v < 0 ? -v : v) < static_cast<long double>(z)) continue;
            ++cnt;
        }
    }
    return cnt;
}

u64 lambda_star_count(const FormSpec& F, i64 B, double z, u64 k, BasePoint base, u64 W) {
    check_lattice_args(B, z, k, W);
    const Factorization kf = factor(k);
    const std::vector<u64> roots = roots_mod(F, kf);
    const i64 w = static_cast<i64>(W), kk = static_cast<i64>(k);
    u64 total = 0;

    i64 t0 = -B + floor_mod(base.t - (-B), w);
    for (i64 t = t0; t <= B; t += w) {
        const auto intervals = admissible_s(F, t, B, z);
        auto in_region = [&](i64 s) {
            for (const auto& iv : intervals) {
                if (s >= iv.lo && s <= iv.hi) return true;
            }
            return false;
        };
        if (t == 0) {
            // gcd(s, 0) = |s|
            for (i64 s : {-1, 1}) {
                if (floor_mod(s - base.s, w) == 0 && F.eval(s, 0) % kk == 0 && in_region(s)) ++total;
            }
            continue;
        }
        const u64 at = static_cast<u64>(t < 0 ? -t : t);
        const u64 g = gcd(at, k);
        if (g != 1) {
            bool scan = false;
            for (const auto& pp : kf.factors) {
                if (g % pp.p != 0) continue;
                if (floor_mod(F.a, static_cast<i64>(pp.p)) != 0) goto next_row;
                scan = true;
            }
            if (scan) {
                for (i64 s = -B + floor_mod(base.s + B, w); s <= B; s += w) {
                    if (gcd_abs(s, t) != 1 || !in_region(s)) continue;
                    if (F.eval(s, t) % kk == 0) ++total;
                }
                continue;
            }
        }
        {
            const auto divs = squarefree_divisors(at);
            for (u64 xi : roots) {
                const i128 r_k = static_cast<i128>(mulmod(xi, static_cast<u64>(floor_mod(t, kk)), k));
                i128 r, m;
                if (!crt(r_k, kk, floor_mod(base.s, w), w, r, m)) continue;
                i64 row = 0;
                for (const auto& dv : divs) {
                    i128 rr, mm;
                    if (!crt(r, m, 0, dv.d, rr, mm)) continue;
                    i64 c = 0;
                    for (const auto& iv : intervals) c += count_progression(iv.lo, iv.hi, rr, mm);
                    row += dv.mu * c;
                }
                total += static_cast<u64>(row);
            }
        }
    next_row:;
    }
    return total;
}

double coprime_class_density(u64 W) {
    if (W == 0) throw InvalidArgument("coprime_class_density: W must be positive");
    static const std::vector<u64> primes = primes_up_to(1'000'000);
    double log_prod = 0.0;
    for (u64 p : primes) {
        if (W % p == 0) continue;
        const double pd = static_cast<double>(p);
        log_prod += std::log1p(-1.0 / (pd * pd));
    }
    const double Wd = static_cast<double>(W);
    return std::exp(log_prod) / (Wd * Wd);
}

double lambda_star_estimate(const FormSpec& F, i64 B, double z, u64 k, u64 W) {
    check_lattice_args(B, z, k, W);
    const Factorization kf = factor(k);
    double v0 = 1.0;
    for (const auto& pp : kf.factors) v0 /= 1.0 + 1.0 / static_cast<double>(pp.p);
    return coprime_class_density(W) * vol_region(F, static_cast<double>(B), z) *
           static_cast<double>(rho_minus(F, kf)) * v0 / static_cast<double>(k);
}

double inv_lambda1_sum(const FormSpec& F, u64 y) {
    if (y == 0) return 0.0;
    const SpfTable spf(y);
    double sum = 0.0;
    for (u64 k = 1; k <= y; ++k) {
        const Factorization kf = k == 1 ? Factorization{} : spf.factor(k);
        for (u64 xi : roots_mod(F, kf)) sum += 1.0 / lambda1(k, static_cast<i64>(xi)).lambda1;
    }
    return sum;
}

} // namespace normcount
