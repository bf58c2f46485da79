#include "normcount/forms.hpp"

#include "normcount/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace normcount {

namespace {

// moduli scanned directly
constexpr u64 small_modulus = 64;
// largest prime for which every residue may be scanned
constexpr u64 exhaustive_limit = 1'000'000;
constexpr std::size_t root_cap = 10'000'000;

u64 ipow_checked(u64 p, int nu) {
    u64 r = 1;
    for (int i = 0; i < nu; ++i) {
        if (r > std::numeric_limits<u64>::max() / 4 / p) throw InvalidArgument("prime power too large");
        r *= p;
    }
    return r;
}

u64 reduce(i64 v, u64 m) { return static_cast<u64>(floor_mod(v, static_cast<i64>(m))); }

struct Quadratic {
    u64 A, B, C, m;
    u64 operator()(u64 x) const {
        return (mulmod(mulmod(A, x, m), x, m) + mulmod(B, x, m) + C) % m;
    }
};

std::vector<u64> roots_mod_prime(i64 A, i64 B, i64 C, u64 p) {
    std::vector<u64> out;
    if (p <= small_modulus) {
        const Quadratic f{reduce(A, p), reduce(B, p), reduce(C, p), p};
        for (u64 x = 0; x < p; ++x) {
            if (f(x) == 0) out.push_back(x);
        }
        return out;
    }
    const u64 a = reduce(A, p), b = reduce(B, p), c = reduce(C, p);
    if (a == 0) {
        if (b == 0) {
            if (c != 0) return out;
            if (p > exhaustive_limit) throw ResourceError("roots mod p: every residue is a root for large p");
            out.resize(p);
            for (u64 x = 0; x < p; ++x) out[x] = x;
            return out;
        }
        out.push_back(mulmod(p - c % p, invmod(b, p), p) % p);
        return out;
    }
    // x = (-b +- sqrt(D)) / 2a
    const u64 D = (mulmod(b, b, p) + p - mulmod(4 % p, mulmod(a, c, p), p)) % p;
    if (D != 0 && powmod(D, (p - 1) / 2, p) != 1) return out;
    const u64 r = sqrtmod_prime(D, p);
    const u64 inv2a = invmod(mulmod(2, a, p), p);
    const u64 x1 = mulmod((p - b + r) % p, inv2a, p);
    const u64 x2 = mulmod((p - b + p - r) % p, inv2a, p);
    out.push_back(x1);
    if (x2 != x1) out.push_back(x2);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

double b_F(const FormSpec& F) {
    const double a = static_cast<double>(F.a), b = static_cast<double>(F.b), c = static_cast<double>(F.c);
    double best = 0.0;
    auto consider = [&](double s, double t) { best = std::max(best, std::abs(a * s * s + b * s * t + c * t * t)); };
    for (double s : {-1.0, 1.0}) {
        for (double t : {-1.0, 1.0}) consider(s, t);
    }
    // edges s = +-1: critical point of a + b s t + c t^2 in t
    if (c != 0) {
        for (double s : {-1.0, 1.0}) {
            const double t = -b * s / (2 * c);
            if (std::abs(t) <= 1) consider(s, t);
        }
    }
    if (a != 0) {
        for (double t : {-1.0, 1.0}) {
            const double s = -b * t / (2 * a);
            if (std::abs(s) <= 1) consider(s, t);
        }
    }
    return best;
}

std::vector<u64> quadratic_roots_mod_prime_power(i64 A, i64 B, i64 C, u64 p, int nu) {
    if (nu < 0) throw InvalidArgument("roots mod p^nu: nu must be non-negative");
    if (nu == 0) return {0};
    const u64 pk = ipow_checked(p, nu);
    if (pk <= small_modulus) {
        const Quadratic f{reduce(A, pk), reduce(B, pk), reduce(C, pk), pk};
        std::vector<u64> out;
        for (u64 x = 0; x < pk; ++x) {
            if (f(x) == 0) out.push_back(x);
        }
        return out;
    }
    std::vector<u64> roots = roots_mod_prime(A, B, C, p);
    u64 pj = p;
    for (int j = 1; j < nu; ++j) {
        const u64 next = pj * p;
        const Quadratic f{reduce(A, next), reduce(B, next), reduce(C, next), next};
        std::vector<u64> lifted;
        for (u64 r : roots) {
            const u64 deriv = (mulmod(2 % p, mulmod(reduce(A, p), r % p, p), p) + reduce(B, p)) % p;
            if (deriv != 0) {
                // Newton step: unique lift
                const u64 fr = f(r);
                const u64 t = mulmod(fr / pj, invmod(deriv, p), p);
                lifted.push_back((r + next - mulmod(t, pj, next)) % next);
            } else {
                if (p > exhaustive_limit) throw ResourceError("roots mod p^nu: singular root above a large prime");
                for (u64 t = 0; t < p; ++t) {
                    const u64 x = r + t * pj;
                    if (f(x) == 0) lifted.push_back(x);
                }
                if (lifted.size() > root_cap) throw ResourceError("roots mod p^nu: too many roots");
            }
        }
        roots = std::move(lifted);
        pj = next;
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

u64 rho_minus_pp(const FormSpec& F, u64 p, int nu) {
    if (nu == 0) return 1;
    if (!is_prime(p)) throw InvalidArgument("rho_minus_pp: p must be prime");
    const i64 D = F.disc();
    if (static_cast<u64>(D < 0 ? -D : D) % p != 0) {
        // simple roots: Hensel gives rho(p^nu) = rho(p)
        if (p == 2) return roots_mod_prime(F.a, F.b, F.c, 2).size();
        if (reduce(F.a, p) == 0) return 1;
        return static_cast<u64>(1 + kronecker(D, p));
    }
    return quadratic_roots_mod_prime_power(F.a, F.b, F.c, p, nu).size();
}

u64 rho_minus(const FormSpec& F, const Factorization& k, u64 a) {
    u64 r = 1;
    for (const auto& pp : k.factors) {
        if (a % pp.p == 0) continue;
        r *= rho_minus_pp(F, pp.p, pp.e);
        if (r == 0) return 0;
    }
    return r;
}

u64 rho_minus(const FormSpec& F, u64 k, u64 a) {
    if (k == 0) throw InvalidArgument("rho_minus: k must be positive");
    return rho_minus(F, factor(k), a);
}

u64 rho_full_pp(const FormSpec& F, u64 p, int nu) {
    if (nu == 0) return 1;
    const u64 pk = ipow_checked(p, nu);
    if (pk <= 3000) {
        u64 cnt = 0;
        const i64 m = static_cast<i64>(pk);
        for (i64 x = 0; x < m; ++x) {
            for (i64 y = 0; y < m; ++y) {
                if (F.eval(x, y) % m == 0) ++cnt;
            }
        }
        return cnt;
    }
    const u64 phi = pk / p * (p - 1);
    u64 rev_at_zero = 0;
    if (reduce(F.a, p) == 0) {
        for (u64 eta : quadratic_roots_mod_prime_power(F.c, F.b, F.a, p, nu)) {
            if (eta % p == 0) ++rev_at_zero;
        }
    }
    const u64 both = nu == 1 ? 1 : p * p * rho_full_pp(F, p, nu - 2);
    return phi * rho_minus_pp(F, p, nu) + phi * rev_at_zero + both;
}

u64 rho_full(const FormSpec& F, u64 k) {
    if (k == 0) throw InvalidArgument("rho_full: k must be positive");
    u64 r = 1;
    for (const auto& pp : factor(k).factors) r *= rho_full_pp(F, pp.p, pp.e);
    return r;
}

std::vector<u64> roots_mod(const FormSpec& F, const Factorization& k) {
    std::vector<u64> acc{0};
    u64 mod = 1;
    for (const auto& pp : k.factors) {
        const u64 pk = ipow_checked(pp.p, pp.e);
        const auto local = quadratic_roots_mod_prime_power(F.a, F.b, F.c, pp.p, pp.e);
        if (local.empty()) return {};
        const u64 inv = invmod(mod % pk, pk);
        std::vector<u64> next;
        next.reserve(acc.size() * local.size());
        for (u64 r : acc) {
            for (u64 s : local) {
                // x = r mod `mod`, x = s mod pk
                const u64 diff = (s + pk - r % pk) % pk;
                const u64 t = mulmod(diff, inv, pk);
                next.push_back(r + t * mod);
            }
        }
        if (next.size() > root_cap) throw ResourceError("roots_mod: too many roots");
        acc = std::move(next);
        mod *= pk;
    }
    std::sort(acc.begin(), acc.end());
    return acc;
}

std::vector<u64> roots_mod(const FormSpec& F, u64 k) {
    if (k == 0) throw InvalidArgument("roots_mod: k must be positive");
    return roots_mod(F, factor(k));
}

SieveModulus compute_W(const AbelianField& L, const FormSpec& F, u64 w0_min) {
    SieveModulus out;
    const u64 qL = L.modulus();
    const u64 two_n1 = 2 * static_cast<u64>(L.degree()) + 1;
    const i64 D = F.disc();
    const u64 dc = static_cast<u64>(D < 0 ? -D : D) * static_cast<u64>(F.c < 0 ? -F.c : F.c);
    u64 lp = 1;
    for (const auto& pp : factor(dc).factors) lp = std::max(lp, pp.p);
    const std::pair<u64, const char*> bounds[] = {
        {w0_min, "w0_min"}, {qL, "q_L"}, {two_n1, "2n+1"}, {lp + 1, "disc(F)F(0,1)"}};
    for (const auto& [v, why] : bounds) out.w0 = std::max(out.w0, v);
    for (const auto& [v, why] : bounds) {
        if (v == out.w0) out.reasons.emplace_back(why);
    }

    // local factors of u_{F,L} for p > w0 must lie in (1/2, 2); beyond
    // 5n + 10 this holds for every prime.
    const u64 check_to = 5 * static_cast<u64>(L.degree()) + 10;
    for (bool changed = true; changed;) {
        changed = false;
        for (u64 p : primes_up_to(check_to)) {
            if (p <= out.w0) continue;
            const double rho = static_cast<double>(rho_minus_pp(F, p, 1));
            const double E = L.local_psi_factor(p, 1.0 / static_cast<double>(p)).real();
            const double local = 1.0 + rho * (E - 1.0);
            if (!(local > 0.5 && local < 2.0)) {
                out.w0 = p;
                out.reasons.emplace_back("local factor at " + std::to_string(p));
                changed = true;
            }
        }
    }

    u128 W = 1;
    for (u64 p : primes_up_to(out.w0)) {
        u64 pe = p;
        u64 rest = qL;
        while (rest % p == 0) {
            rest /= p;
            if (rest % p == 0) pe *= p;
        }
        W *= pe;
        if (W > (u128(1) << 62)) throw ResourceError("compute_W: W overflows 64 bits");
    }
    out.W = static_cast<u64>(W);
    return out;
}

bool is_admissible_base_point(const AbelianField& L, const FormSpec& F, u64 W, i64 s, i64 t) {
    const i128 v = F.eval(s, t);
    const i64 vw = static_cast<i64>(v % static_cast<i128>(W));
    if (gcd(static_cast<u64>(floor_mod(vw, static_cast<i64>(W))), W) != 1) return false;
    const i64 vq = static_cast<i64>(v % static_cast<i128>(L.modulus()));
    if (gcd(static_cast<u64>(floor_mod(vq, static_cast<i64>(L.modulus()))), L.modulus()) != 1) return false;
    return L.in_H(vq);
}

BasePoint find_base_point(const AbelianField& L, const FormSpec& F, u64 W) {
    if (W == 0) throw InvalidArgument("find_base_point: W must be positive");
    const i64 w = static_cast<i64>(W);
    for (i64 s = 0; s < w; ++s) {
        for (i64 t = 0; t < w; ++t) {
            if (is_admissible_base_point(L, F, W, s, t)) return {s, t};
        }
    }
    throw HypothesisError("assumption (ii) unsatisfied: no (s1, t1) mod " + std::to_string(W) + " with F(s1, t1) a unit and a norm class for " + F.to_string());
}

} // namespace normcount
