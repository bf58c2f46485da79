#include "normcount/arith.hpp"

#include "normcount/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

namespace normcount {

namespace {

constexpr u64 trial_limit = 1'000'000;

const std::vector<u64>& small_primes() {
    static const std::vector<u64> primes = primes_up_to(trial_limit);
    return primes;
}

u128 mulmod_wide(u128 a, u128 b, u128 m) {
    if (m <= (u128(1) << 64)) {
        // both fit after reduction; product fits in 128 bits only if m <= 2^64
        return (a % m) * (b % m) % m;
    }
    a %= m;
    b %= m;
    u128 r = 0;
    while (b) {
        if (b & 1) {
            r = (r >= m - a) ? r - (m - a) : r + a;
        }
        b >>= 1;
        if (b) a = (a >= m - a) ? a - (m - a) : a + a;
    }
    return r;
}

u128 powmod_wide(u128 a, u128 e, u128 m) {
    u128 r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_wide(r, a, m);
        a = mulmod_wide(a, a, m);
        e >>= 1;
    }
    return r;
}

u128 gcd_wide(u128 a, u128 b) {
    while (b) {
        u128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

constexpr u64 mr_bases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

bool strong_probable_prime(u64 n, u64 a) {
    u64 d = n - 1;
    int s = std::countr_zero(d);
    d >>= s;
    u64 x = powmod(a % n, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int i = 1; i < s; ++i) {
        x = mulmod(x, x, n);
        if (x == n - 1) return true;
    }
    return false;
}

bool strong_probable_prime_wide(u128 n, u128 a) {
    u128 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    u128 x = powmod_wide(a % n, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int i = 1; i < s; ++i) {
        x = mulmod_wide(x, x, n);
        if (x == n - 1) return true;
    }
    return false;
}

// Brent's variant of Pollard rho. n must be odd composite.
u64 rho_split(u64 n) {
    for (u64 c = 1;; ++c) {
        u64 y = 2, x = 2, q = 1, g = 1, ys = 2;
        const u64 m = 128;
        u64 r = 1;
        auto f = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
        do {
            x = y;
            for (u64 i = 0; i < r; ++i) y = f(y);
            u64 k = 0;
            do {
                ys = y;
                for (u64 i = 0; i < std::min(m, r - k); ++i) {
                    y = f(y);
                    q = mulmod(q, x > y ? x - y : y - x, n);
                }
                g = gcd(q, n);
                k += m;
            } while (k < r && g == 1);
            r <<= 1;
        } while (g == 1);
        if (g == n) {
            do {
                ys = f(ys);
                g = gcd(x > ys ? x - ys : ys - x, n);
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

u128 rho_split_wide(u128 n) {
    for (u128 c = 1;; ++c) {
        u128 x = 2, y = 2, g = 1;
        auto f = [&](u128 v) {
            u128 s = mulmod_wide(v, v, n);
            return s >= n - c ? s - (n - c) : s + c;
        };
        while (g == 1) {
            x = f(x);
            y = f(f(y));
            g = gcd_wide(x > y ? x - y : y - x, n);
        }
        if (g != n) return g;
    }
}

void factor_rec(u64 n, std::vector<u64>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    u64 d = rho_split(n);
    factor_rec(d, out);
    factor_rec(n / d, out);
}

void factor_rec_wide(u128 n, std::vector<u128>& out) {
    if (n == 1) return;
    if (n <= ~u64{0}) {
        std::vector<u64> tmp;
        factor_rec(static_cast<u64>(n), tmp);
        out.insert(out.end(), tmp.begin(), tmp.end());
        return;
    }
    if (is_prime_wide(n)) {
        out.push_back(n);
        return;
    }
    u128 d = rho_split_wide(n);
    factor_rec_wide(d, out);
    factor_rec_wide(n / d, out);
}

template <class T>
void collect(std::vector<T>& primes, BasicFactorization<T>& f) {
    std::sort(primes.begin(), primes.end());
    for (T p : primes) {
        if (!f.factors.empty() && f.factors.back().p == p) {
            ++f.factors.back().e;
        } else {
            f.factors.push_back({p, 1});
        }
    }
}

} // namespace

u64 mulmod(u64 a, u64 b, u64 m) {
    return static_cast<u64>(static_cast<u128>(a) * b % m);
}

u64 powmod(u64 a, u64 e, u64 m) {
    u64 r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

u64 gcd(u64 a, u64 b) { return std::gcd(a, b); }

i64 floor_mod(i64 a, i64 m) {
    i64 r = a % m;
    return r < 0 ? r + m : r;
}

u64 invmod(u64 a, u64 m) {
    if (m == 1) return 0;
    i128 old_r = static_cast<i128>(a % m), r = m;
    i128 old_s = 1, s = 0;
    while (r != 0) {
        i128 q = old_r / r;
        i128 t = old_r - q * r;
        old_r = r;
        r = t;
        t = old_s - q * s;
        old_s = s;
        s = t;
    }
    if (old_r != 1) throw InvalidArgument("invmod: not invertible");
    i128 res = old_s % static_cast<i128>(m);
    if (res < 0) res += m;
    return static_cast<u64>(res);
}

int kronecker(i64 a, u64 n) {
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    int result = 1;
    int tz = std::countr_zero(n);
    n >>= tz;
    if (tz > 0) {
        if (a % 2 == 0) return 0;
        i64 r8 = floor_mod(a, 8);
        if ((tz & 1) && (r8 == 3 || r8 == 5)) result = -result;
    }
    // Jacobi (a/n) for odd n.
    u64 aa = static_cast<u64>(floor_mod(a, static_cast<i64>(n)));
    while (aa != 0) {
        int t = std::countr_zero(aa);
        aa >>= t;
        if ((t & 1) && (n % 8 == 3 || n % 8 == 5)) result = -result;
        if (aa % 4 == 3 && n % 4 == 3) result = -result;
        std::swap(aa, n);
        aa %= n;
    }
    return n == 1 ? result : 0;
}

u64 sqrtmod_prime(u64 a, u64 p) {
    a %= p;
    if (p == 2 || a == 0) return a;
    if (powmod(a, (p - 1) / 2, p) != 1) throw InvalidArgument("sqrtmod_prime: non-residue");
    if (p % 4 == 3) return powmod(a, (p + 1) / 4, p);
    // Tonelli-Shanks
    u64 q = p - 1;
    int s = std::countr_zero(q);
    q >>= s;
    u64 z = 2;
    while (powmod(z, (p - 1) / 2, p) != p - 1) ++z;
    u64 m = s, c = powmod(z, q, p), t = powmod(a, q, p), r = powmod(a, (q + 1) / 2, p);
    while (t != 1) {
        u64 i = 0, tt = t;
        while (tt != 1) {
            tt = mulmod(tt, tt, p);
            ++i;
        }
        u64 b = c;
        for (u64 j = 0; j + i + 1 < m; ++j) b = mulmod(b, b, p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    return r;
}

u64 euler_phi(u64 n) {
    if (n == 0) return 0;
    u64 r = n;
    for (const auto& pp : factor(n).factors) r = r / pp.p * (pp.p - 1);
    return r;
}

bool is_perfect_square(i64 n) {
    if (n < 0) return false;
    auto r = static_cast<i64>(std::llround(std::sqrt(static_cast<long double>(n))));
    for (i64 c = std::max<i64>(0, r - 2); c <= r + 2; ++c) {
        if (c * c == n) return true;
    }
    return false;
}

bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % p == 0) return n == p;
    }
    for (u64 a : mr_bases) {
        if (!strong_probable_prime(n, a)) return false;
    }
    return true;
}

bool is_prime_wide(u128 n) {
    if (n <= ~u64{0}) return is_prime(static_cast<u64>(n));
    for (u64 p : small_primes()) {
        if (p > 1000) break;
        if (n % p == 0) return false;
    }
    for (u64 a : mr_bases) {
        if (!strong_probable_prime_wide(n, a)) return false;
    }
    // extra bases beyond the deterministic range
    for (u64 a : {41, 43, 47, 53, 59, 61, 67, 71}) {
        if (!strong_probable_prime_wide(n, a)) return false;
    }
    return true;
}

Factorization factor(u64 n) {
    if (n == 0) throw InvalidArgument("factor: 0 has no factorization");
    Factorization f;
    f.value = n;
    for (u64 p : small_primes()) {
        if (p * p > n) break;
        // hand large cofactors to rho early
        if (p > 1000 && n > (u64{1} << 40)) break;
        if (n % p == 0) {
            int e = 0;
            do {
                n /= p;
                ++e;
            } while (n % p == 0);
            f.factors.push_back({p, e});
        }
    }
    if (n > 1) {
        std::vector<u64> rest;
        factor_rec(n, rest);
        collect(rest, f);
    }
    return f;
}

WideFactorization factor_wide(u128 n) {
    if (n == 0) throw InvalidArgument("factor: 0 has no factorization");
    WideFactorization f;
    f.value = n;
    std::vector<u128> primes;
    for (u64 p : small_primes()) {
        if (p > 1000) break;
        while (n % p == 0) {
            n /= p;
            primes.push_back(p);
        }
    }
    factor_rec_wide(n, primes);
    collect(primes, f);
    return f;
}

int moebius(const Factorization& f) {
    for (const auto& pp : f.factors) {
        if (pp.e > 1) return 0;
    }
    return (f.factors.size() % 2) ? -1 : 1;
}

int moebius(u64 n) { return moebius(factor(n)); }

int omega_z(const Factorization& f, double z) {
    int c = 0;
    for (const auto& pp : f.factors) {
        if (static_cast<double>(pp.p) <= z) ++c;
    }
    return c;
}

int omega_z(u64 n, double z) { return omega_z(factor(n), z); }

bool is_squarefree(const Factorization& f) {
    return std::all_of(f.factors.begin(), f.factors.end(), [](const PrimePower& pp) { return pp.e == 1; });
}

u64 radical(const Factorization& f) {
    u64 r = 1;
    for (const auto& pp : f.factors) r *= pp.p;
    return r;
}

std::vector<u64> divisors_supported_on(std::span<const u64> primes, u64 bound) {
    std::vector<u64> ps(primes.begin(), primes.end());
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    std::vector<u64> out;
    if (bound == 0) return out;
    out.push_back(1);
    for (u64 p : ps) {
        if (p < 2) throw InvalidArgument("divisors_supported_on: entries must be primes");
        const std::size_t old = out.size();
        for (std::size_t i = 0; i < old; ++i) {
            u64 v = out[i];
            while (v <= bound / p) {
                v *= p;
                out.push_back(v);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<u64> divisors(const Factorization& f) {
    std::vector<u64> out{1};
    for (const auto& pp : f.factors) {
        const std::size_t old = out.size();
        u64 pk = 1;
        for (int e = 1; e <= pp.e; ++e) {
            pk *= pp.p;
            for (std::size_t i = 0; i < old; ++i) out.push_back(out[i] * pk);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<u64> primes_up_to(u64 n) {
    std::vector<u64> out;
    if (n < 2) return out;
    std::vector<bool> composite(n + 1, false);
    for (u64 i = 2; i <= n; ++i) {
        if (composite[i]) continue;
        out.push_back(i);
        for (u64 j = i * i; j <= n; j += i) composite[j] = true;
    }
    return out;
}

SpfTable::SpfTable(u64 n, u64 memory_budget_bytes) : limit_(n) {
    if (n >= (u64{1} << 32)) throw InvalidArgument("SpfTable: limit must be below 2^32");
    const u64 bytes = (n + 1) * sizeof(std::uint32_t);
    if (bytes > memory_budget_bytes) {
        throw ResourceError("SpfTable: " + std::to_string(bytes) + " bytes exceeds memory budget of " +
                            std::to_string(memory_budget_bytes));
    }
    table_.assign(n + 1, 0);
    const u64 root = static_cast<u64>(std::sqrt(static_cast<double>(n))) + 1;
    const std::vector<u64> base = primes_up_to(root);
    constexpr u64 segment = u64{1} << 18;
    for (u64 lo = 2; lo <= n; lo += segment) {
        const u64 hi = std::min(n, lo + segment - 1);
        for (u64 p : base) {
            if (p * p > hi) break;
            u64 start = std::max(p * p, (lo + p - 1) / p * p);
            for (u64 j = start; j <= hi; j += p) {
                if (table_[j] == 0) table_[j] = static_cast<std::uint32_t>(p);
            }
        }
        for (u64 j = lo; j <= hi; ++j) {
            if (table_[j] == 0) table_[j] = static_cast<std::uint32_t>(j);
        }
    }
}

u64 SpfTable::spf(u64 k) const {
    if (k > limit_) throw InvalidArgument("SpfTable::spf: argument beyond table limit");
    return table_[k];
}

int SpfTable::factor_into(u64 k, PrimePower* out) const {
    int cnt = 0;
    while (k > 1) {
        const u64 p = table_[k];
        int e = 0;
        do {
            k /= p;
            ++e;
        } while (k % p == 0);
        out[cnt++] = {p, e};
    }
    return cnt;
}

Factorization SpfTable::factor(u64 k) const {
    if (k == 0) throw InvalidArgument("factor: 0 has no factorization");
    if (k > limit_) throw InvalidArgument("SpfTable::factor: argument beyond table limit");
    Factorization f;
    f.value = k;
    PrimePower buf[16];
    int c = factor_into(k, buf);
    f.factors.assign(buf, buf + c);
    return f;
}

std::string to_string(u128 n) {
    if (n == 0) return "0";
    std::string s;
    while (n) {
        s.push_back(static_cast<char>('0' + static_cast<int>(n % 10)));
        n /= 10;
    }
    std::reverse(s.begin(), s.end());
    return s;
}

} // namespace normcount
