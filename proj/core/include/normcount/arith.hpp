#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace normcount {

using u64 = std::uint64_t;
using i64 = std::int64_t;
__extension__ typedef unsigned __int128 u128;
__extension__ typedef __int128 i128;

template <class T>
struct BasicPrimePower {
    T p;
    int e;
    friend bool operator==(const BasicPrimePower&, const BasicPrimePower&) = default;
};

// Prime factorization, primes strictly ascending, exponents >= 1.
template <class T>
struct BasicFactorization {
    T value = 1;
    std::vector<BasicPrimePower<T>> factors;
    friend bool operator==(const BasicFactorization&, const BasicFactorization&) = default;
};

using PrimePower = BasicPrimePower<u64>;
using Factorization = BasicFactorization<u64>;
using WideFactorization = BasicFactorization<u128>;

u64 mulmod(u64 a, u64 b, u64 m);
u64 powmod(u64 a, u64 e, u64 m);
u64 gcd(u64 a, u64 b);
// gcd(|a|, |b|)
inline u64 gcd_abs(i64 a, i64 b) {
    return gcd(a < 0 ? 0 - static_cast<u64>(a) : static_cast<u64>(a),
               b < 0 ? 0 - static_cast<u64>(b) : static_cast<u64>(b));
}
i64 floor_mod(i64 a, i64 m);
// Inverse of a modulo m; throws InvalidArgument when gcd(a, m) != 1.
u64 invmod(u64 a, u64 m);
// Kronecker symbol (a/n) for n >= 1.
int kronecker(i64 a, u64 n);
// Square root of a modulo an odd prime p; requires (a/p) != -1.
u64 sqrtmod_prime(u64 a, u64 p);
// Euler phi.
u64 euler_phi(u64 n);
bool is_perfect_square(i64 n);

// Deterministic for n < 2^64.
bool is_prime(u64 n);
// Deterministic below 3.3e24, strong-probable-prime test above.
bool is_prime_wide(u128 n);

// Trial division below 10^6, then Miller-Rabin and Pollard rho.
// factor(0) throws InvalidArgument; factor(1) has no factors.
Factorization factor(u64 n);
WideFactorization factor_wide(u128 n);

int moebius(const Factorization& f);
int moebius(u64 n);
// Number of distinct prime factors p <= z.
int omega_z(const Factorization& f, double z);
int omega_z(u64 n, double z);
bool is_squarefree(const Factorization& f);
u64 radical(const Factorization& f);

// Sorted list of all n <= bound whose prime factors lie in `primes`.
std::vector<u64> divisors_supported_on(std::span<const u64> primes, u64 bound);
// All divisors of the factored number, ascending.
std::vector<u64> divisors(const Factorization& f);

std::vector<u64> primes_up_to(u64 n);

// Smallest-prime-factor table on [0, n], built segment by segment.
class SpfTable {
public:
    static constexpr u64 default_memory_budget = u64{512} << 20;

    explicit SpfTable(u64 n, u64 memory_budget_bytes = default_memory_budget);

    u64 limit() const { return limit_; }
    // spf(0) and spf(1) are 0.
    u64 spf(u64 k) const;
    Factorization factor(u64 k) const;
    // Writes prime powers of k into out, returns the count.
    int factor_into(u64 k, PrimePower* out) const;

private:
    u64 limit_;
    std::vector<std::uint32_t> table_;
};

std::string to_string(u128 n);

} // namespace normcount
