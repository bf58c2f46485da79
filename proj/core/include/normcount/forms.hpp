#pragma once

#include "normcount/arith.hpp"
#include "normcount/fields.hpp"
#include "normcount/form_spec.hpp"

#include <string>
#include <vector>

namespace normcount {

// sup of |F| on [-1, 1]^2.
double b_F(const FormSpec& F);

// Roots of A x^2 + B x + C modulo p^nu, ascending. Exhaustive when p^nu is
// small, Hensel lifting otherwise (scan-and-lift above singular roots).
std::vector<u64> quadratic_roots_mod_prime_power(i64 A, i64 B, i64 C, u64 p, int nu);

// #{xi mod p^nu : F(xi, 1) = 0 mod p^nu}
u64 rho_minus_pp(const FormSpec& F, u64 p, int nu);
// Multiplicative extension over prime powers of k coprime to a.
u64 rho_minus(const FormSpec& F, const Factorization& k, u64 a = 1);
u64 rho_minus(const FormSpec& F, u64 k, u64 a = 1);
// #{(x, y) mod k : F(x, y) = 0 mod k}
u64 rho_full_pp(const FormSpec& F, u64 p, int nu);
u64 rho_full(const FormSpec& F, u64 k);
// Roots of F(x, 1) mod k combined by CRT, ascending.
std::vector<u64> roots_mod(const FormSpec& F, const Factorization& k);
std::vector<u64> roots_mod(const FormSpec& F, u64 k);

struct SieveModulus {
    u64 w0 = 0;
    u64 W = 1;
    // which lower bounds determined w0
    std::vector<std::string> reasons;
};

// W = prod_{p <= w0} p^{max(1, v_p(q_L))} with
// w0 >= max(w0_min, q_L, 2n + 1, 1 + largest prime of disc(F) F(0, 1)),
// enlarged further until the local factors of u_{F,L} lie in (1/2, 2).
SieveModulus compute_W(const AbelianField& L, const FormSpec& F, u64 w0_min = 0);

struct BasePoint {
    i64 s = 0;
    i64 t = 0;
    friend bool operator==(const BasePoint&, const BasePoint&) = default;
};

bool is_admissible_base_point(const AbelianField& L, const FormSpec& F, u64 W, i64 s, i64 t);
// Lexicographically first (s1, t1) in [0, W)^2 with F(s1, t1) a unit mod W
// and chi(F(s1, t1)) = 1 for every character of L. Throws HypothesisError.
BasePoint find_base_point(const AbelianField& L, const FormSpec& F, u64 W);

} // namespace normcount
