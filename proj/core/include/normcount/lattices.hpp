#pragma once

#include "normcount/arith.hpp"
#include "normcount/form_spec.hpp"
#include "normcount/forms.hpp"

#include <optional>

namespace normcount {

struct ReducedLattice {
    double lambda1 = 0;
    // shortest vector, sign fixed so that t > 0 (or t = 0 and s > 0); among
    // several shortest vectors the one with smallest positive t wins
    i64 s = 0;
    i64 t = 0;
    // Gauss-Lagrange reduced basis, |b1| <= |b2|
    i64 b1s = 0, b1t = 0, b2s = 0, b2t = 0;
};

// Shortest vector of {(s, t) in Z^2 : s = xi t mod k}.
ReducedLattice lambda1(u64 k, i64 xi);

// #{(s, t) in R(B, z) : gcd(s, t) = 1, (s, t) = (s1, t1) mod W, k | F(s, t)},
// k coprime to W. Rows are enumerated over t; within a row the admissible s
// form progressions mod kW, counted with inclusion-exclusion over gcd(s, t).
u64 lambda_star_count(const FormSpec& F, i64 B, double z, u64 k, BasePoint base, u64 W);

// Brute-force reference for small B.
u64 lambda_star_count_naive(const FormSpec& F, i64 B, double z, u64 k, BasePoint base, u64 W);

// c' = W^{-2} prod_{p not dividing W} (1 - p^{-2}), product truncated at 10^6.
double coprime_class_density(u64 W);

// c' vol R(B, z) rho^-(k) v0(k) / k with v0(k) = prod_{p | k} (1 + 1/p)^{-1}.
double lambda_star_estimate(const FormSpec& F, i64 B, double z, u64 k, u64 W);

// sum_{k <= y} sum_{xi : F(xi, 1) = 0 mod k} 1 / lambda1(k, xi)
double inv_lambda1_sum(const FormSpec& F, u64 y);

} // namespace normcount
