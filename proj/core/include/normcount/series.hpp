#pragma once

#include "normcount/arith.hpp"
#include "normcount/fields.hpp"
#include "normcount/form_spec.hpp"

#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace normcount {

// Multiplicative weight in the class U: u(k) = prod_{p | k} u(p), with
// |u(p) - 1| <= C / p.
struct LocalWeight {
    std::string name;
    std::function<double(u64)> at_prime;
    double C = 0;

    double operator()(const Factorization& k) const;
    // product over p | k with p not dividing `exclude`
    double restricted(const Factorization& k, u64 exclude) const;
};

LocalWeight unit_weight();
// v0(p) = (1 + 1/p)^{-1}
LocalWeight v0_weight();

struct TruncatedProduct {
    double value = 0;
    u64 cutoff = 0;
    // |limit - value| <= tail when `rigorous`; otherwise an estimate of the
    // remaining oscillation (conditionally convergent first-order part)
    double tail = 0;
    bool rigorous = false;
};

struct SeriesValue {
    double value = 0;
    double tail = 0;
};

// 1 + sum_nu psi_L(p^nu) w^nu for unramified p.
std::complex<double> local_psi_factor(const AbelianField& L, u64 p, double w);
// 1 + sum_nu psi_L(p^nu) x^nu for any p (explicit series at ramified p).
double psi_local_series(const AbelianField& L, u64 p, double x);

// Local factor of c_{F,L}(v) at p: 1 + sum_nu v(p) psi(p^nu) rho^-(p^nu) / p^nu.
double c_FL_local(const AbelianField& L, const FormSpec& F, const LocalWeight& v, u64 p);
// prod_{p <= P, p not dividing W} of the local factors.
TruncatedProduct c_FL(const AbelianField& L, const FormSpec& F, const LocalWeight& v, u64 W, u64 P);
// prod_{p | k, p not dividing W} local factor^{-1}
double u_FL(const AbelianField& L, const FormSpec& F, const LocalWeight& v, u64 W, const Factorization& k);

// rho^-(d) prod_{p | d} (1 + psi(p) + sum_{nu >= 2} psi(p^nu) / p^nu)
double g_FL(const AbelianField& L, const FormSpec& F, const Factorization& d);

// sigma_{k1}(a) = sum_{l | (a k1)^inf} psi(l) rho^-_{F, k1 a}(l; u) gcd(k1 l, a) / l
// truncated at l <= bound (capped at 10^9), with a rigorous tail bound.
SeriesValue sigma_k(const AbelianField& L, const FormSpec& F, u64 k1, u64 a, const LocalWeight& u, u64 W,
                    u64 bound);
// The same sum evaluated exactly as an Euler product.
double sigma_k_product(const AbelianField& L, const FormSpec& F, u64 k1, u64 a, u64 W);
// Closed product stated for a = d m^2 / gcd(d, m^2), d squarefree, k1 = 1:
// prod_{p | d, p !| m} (1 + sum_{nu>=1} psi(p^nu)/p^nu) prod_{p | m} (1 + psi(p) + sum_{nu>=2} psi(p^nu)/p^nu)
double sigma1_closed_product(const AbelianField& L, u64 d, u64 m, u64 W);

// psi(k) for 1 <= k <= y (index 0 unused).
std::vector<i64> psi_table(const AbelianField& L, u64 y);

// S(y, a, k1; v) = sum_{k <= y, (k, W) = 1} psi(k) rho^-_{F, k1 a}(k; v) gcd(k1 k, a) / k.
// Primes of k1 a that divide W contribute trivially.
double frakS(const AbelianField& L, const FormSpec& F, double y, u64 a, u64 k1, const LocalWeight& v, u64 W);
// Partial sums at several cutoffs in one pass (cutoffs ascending).
std::vector<double> frakS_partial(const AbelianField& L, const FormSpec& F, const std::vector<u64>& cutoffs, u64 a,
                                  u64 k1, const LocalWeight& v, u64 W);
// Same sum weighted by vol R(B, z k1 k); requires k1 z y <= b_F B^2.
double frakS_vol(const AbelianField& L, const FormSpec& F, double y, u64 a, u64 k1, const LocalWeight& v, u64 W,
                 double B, double z);

struct BoxSpec {
    // per-coordinate bounds, hi = 0 meaning unbounded; sizes n - 1
    std::vector<u64> lo;
    std::vector<u64> hi;
    // prod k_i <= product_cap (required, bounds the enumeration)
    u64 product_cap = 0;
    // when nonzero, drop tuples lying in [1, exclude_cube]^{n-1}
    u64 exclude_cube = 0;
};

struct VolumeWeight {
    double B = 0;
    double z = 0;
};

// sum over k in the box of Psi_L(k) rho^-_{F,a}(prod k; v) gcd(prod k, a) / prod k,
// optionally weighted by vol R(B, z prod k).
std::complex<double> frakS_box(const AbelianField& L, const FormSpec& F, const BoxSpec& box, u64 a,
                               const LocalWeight& v, u64 W, const VolumeWeight* vol = nullptr);

struct MertensValue {
    double value = 0;
    // value - log log z, NaN for z <= 3
    double constant = 0;
};

MertensValue mertens_rho(const FormSpec& F, double z);
// sum_{p <= z} psi_L(p) rho^-(p) / p
MertensValue mertens_twisted(const AbelianField& L, const FormSpec& F, double z);
// Both sums at several cutoffs in one pass.
std::vector<MertensValue> mertens_rho_at(const FormSpec& F, const std::vector<u64>& cutoffs);
std::vector<MertensValue> mertens_twisted_at(const AbelianField& L, const FormSpec& F,
                                             const std::vector<u64>& cutoffs);

// |(1 + sum_nu psi(p^nu) rho^-(p^nu) p^{-nu s}) prod_{P | p} prod_{chi != 1} (1 - chi(N P) N P^{-s}) - 1|
// for p not dividing q_L disc(F) F(1, 0); the product runs over primes P of Q(sqrt(disc F)).
double local_factor_identity(const AbelianField& L, const FormSpec& F, u64 p, double s);

} // namespace normcount
