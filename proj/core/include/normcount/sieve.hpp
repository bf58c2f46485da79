#pragma once

#include "normcount/arith.hpp"
#include "normcount/engine.hpp"
#include "normcount/fields.hpp"
#include "normcount/form_spec.hpp"
#include "normcount/forms.hpp"

#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace normcount {

enum class SieveSign { lower, upper };

// Combinatorial beta-sieve weights: lambda_d = mu(d) on the retained
// squarefree d with prime factors < z, zero elsewhere.
struct SieveWeights {
    double y = 0;
    double beta = 1;
    SieveSign sign = SieveSign::lower;
    double z = 0;
    // sieve primes ascending
    std::vector<u64> primes;
    // retained d ascending, with lambda_d
    std::vector<std::pair<u64, int>> support;

    int lambda(u64 d) const;
};

// d = p1 p2 ... pr with p1 > ... > pr is retained when
// p1 ... p_{m-1} p_m^{beta + 1} <= y for every odd m (upper) or every even m
// (lower), and d <= y. Primes dividing `coprime_to` are left out of the
// sieve. Requires beta >= 1 and every sieve prime <= y.
SieveWeights beta_weights(double y, double beta, SieveSign sign, double z, u64 coprime_to = 1);

// Checks lambda_1 = 1, |lambda_d| <= 1, lambda_d = 0 for d > y, and the sign
// of sum_{d | n} lambda_d for every squarefree 1 < n <= N with primes < z.
bool check_weights(const SieveWeights& w, u64 N);

struct FundamentalLemma {
    double sum_lower = 0;
    double sum_upper = 0;
    // prod_{p < z} (1 - g(p))
    double product = 0;
    double ratio_lower = 0;
    double ratio_upper = 0;
    // smallest kappa with prod_{w <= p < z} (1 - g(p))^{-1} <= (log z / log w)^kappa for 2 <= w < z
    double kappa = 0;
};

// Evaluates sum_d lambda_d^{+/-} g(d) against prod_{p < z} (1 - g(p)) for a
// multiplicative g given on primes; g(p) must lie in [0, 1).
FundamentalLemma fundamental_lemma_check(const std::function<double(u64)>& g, const SieveWeights& upper,
                                         const SieveWeights& lower, double z);

// M_d(B) = sum mu^2(F) r_L(F) over gcd(s, t) = 1, (s, t) = base mod W,
// d | F(s, t), for every d in `ds` from one sweep. d squarefree, coprime to W.
std::vector<u64> M_d_many(const AbelianField& L, const FormSpec& F, i64 B, const std::vector<u64>& ds,
                          BasePoint base, u64 W, const SweepConfig& opts = {});
u64 M_d(const AbelianField& L, const FormSpec& F, i64 B, u64 d, BasePoint base, u64 W, const SweepConfig& opts = {});

// S_d(B, m) = sum r_L(F) over the same class with [d, m^2] | F(s, t).
u64 S_d(const AbelianField& L, const FormSpec& F, i64 B, u64 d, u64 m, BasePoint base, u64 W,
        const SweepConfig& opts = {});
// sum_{m <= Y, gcd(m, W) = 1} mu(m) S_d(B, m), from one sweep.
i64 S_d_mobius_sum(const AbelianField& L, const FormSpec& F, i64 B, u64 d, u64 Y, BasePoint base, u64 W,
                   const SweepConfig& opts = {});

struct PipelineOptions {
    // defaults 1 / (8 n^2) and 1 / (16 n^2)
    std::optional<double> eps0;
    std::optional<double> eta;
    double beta = 1;
    u64 w0_min = 0;
    SweepConfig sweep{};
};

struct PipelineReport {
    i64 B = 0;
    int n = 0;
    // degree the detector uses: n, or n / 2 in the reducible branch
    int n_eff = 0;
    int r = 1;
    bool reducible = false;
    FieldSpec L0{};
    u64 W = 1;
    BasePoint base{};
    double eps0 = 0;
    double eta = 0;
    double y = 0;
    double z = 0;
    std::size_t weight_count = 0;
    // (a) sum mu^2(F) (1 / n_eff)^{omega(F, z)} r(F) over the class
    double direct = 0;
    // (b) sum_d lambda_d^- (1 - 1 / n_eff)^{omega(d)} M_d(B)
    double sieved = 0;
    // (a) >= (b), decided in integer arithmetic after scaling by n_eff^{pi(z)}
    bool inequality_holds = false;
    bool exact_comparison = false;
    // B^2 / (log B)^{1 - r/n}
    double predicted_order = 0;
    double ratio = 0;
};

// Lower-bound pipeline at one B. For fields containing Q(sqrt(disc F)) the
// reducible branch counts with r_{L0} and n / 2.
PipelineReport lower_bound_pipeline(const AbelianField& L, const FormSpec& F, i64 B, const PipelineOptions& opts = {});

} // namespace normcount
