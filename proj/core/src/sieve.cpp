#include "normcount/sieve.hpp"

#include "normcount/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <unordered_map>

namespace normcount {

namespace {

constexpr std::size_t max_support = 10'000'000;

std::vector<u64> sieve_primes_below(double z, u64 coprime_to) {
    std::vector<u64> out;
    if (z <= 2) return out;
    const u64 zi = static_cast<u64>(std::ceil(z)) - 1;
    for (u64 p : primes_up_to(zi)) {
        if (static_cast<double>(p) < z && coprime_to % p != 0) out.push_back(p);
    }
    return out;
}

} // namespace

int SieveWeights::lambda(u64 d) const {
    auto it = std::lower_bound(support.begin(), support.end(), std::make_pair(d, std::numeric_limits<int>::min()));
    return it != support.end() && it->first == d ? it->second : 0;
}

SieveWeights beta_weights(double y, double beta, SieveSign sign, double z, u64 coprime_to) {
    if (!(y > 1)) throw InvalidArgument("beta_weights: level y must exceed 1");
    if (!(beta >= 1)) throw InvalidArgument("beta_weights: beta must be >= 1");
    if (!(z >= 2)) throw InvalidArgument("beta_weights: z must be >= 2");
    if (coprime_to == 0) throw InvalidArgument("beta_weights: coprime_to must be positive");
    SieveWeights w;
    w.y = y;
    w.beta = beta;
    w.sign = sign;
    w.z = z;
    w.primes = sieve_primes_below(z, coprime_to);
    if (!w.primes.empty() && static_cast<double>(w.primes.back()) > y) {
        throw InvalidArgument("beta_weights: sieve primes must not exceed the level y");
    }

    // depth-first over p1 > p2 > ...; m is the index of the prime being added
    const int checked_parity = sign == SieveSign::upper ? 1 : 0;
    std::vector<u64> desc(w.primes.rbegin(), w.primes.rend());
    w.support.push_back({1, 1});
    struct Frame {
        std::size_t next;
        double prefix;
        int m;
        int mu;
    };
    std::vector<Frame> stack{{0, 1.0, 0, 1}};
    while (!stack.empty()) {
        Frame f = stack.back();
        stack.pop_back();
        for (std::size_t i = f.next; i < desc.size(); ++i) {
            const double p = static_cast<double>(desc[i]);
            const int m = f.m + 1;
            if (m % 2 == checked_parity && f.prefix * std::pow(p, beta + 1) > y) continue;
            const double d = f.prefix * p;
            if (d > y) continue;
            w.support.push_back({static_cast<u64>(std::llround(d)), -f.mu});
            if (w.support.size() > max_support) throw ResourceError("beta_weights: support too large");
            stack.push_back({i + 1, d, m, -f.mu});
        }
    }
    std::sort(w.support.begin(), w.support.end());
    return w;
}

bool check_weights(const SieveWeights& w, u64 N) {
    if (w.lambda(1) != 1) return false;
    for (const auto& [d, l] : w.support) {
        if (l < -1 || l > 1) return false;
        if (l != 0 && static_cast<double>(d) > w.y) return false;
    }
    // enumerate squarefree n <= N over the sieve primes
    std::vector<u64> chosen;
    bool ok = true;
    auto divisor_sum = [&] {
        long s = 0;
        const std::size_t k = chosen.size();
        for (u64 mask = 0; mask < (u64{1} << k); ++mask) {
            u64 d = 1;
            for (std::size_t i = 0; i < k; ++i) {
                if (mask >> i & 1) d *= chosen[i];
            }
            s += w.lambda(d);
        }
        return s;
    };
    auto rec = [&](auto&& self, std::size_t start, u64 n) -> void {
        if (!ok) return;
        if (n > 1) {
            const long s = divisor_sum();
            if (w.sign == SieveSign::lower ? s > 0 : s < 0) {
                ok = false;
                return;
            }
        }
        for (std::size_t i = start; i < w.primes.size(); ++i) {
            const u64 p = w.primes[i];
            if (n > N / p) break;
            chosen.push_back(p);
            self(self, i + 1, n * p);
            chosen.pop_back();
        }
    };
    rec(rec, 0, 1);
    return ok;
}

FundamentalLemma fundamental_lemma_check(const std::function<double(u64)>& g, const SieveWeights& upper,
                                         const SieveWeights& lower, double z) {
    if (upper.sign != SieveSign::upper || lower.sign != SieveSign::lower) {
        throw InvalidArgument("fundamental_lemma_check: weights passed in the wrong order");
    }
    const auto primes = sieve_primes_below(z, 1);
    std::unordered_map<u64, double> gp;
    for (u64 p : primes) {
        const double v = g(p);
        if (!(v >= 0 && v < 1)) {
            throw InvalidArgument("fundamental_lemma_check: g(" + std::to_string(p) + ") outside [0, 1)");
        }
        gp[p] = v;
    }
    auto g_of = [&](u64 d) {
        double v = 1;
        for (u64 p : primes) {
            if (d % p == 0) {
                v *= gp[p];
                d /= p;
            }
        }
        if (d != 1) throw InvalidArgument("fundamental_lemma_check: weights use primes outside p < z");
        return v;
    };
    FundamentalLemma r;
    for (const auto& [d, l] : upper.support) r.sum_upper += l * g_of(d);
    for (const auto& [d, l] : lower.support) r.sum_lower += l * g_of(d);
    r.product = 1;
    for (u64 p : primes) r.product *= 1 - gp[p];
    r.ratio_upper = r.sum_upper / r.product;
    r.ratio_lower = r.sum_lower / r.product;

    const double logz = std::log(z);
    double tail = 0;
    for (std::size_t i = primes.size(); i-- > 0;) {
        tail -= std::log1p(-gp[primes[i]]);
        const double denom = std::log(logz / std::log(static_cast<double>(primes[i])));
        if (denom > 0) r.kappa = std::max(r.kappa, tail / denom);
    }
    return r;
}

namespace {

void check_class_args(i64 B, u64 W, u64 d) {
    if (B < 1) throw InvalidArgument("sieve sums: B must be positive");
    if (W == 0 || d == 0) throw InvalidArgument("sieve sums: W and d must be positive");
    if (gcd(d, W) != 1) throw InvalidArgument("sieve sums: d must be coprime to W");
    if (!is_squarefree(factor(d))) throw InvalidArgument("sieve sums: d must be squarefree");
}

SweepConfig class_sweep(const SweepConfig& opts, i64 B, BasePoint base, u64 W, bool squarefree) {
    SweepConfig c = opts;
    c.B = B;
    c.W = W;
    c.base = base;
    c.coprime_only = true;
    c.squarefree_only = squarefree;
    return c;
}

// Index of the d-values by their prime sets for divisor lookups.
struct DivisorIndex {
    std::vector<u64> primes;
    std::unordered_map<u64, std::size_t> slot;

    explicit DivisorIndex(const std::vector<u64>& ds) {
        for (std::size_t i = 0; i < ds.size(); ++i) {
            slot.emplace(ds[i], i);
            for (const auto& pp : factor(ds[i]).factors) primes.push_back(pp.p);
        }
        std::sort(primes.begin(), primes.end());
        primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
    }

    template <class Add>
    void for_each_divisor(const SweepPoint& pt, Add add) const {
        u64 rel[SweepPoint::max_factors];
        int k = 0;
        for (const auto& pp : pt.primes()) {
            if (std::binary_search(primes.begin(), primes.end(), pp.p)) rel[k++] = pp.p;
        }
        for (u64 mask = 0; mask < (u64{1} << k); ++mask) {
            u64 d = 1;
            for (int i = 0; i < k; ++i) {
                if (mask >> i & 1) d *= rel[i];
            }
            auto it = slot.find(d);
            if (it != slot.end()) add(it->second);
        }
    }
};

} // namespace

std::vector<u64> M_d_many(const AbelianField& L, const FormSpec& F, i64 B, const std::vector<u64>& ds,
                          BasePoint base, u64 W, const SweepConfig& opts) {
    for (u64 d : ds) check_class_args(B, W, d);
    const DivisorIndex index(ds);
    SweepContext ctx(F, class_sweep(opts, B, base, W, true));
    using Acc = std::vector<u64>;
    return sweep_reduce(
        ctx, Acc(ds.size(), 0),
        [&](const SweepPoint& pt, Acc& acc) {
            const u64 r = r_L_point(L, pt);
            if (r == 0) return;
            index.for_each_divisor(pt, [&](std::size_t i) { acc[i] += r; });
        },
        [](Acc& a, const Acc& b) {
            for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
        });
}

u64 M_d(const AbelianField& L, const FormSpec& F, i64 B, u64 d, BasePoint base, u64 W, const SweepConfig& opts) {
    return M_d_many(L, F, B, {d}, base, W, opts).front();
}

u64 S_d(const AbelianField& L, const FormSpec& F, i64 B, u64 d, u64 m, BasePoint base, u64 W,
        const SweepConfig& opts) {
    check_class_args(B, W, d);
    if (m == 0 || gcd(m, W) != 1) throw InvalidArgument("S_d: m must be positive and coprime to W");
    const u128 m2 = static_cast<u128>(m) * m;
    // lcm(d, m^2)
    const u128 l = static_cast<u128>(d / gcd(d, static_cast<u64>(m2 % d))) * m2;
    SweepContext ctx(F, class_sweep(opts, B, base, W, false));
    return sweep_reduce(
        ctx, u64{0},
        [&](const SweepPoint& pt, u64& acc) {
            if (static_cast<u128>(pt.abs_value) % l == 0) acc += r_L_point(L, pt);
        },
        [](u64& a, u64 b) { a += b; });
}

i64 S_d_mobius_sum(const AbelianField& L, const FormSpec& F, i64 B, u64 d, u64 Y, BasePoint base, u64 W,
                   const SweepConfig& opts) {
    check_class_args(B, W, d);
    SweepContext ctx(F, class_sweep(opts, B, base, W, false));
    return sweep_reduce(
        ctx, i64{0},
        [&](const SweepPoint& pt, i64& acc) {
            if (pt.abs_value % d != 0) return;
            const i64 r = static_cast<i64>(r_L_point(L, pt));
            if (r == 0) return;
            u64 sq[SweepPoint::max_factors];
            int k = 0;
            for (const auto& pp : pt.primes()) {
                if (pp.e >= 2 && W % pp.p != 0) sq[k++] = pp.p;
            }
            // squarefree m <= Y with m^2 | F
            i64 mu_sum = 0;
            for (u64 mask = 0; mask < (u64{1} << k); ++mask) {
                u64 m = 1;
                int sgn = 1;
                bool small = true;
                for (int i = 0; i < k && small; ++i) {
                    if (mask >> i & 1) {
                        if (m > Y / sq[i]) small = false;
                        m *= sq[i];
                        sgn = -sgn;
                    }
                }
                if (small && m <= Y) mu_sum += sgn;
            }
            acc += mu_sum * r;
        },
        [](i64& a, i64 b) { a += b; });
}

PipelineReport lower_bound_pipeline(const AbelianField& L, const FormSpec& F, i64 B, const PipelineOptions& opts) {
    if (B < 2) throw InvalidArgument("lower_bound_pipeline: B must be >= 2");
    PipelineReport rep;
    rep.B = B;
    rep.n = L.degree();
    rep.r = factor_count_over_L(L, F);
    rep.reducible = rep.r == 2;
    std::unique_ptr<AbelianField> L0;
    if (rep.reducible) {
        rep.L0 = construct_L0(L, F);
        L0 = std::make_unique<AbelianField>(rep.L0);
    }
    const AbelianField& R = rep.reducible ? *L0 : L;
    rep.n_eff = rep.reducible ? rep.n / 2 : rep.n;
    const double ne = rep.n_eff;
    rep.eps0 = opts.eps0.value_or(1.0 / (8 * ne * ne));
    rep.eta = opts.eta.value_or(1.0 / (16 * ne * ne));
    if (!(rep.eps0 > 0 && rep.eta > 0 && rep.eta < rep.eps0 && rep.eps0 < 1)) {
        throw InvalidArgument("lower_bound_pipeline: need 0 < eta < eps0 < 1");
    }
    rep.W = compute_W(L, F, opts.w0_min).W;
    rep.base = find_base_point(L, F, rep.W);
    const double logB = std::log(static_cast<double>(B));
    rep.y = std::exp(rep.eps0 * logB);
    rep.z = std::exp(rep.eta * logB);

    // primes p <= z; the strict bound inside beta_weights sits between integers
    const double z_strict = std::floor(rep.z) + 0.5;
    SieveWeights w;
    if (z_strict >= 2) {
        w = beta_weights(rep.y, opts.beta, SieveSign::lower, z_strict, rep.W);
    } else {
        w.y = rep.y;
        w.z = z_strict;
        w.support = {{1, 1}};
    }
    rep.weight_count = w.support.size();
    std::vector<u64> ds;
    for (const auto& [d, l] : w.support) {
        if (l != 0) ds.push_back(d);
    }
    const int pi_z = static_cast<int>(w.primes.size());
    const u64 n_eff = static_cast<u64>(rep.n_eff);
    rep.exact_comparison = pi_z * std::log2(ne) <= 40;

    // one sweep for (a) and every M_d
    struct Acc {
        i128 a_scaled = 0;
        long double a_float = 0;
        std::vector<u64> M;
    };
    std::vector<u128> npow(pi_z + 1, 1);
    for (int i = 1; i <= pi_z; ++i) npow[i] = rep.exact_comparison ? npow[i - 1] * n_eff : 0;
    const DivisorIndex index(ds);
    SweepContext ctx(F, class_sweep(opts.sweep, B, rep.base, rep.W, true));
    Acc init;
    init.M.assign(ds.size(), 0);
    Acc total = sweep_reduce(
        ctx, init,
        [&](const SweepPoint& pt, Acc& acc) {
            const u64 r = r_L_point(R, pt);
            if (r == 0) return;
            int om = 0;
            for (const auto& pp : pt.primes()) om += static_cast<double>(pp.p) <= rep.z;
            if (rep.exact_comparison) {
                acc.a_scaled += static_cast<i128>(r) * static_cast<i128>(npow[pi_z - om]);
            } else {
                acc.a_float += static_cast<long double>(r) * std::pow(static_cast<long double>(ne), -om);
            }
            index.for_each_divisor(pt, [&](std::size_t i) { acc.M[i] += r; });
        },
        [](Acc& a, const Acc& b) {
            a.a_scaled += b.a_scaled;
            a.a_float += b.a_float;
            for (std::size_t i = 0; i < a.M.size(); ++i) a.M[i] += b.M[i];
        });

    i128 b_scaled = 0;
    long double b_float = 0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const u64 d = ds[i];
        const int lam = w.lambda(d);
        const int om = static_cast<int>(factor(d).factors.size());
        if (rep.exact_comparison) {
            i128 coef = lam;
            for (int k = 0; k < om; ++k) coef *= static_cast<i128>(n_eff - 1);
            coef *= static_cast<i128>(npow[pi_z - om]);
            b_scaled += coef * static_cast<i128>(total.M[i]);
        } else {
            b_float += lam * std::pow(1.0L - 1.0L / ne, om) * static_cast<long double>(total.M[i]);
        }
    }
    if (rep.exact_comparison) {
        const long double scale = static_cast<long double>(npow[pi_z]);
        rep.direct = static_cast<double>(static_cast<long double>(total.a_scaled) / scale);
        rep.sieved = static_cast<double>(static_cast<long double>(b_scaled) / scale);
        rep.inequality_holds = total.a_scaled >= b_scaled;
    } else {
        rep.direct = static_cast<double>(total.a_float);
        rep.sieved = static_cast<double>(b_float);
        rep.inequality_holds = total.a_float >= b_float;
    }
    rep.predicted_order = static_cast<double>(B) * static_cast<double>(B) /
                          std::pow(logB, 1.0 - static_cast<double>(rep.r) / rep.n);
    rep.ratio = rep.direct / rep.predicted_order;
    return rep;
}

} // namespace normcount
