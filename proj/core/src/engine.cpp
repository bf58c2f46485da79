#include "normcount/engine.hpp"

#include <cmath>
#include <map>
#include <memory>

namespace normcount {

namespace {

// product of the first 15 primes; smaller values have at most 15 distinct primes
constexpr u64 factor_capacity_bound = 614889782588491410ULL;

u64 isqrt(u64 n) {
    u64 r = static_cast<u64>(std::sqrt(static_cast<long double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

u64 abs_u64(i128 v) { return static_cast<u64>(v < 0 ? -v : v); }

void push_factor(SweepPoint& pt, u64 p, int e) {
    if (pt.nf >= SweepPoint::max_factors) throw ResourceError("sweep: too many prime factors");
    pt.factors[pt.nf++] = {p, e};
}

} // namespace

std::string to_string(Strategy s) {
    switch (s) {
    case Strategy::automatic: return "automatic";
    case Strategy::naive: return "naive";
    case Strategy::spf_table: return "spf_table";
    case Strategy::row_sieve: return "row_sieve";
    }
    return "?";
}

Strategy parse_strategy(const std::string& name) {
    if (name == "automatic" || name == "auto") return Strategy::automatic;
    if (name == "naive") return Strategy::naive;
    if (name == "spf_table") return Strategy::spf_table;
    if (name == "row_sieve") return Strategy::row_sieve;
    throw InvalidArgument("unknown strategy '" + name + "'");
}

bool SweepPoint::squarefree() const {
    for (int i = 0; i < nf; ++i) {
        if (factors[i].e > 1) return false;
    }
    return true;
}

Factorization SweepPoint::factorization() const {
    Factorization f;
    f.value = abs_value;
    f.factors.assign(factors, factors + nf);
    return f;
}

bool same_point(const SweepPoint& x, const SweepPoint& y) {
    if (x.s != y.s || x.t != y.t || x.value != y.value || x.nf != y.nf) return false;
    for (int i = 0; i < x.nf; ++i) {
        if (!(x.factors[i] == y.factors[i])) return false;
    }
    return true;
}

struct SweepContext::Table {
    SpfTable spf;
};

SweepContext::SweepContext(const FormSpec& F, const SweepConfig& cfg) : F_(F), cfg_(cfg) {
    if (cfg.B < 1) throw InvalidArgument("sweep: B must be positive");
    if (cfg.W == 0) throw InvalidArgument("sweep: W must be positive");
    if (cfg.B > (i64{1} << 30)) throw InvalidArgument("sweep: B too large");
    const long double bound = static_cast<long double>(b_F(F)) * cfg.B * cfg.B;
    if (bound * 1.000001L + 2 >= static_cast<long double>(factor_capacity_bound)) {
        throw InvalidArgument("sweep: b_F B^2 exceeds the supported value range");
    }
    max_abs_ = static_cast<u64>(bound * 1.000001L) + 2;

    strategy_ = cfg.strategy;
    if (strategy_ == Strategy::automatic) strategy_ = cfg.B > 512 ? Strategy::row_sieve : Strategy::spf_table;
    threads_ = cfg.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cfg.threads;

    const i64 w = static_cast<i64>(cfg.W);
    step_ = w;
    s0_ = -cfg.B + floor_mod(cfg.base.s + cfg.B, w);
    for (i64 t = -cfg.B + floor_mod(cfg.base.t + cfg.B, w); t <= cfg.B; t += w) rows_.push_back(t);

    if (strategy_ == Strategy::spf_table) {
        if (max_abs_ >= (u64{1} << 32)) throw ResourceError("sweep: spf_table needs b_F B^2 < 2^32; use row_sieve");
        spf_ = new Table{SpfTable(max_abs_, cfg.memory_budget)};
    } else if (strategy_ == Strategy::row_sieve) {
        sieve_primes_ = primes_up_to(isqrt(max_abs_) + 1);
        sieve_roots_.reserve(sieve_primes_.size());
        for (u64 p : sieve_primes_) sieve_roots_.push_back(quadratic_roots_mod_prime_power(F.a, F.b, F.c, p, 1));
    }
}

SweepContext::~SweepContext() { delete spf_; }

std::span<const SweepPoint> SweepContext::factor_row(i64 t, RowScratch& scratch) const {
    scratch.points.clear();
    if (strategy_ == Strategy::row_sieve) {
        sieve_row(t, scratch);
    } else {
        direct_row(t, scratch);
    }
    return scratch.points;
}

void SweepContext::direct_row(i64 t, RowScratch& scratch) const {
    for (i64 s = s0_; s <= cfg_.B; s += step_) {
        if (cfg_.coprime_only && gcd_abs(s, t) != 1) continue;
        const i128 v = F_.eval(s, t);
        if (v == 0) continue;
        SweepPoint pt;
        pt.s = s;
        pt.t = t;
        pt.value = v;
        pt.abs_value = abs_u64(v);
        if (strategy_ == Strategy::spf_table) {
            pt.nf = spf_->spf.factor_into(pt.abs_value, pt.factors);
        } else {
            for (const auto& pp : factor(pt.abs_value).factors) push_factor(pt, pp.p, pp.e);
        }
        if (cfg_.squarefree_only && !pt.squarefree()) continue;
        scratch.points.push_back(pt);
    }
}

void SweepContext::sieve_row(i64 t, RowScratch& scratch) const {
    const std::size_t len = static_cast<std::size_t>((cfg_.B - s0_) / step_ + 1);
    auto& pts = scratch.points;
    auto& cof = scratch.cofactor;
    auto& keep = scratch.keep;
    pts.resize(len);
    cof.assign(len, 0);
    keep.assign(len, 1);
    for (std::size_t j = 0; j < len; ++j) {
        const i64 s = s0_ + static_cast<i64>(j) * step_;
        SweepPoint& pt = pts[j];
        pt.s = s;
        pt.t = t;
        pt.nf = 0;
        if (cfg_.coprime_only && gcd_abs(s, t) != 1) {
            keep[j] = 0;
            continue;
        }
        pt.value = F_.eval(s, t);
        if (pt.value == 0) {
            keep[j] = 0;
            continue;
        }
        pt.abs_value = abs_u64(pt.value);
        cof[j] = pt.abs_value;
    }

    auto hit = [&](std::size_t j, u64 p) {
        if (!keep[j]) return;
        int e = 0;
        while (cof[j] % p == 0) {
            cof[j] /= p;
            ++e;
        }
        if (e > 0) push_factor(pts[j], p, e);
    };

    for (std::size_t i = 0; i < sieve_primes_.size(); ++i) {
        const u64 p = sieve_primes_[i];
        const i64 pi = static_cast<i64>(p);
        const u64 tp = static_cast<u64>(floor_mod(t, pi));
        // residues of s mod p with p | F(s, t)
        u64 res_buf[2];
        std::span<const u64> residues;
        bool all = false;
        if (tp != 0) {
            const auto& roots = sieve_roots_[i];
            if (roots.size() == p) {
                all = true;
            } else {
                for (std::size_t k = 0; k < roots.size(); ++k) res_buf[k] = mulmod(roots[k], tp, p);
                residues = {res_buf, roots.size()};
            }
        } else if (floor_mod(F_.a, pi) == 0) {
            all = true;
        } else {
            res_buf[0] = 0;
            residues = {res_buf, 1};
        }
        if (all) {
            for (std::size_t j = 0; j < len; ++j) hit(j, p);
            continue;
        }
        const u64 s0p = static_cast<u64>(floor_mod(s0_, pi));
        const u64 stepp = static_cast<u64>(floor_mod(step_, pi));
        if (stepp == 0) {
            // s is constant mod p along the row
            for (u64 r : residues) {
                if (r == s0p) {
                    for (std::size_t j = 0; j < len; ++j) hit(j, p);
                }
            }
            continue;
        }
        const u64 inv = step_ == 1 ? 1 : invmod(stepp, p);
        for (u64 r : residues) {
            const u64 j0 = mulmod((r + p - s0p) % p, inv, p);
            for (std::size_t j = j0; j < len; j += p) hit(j, p);
        }
    }

    std::size_t out = 0;
    for (std::size_t j = 0; j < len; ++j) {
        if (!keep[j]) continue;
        // no prime factor up to sqrt(max |F|) is left, so the cofactor is 1 or prime
        if (cof[j] > 1) push_factor(pts[j], cof[j], 1);
        if (cfg_.squarefree_only && !pts[j].squarefree()) continue;
        if (out != j) pts[out] = pts[j];
        ++out;
    }
    pts.resize(out);
}

std::vector<SweepPoint> collect_stream(const FormSpec& F, const SweepConfig& cfg) {
    SweepContext ctx(F, cfg);
    using Vec = std::vector<SweepPoint>;
    return sweep_reduce(
        ctx, Vec{}, [](const SweepPoint& pt, Vec& acc) { acc.push_back(pt); },
        [](Vec& total, Vec& part) { total.insert(total.end(), part.begin(), part.end()); });
}

std::string to_string(NegativeNorms s) {
    switch (s) {
    case NegativeNorms::automatic: return "auto";
    case NegativeNorms::assume_ok: return "assume_ok";
    case NegativeNorms::reject: return "reject";
    }
    return "?";
}

NegativeNorms parse_negative_norms(const std::string& name) {
    if (name == "auto" || name == "automatic") return NegativeNorms::automatic;
    if (name == "assume_ok") return NegativeNorms::assume_ok;
    if (name == "reject") return NegativeNorms::reject;
    throw InvalidArgument("unknown negative_norms policy '" + name + "'");
}

bool negative_values_allowed(const AbelianField& L, NegativeNorms policy) {
    switch (policy) {
    case NegativeNorms::assume_ok: return true;
    case NegativeNorms::reject: return false;
    case NegativeNorms::automatic: break;
    }
    if (!L.is_totally_real()) return false;
    if (L.degree() % 2 == 1) return true;
    throw HypothesisError("negative_norms: totally real L of even degree; whether -1 is a norm of a unit is not "
                          "decided, set negative_norms = assume_ok or reject");
}

std::string to_string(CountMode m) {
    return m == CountMode::exact_norm ? "exact_norm" : "squarefree_detector";
}

CountMode parse_count_mode(const std::string& name) {
    if (name == "exact_norm") return CountMode::exact_norm;
    if (name == "squarefree_detector") return CountMode::squarefree_detector;
    throw InvalidArgument("unknown count mode '" + name + "'");
}

bool is_norm_value(const AbelianField& L, const SweepPoint& pt, bool negatives_ok) {
    if (pt.value < 0 && !negatives_ok) return false;
    for (const auto& pp : pt.primes()) {
        if (pp.e % L.local_f(pp.p) != 0) return false;
    }
    return true;
}

bool is_detected_value(const AbelianField& L, const SweepPoint& pt, bool negatives_ok) {
    if (pt.value < 0 && !negatives_ok) return false;
    for (const auto& pp : pt.primes()) {
        if (pp.e != 1 || L.is_ramified(pp.p) || L.local_f(pp.p) != 1) return false;
    }
    return true;
}

u64 r_L_point(const AbelianField& L, const SweepPoint& pt) {
    u64 r = 1;
    for (const auto& pp : pt.primes()) {
        r *= L.r_L_local(pp.p, pp.e);
        if (r == 0) break;
    }
    return r;
}

namespace {

void require_pid(const AbelianField& L) {
    if (!L.spec().pid) {
        throw HypothesisError("exact_norm requires O_L to be a principal ideal domain (set pid = true in [field])");
    }
}

bool in_class(const SweepPoint& pt, u64 W, BasePoint base) {
    const i64 w = static_cast<i64>(W);
    return floor_mod(pt.s - base.s, w) == 0 && floor_mod(pt.t - base.t, w) == 0;
}

bool loc_condition(const AbelianField& L, const SweepPoint& pt, bool negatives_ok) {
    return is_norm_value(L, pt, negatives_ok);
}

} // namespace

u64 count_NFL(const AbelianField& L, const FormSpec& F, const SweepConfig& cfg, CountMode mode,
              NegativeNorms policy) {
    const bool neg = negative_values_allowed(L, policy);
    if (mode == CountMode::exact_norm) {
        require_pid(L);
        SweepContext ctx(F, cfg);
        return sweep_reduce(
            ctx, u64{0}, [&](const SweepPoint& pt, u64& acc) { acc += is_norm_value(L, pt, neg); },
            [](u64& a, u64 b) { a += b; });
    }
    SweepConfig c = cfg;
    c.coprime_only = true;
    c.squarefree_only = true;
    SweepContext ctx(F, c);
    return sweep_reduce(
        ctx, u64{0}, [&](const SweepPoint& pt, u64& acc) { acc += is_detected_value(L, pt, neg); },
        [](u64& a, u64 b) { a += b; });
}

std::vector<BoxCounts> count_all(const AbelianField& L, const FormSpec& F, std::vector<i64> Bs, const SweepConfig& cfg,
                                 NegativeNorms policy) {
    if (Bs.empty()) throw InvalidArgument("count_all: no box sizes");
    std::sort(Bs.begin(), Bs.end());
    Bs.erase(std::unique(Bs.begin(), Bs.end()), Bs.end());
    if (Bs.front() < 1) throw InvalidArgument("count_all: B must be positive");
    require_pid(L);
    const bool neg = negative_values_allowed(L, policy);

    SweepConfig c = cfg;
    c.B = Bs.back();
    c.W = 1;
    c.base = {};
    c.coprime_only = false;
    c.squarefree_only = false;
    SweepContext ctx(F, c);

    const std::size_t nb = Bs.size();
    // per bucket: points, exact, detector, loc, varpi
    using Acc = std::vector<u64>;
    Acc init(nb * 5, 0);
    Acc total = sweep_reduce(
        ctx, init,
        [&](const SweepPoint& pt, Acc& acc) {
            const i64 h = std::max(pt.s < 0 ? -pt.s : pt.s, pt.t < 0 ? -pt.t : pt.t);
            const std::size_t b = static_cast<std::size_t>(std::lower_bound(Bs.begin(), Bs.end(), h) - Bs.begin());
            u64* row = acc.data() + b * 5;
            ++row[0];
            const bool norm = is_norm_value(L, pt, neg);
            row[1] += norm;
            if (in_class(pt, cfg.W, cfg.base) && gcd_abs(pt.s, pt.t) == 1) row[2] += is_detected_value(L, pt, neg);
            row[3] += loc_condition(L, pt, neg);
            row[4] += L.varpi(pt.factorization());
        },
        [](Acc& a, const Acc& b) {
            for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
        });

    std::vector<BoxCounts> out(nb);
    u64 run[5] = {0, 0, 0, 0, 0};
    for (std::size_t b = 0; b < nb; ++b) {
        for (int k = 0; k < 5; ++k) run[k] += total[b * 5 + k];
        out[b] = {Bs[b], run[0], run[1], run[2], run[3], run[4]};
    }
    return out;
}

u64 count_loc_upper(const AbelianField& L, const FormSpec& F, const SweepConfig& cfg, NegativeNorms policy) {
    const bool neg = negative_values_allowed(L, policy);
    SweepContext ctx(F, cfg);
    return sweep_reduce(
        ctx, u64{0}, [&](const SweepPoint& pt, u64& acc) { acc += loc_condition(L, pt, neg); },
        [](u64& a, u64 b) { a += b; });
}

u64 count_varpi_sum(const AbelianField& L, const FormSpec& F, const SweepConfig& cfg) {
    SweepContext ctx(F, cfg);
    return sweep_reduce(
        ctx, u64{0},
        [&](const SweepPoint& pt, u64& acc) {
            bool ok = true;
            for (const auto& pp : pt.primes()) {
                if (pp.e % L.local_ef(pp.p) != 0) {
                    ok = false;
                    break;
                }
            }
            acc += ok;
        },
        [](u64& a, u64 b) { a += b; });
}

AsymptoticFit asymptotic_fit(const std::vector<std::pair<double, double>>& counts, int r, int n) {
    if (counts.size() < 3) throw InvalidArgument("asymptotic_fit: need at least 3 data points");
    if (n < 1 || r < 0 || r > n) throw InvalidArgument("asymptotic_fit: need 0 <= r <= n, n >= 1");
    AsymptoticFit fit;
    fit.exponent = 1.0 - static_cast<double>(r) / n;
    double lo = 0, hi = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const auto [B, N] = counts[i];
        if (!(B > 1)) throw InvalidArgument("asymptotic_fit: B must exceed 1");
        if (i > 0 && !(B > counts[i - 1].first)) throw InvalidArgument("asymptotic_fit: B must be increasing");
        const double c = N * std::pow(std::log(B), fit.exponent) / (B * B);
        fit.B.push_back(B);
        fit.c.push_back(c);
        lo = i == 0 ? c : std::min(lo, c);
        hi = i == 0 ? c : std::max(hi, c);
    }
    fit.spread = lo > 0 ? hi / lo : std::numeric_limits<double>::infinity();
    return fit;
}

std::vector<NTProduct> nt_product_at(const AbelianField& L, const FormSpec& F, const std::vector<u64>& cutoffs) {
    if (cutoffs.empty()) return {};
    if (!std::is_sorted(cutoffs.begin(), cutoffs.end()) || cutoffs.front() < 10) {
        throw InvalidArgument("nt_product: cutoffs must be ascending and >= 10");
    }
    const int r = factor_count_over_L(L, F);
    const double expo = 1.0 - static_cast<double>(r) / L.degree();
    const auto primes = primes_up_to(cutoffs.back());
    std::vector<NTProduct> out;
    double logprod = 0;
    std::size_t k = 0;
    for (u64 B : cutoffs) {
        for (; k < primes.size() && primes[k] <= B; ++k) {
            const u64 p = primes[k];
            if (L.local_ef(p) == 1) continue;
            const double rho = static_cast<double>(rho_full_pp(F, p, 1));
            logprod += std::log1p(-rho / (static_cast<double>(p) * static_cast<double>(p)));
        }
        const double prod = std::exp(logprod);
        out.push_back({B, prod, prod * std::pow(std::log(static_cast<double>(B)), expo)});
    }
    return out;
}

NTProduct nt_product(const AbelianField& L, const FormSpec& F, u64 B) { return nt_product_at(L, F, {B}).front(); }

double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("ols_slope: need two or more paired points");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(y.size());
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0) throw InvalidArgument("ols_slope: x values are all equal");
    return sxy / sxx;
}

ChebotarevFit chebotarev_slope(const AbelianField& L, const FormSpec& F, const std::vector<u64>& cutoffs) {
    if (cutoffs.size() < 2 || !std::is_sorted(cutoffs.begin(), cutoffs.end()) || cutoffs.front() < 3) {
        throw InvalidArgument("chebotarev_slope: need two or more ascending cutoffs >= 3");
    }
    ChebotarevFit fit;
    fit.B = cutoffs;
    fit.expected = static_cast<double>(factor_count_over_L(L, F)) / L.degree();
    const auto primes = primes_up_to(cutoffs.back());
    double sum = 0;
    std::size_t k = 0;
    std::vector<double> x;
    for (u64 B : cutoffs) {
        for (; k < primes.size() && primes[k] <= B; ++k) {
            const u64 p = primes[k];
            if (L.local_ef(p) != 1) continue;
            sum += static_cast<double>(rho_minus_pp(F, p, 1)) / static_cast<double>(p);
        }
        fit.sums.push_back(sum);
        x.push_back(std::log(std::log(static_cast<double>(B))));
    }
    fit.slope = ols_slope(x, fit.sums);
    return fit;
}

} // namespace normcount
