#pragma once

#include "normcount/arith.hpp"
#include "normcount/errors.hpp"
#include "normcount/fields.hpp"
#include "normcount/form_spec.hpp"
#include "normcount/forms.hpp"

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace normcount {

enum class Strategy { automatic, naive, spf_table, row_sieve };

std::string to_string(Strategy s);
Strategy parse_strategy(const std::string& name);

struct SweepConfig {
    i64 B = 2;
    Strategy strategy = Strategy::automatic;
    // 0 means std::thread::hardware_concurrency()
    unsigned threads = 1;
    u64 memory_budget = SpfTable::default_memory_budget;
    bool coprime_only = false;
    bool squarefree_only = false;
    // restrict to (s, t) = base mod W; W = 1 keeps the whole box
    u64 W = 1;
    BasePoint base{};
};

// One point of the box together with the factorization of |F(s, t)|.
struct SweepPoint {
    static constexpr int max_factors = 15;

    i64 s = 0;
    i64 t = 0;
    i128 value = 0;
    u64 abs_value = 0;
    int nf = 0;
    PrimePower factors[max_factors];

    std::span<const PrimePower> primes() const { return {factors, static_cast<std::size_t>(nf)}; }
    bool squarefree() const;
    Factorization factorization() const;
};

bool same_point(const SweepPoint& x, const SweepPoint& y);

struct RowScratch {
    std::vector<SweepPoint> points;
    std::vector<u64> cofactor;
    std::vector<unsigned char> keep;
};

// Precomputed state shared read-only by all workers of a sweep.
class SweepContext {
public:
    SweepContext(const FormSpec& F, const SweepConfig& cfg);
    ~SweepContext();
    SweepContext(const SweepContext&) = delete;
    SweepContext& operator=(const SweepContext&) = delete;

    const FormSpec& form() const { return F_; }
    const SweepConfig& config() const { return cfg_; }
    Strategy strategy() const { return strategy_; }
    unsigned threads() const { return threads_; }
    u64 max_abs_value() const { return max_abs_; }
    // t-values of the sweep, ascending
    const std::vector<i64>& rows() const { return rows_; }

    // Every admissible point of row t with F(s, t) != 0, ascending in s.
    std::span<const SweepPoint> factor_row(i64 t, RowScratch& scratch) const;

private:
    void sieve_row(i64 t, RowScratch& scratch) const;
    void direct_row(i64 t, RowScratch& scratch) const;

    FormSpec F_;
    SweepConfig cfg_;
    Strategy strategy_;
    unsigned threads_;
    u64 max_abs_ = 0;
    i64 s0_ = 0;
    i64 step_ = 1;
    std::vector<i64> rows_;
    std::vector<u64> sieve_primes_;
    // roots of F(x, 1) mod p for each sieve prime
    std::vector<std::vector<u64>> sieve_roots_;
    struct Table;
    Table* spf_ = nullptr;
};

// Runs visit(point, acc) over the sweep. Rows are split into blocks handed
// out dynamically; block accumulators are merged in block order, so the
// result does not depend on the thread count.
template <class Acc, class Visit, class Merge>
Acc sweep_reduce(const SweepContext& ctx, Acc init, Visit visit, Merge merge) {
    const auto& rows = ctx.rows();
    constexpr std::size_t block_rows = 8;
    const std::size_t nblocks = (rows.size() + block_rows - 1) / block_rows;
    std::vector<Acc> partial(nblocks, init);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        RowScratch scratch;
        try {
            for (;;) {
                const std::size_t b = next.fetch_add(1);
                if (b >= nblocks) break;
                const std::size_t end = std::min(rows.size(), (b + 1) * block_rows);
                for (std::size_t i = b * block_rows; i < end; ++i) {
                    for (const SweepPoint& pt : ctx.factor_row(rows[i], scratch)) visit(pt, partial[b]);
                }
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next.store(nblocks);
        }
    };

    const unsigned nt = std::max(1u, std::min<unsigned>(ctx.threads(), static_cast<unsigned>(nblocks)));
    if (nt == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nt);
        for (unsigned i = 0; i < nt; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);
    Acc total = std::move(init);
    for (auto& p : partial) merge(total, p);
    return total;
}

// The full factorization stream in (t, s) order.
std::vector<SweepPoint> collect_stream(const FormSpec& F, const SweepConfig& cfg);

// Sign handling for negative values of F. `automatic` rejects negatives when
// L is totally complex, accepts them when n is odd (N(-x) = -N(x)) and raises
// HypothesisError for totally real L of even degree.
enum class NegativeNorms { automatic, assume_ok, reject };

std::string to_string(NegativeNorms s);
NegativeNorms parse_negative_norms(const std::string& name);
bool negative_values_allowed(const AbelianField& L, NegativeNorms policy);

enum class CountMode { exact_norm, squarefree_detector };

std::string to_string(CountMode m);
CountMode parse_count_mode(const std::string& name);

// Whether F(s, t) is the norm of an integral ideal of L, up to the sign policy.
bool is_norm_value(const AbelianField& L, const SweepPoint& pt, bool negatives_ok);
// mu^2(F) = 1 and every prime of F splits completely (the set counted by
// the squarefree detector once gcd and class conditions hold).
bool is_detected_value(const AbelianField& L, const SweepPoint& pt, bool negatives_ok);
// r_L(|F(s, t)|) from splitting data.
u64 r_L_point(const AbelianField& L, const SweepPoint& pt);

// exact_norm: (s, t) in [-B, B]^2 with F(s, t) a norm, requires L.spec().pid.
// squarefree_detector: additionally gcd(s, t) = 1, (s, t) = base mod W and
// mu^2(F) = 1 with all primes split. cfg.W and cfg.base define the class.
u64 count_NFL(const AbelianField& L, const FormSpec& F, const SweepConfig& cfg, CountMode mode,
              NegativeNorms policy = NegativeNorms::automatic);

struct BoxCounts {
    i64 B = 0;
    u64 points = 0;
    u64 exact_norm = 0;
    u64 detector = 0;
    // (s, t) with f_p | v_p(F) at every p and the archimedean sign condition
    u64 loc_upper = 0;
    // sum of varpi(F(s, t)) = prod_p [e_p f_p | v_p]
    u64 varpi_sum = 0;
};

// All four counts for every B in `Bs` from one sweep at max(Bs); points are
// bucketed by max(|s|, |t|). cfg.B is ignored; cfg.W / cfg.base set the
// detector class and do not restrict the other counts.
std::vector<BoxCounts> count_all(const AbelianField& L, const FormSpec& F, std::vector<i64> Bs, const SweepConfig& cfg,
                                 NegativeNorms policy = NegativeNorms::automatic);

u64 count_loc_upper(const AbelianField& L, const FormSpec& F, const SweepConfig& cfg,
                    NegativeNorms policy = NegativeNorms::automatic);
u64 count_varpi_sum(const AbelianField& L, const FormSpec& F, const SweepConfig& cfg);

struct AsymptoticFit {
    std::vector<double> B;
    std::vector<double> c;
    double exponent = 0;
    double spread = 0;
};

// c_B = N (log B)^{1 - r/n} / B^2 and spread = max c_B / min c_B.
AsymptoticFit asymptotic_fit(const std::vector<std::pair<double, double>>& counts, int r, int n);

struct NTProduct {
    u64 B = 0;
    double product = 0;
    // product * (log B)^{1 - r/n}
    double diagnostic = 0;
};

// prod_{p <= B} (1 + rho_F(p) (varpi(p) - 1) / p^2) at each cutoff.
std::vector<NTProduct> nt_product_at(const AbelianField& L, const FormSpec& F, const std::vector<u64>& cutoffs);
NTProduct nt_product(const AbelianField& L, const FormSpec& F, u64 B);

struct ChebotarevFit {
    std::vector<u64> B;
    // sum_{p <= B} varpi(p) rho^-(p) / p
    std::vector<double> sums;
    // least-squares slope against log log B
    double slope = 0;
    double expected = 0;
};

ChebotarevFit chebotarev_slope(const AbelianField& L, const FormSpec& F, const std::vector<u64>& cutoffs);

// Ordinary least-squares slope of y against x.
double ols_slope(const std::vector<double>& x, const std::vector<double>& y);

} // namespace normcount
