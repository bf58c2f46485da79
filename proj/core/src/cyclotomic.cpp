#include "normcount/cyclotomic.hpp"

#include "normcount/errors.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace normcount {

namespace {

using Poly = std::vector<std::int64_t>;

// Exact division of a by the monic polynomial b.
Poly divide_exact(Poly a, const Poly& b) {
    const std::size_t db = b.size() - 1;
    if (a.size() < b.size()) return {0};
    Poly q(a.size() - db, 0);
    for (std::size_t i = a.size(); i-- > db;) {
        const std::int64_t coef = a[i];
        q[i - db] = coef;
        for (std::size_t j = 0; j <= db; ++j) a[i - db + j] -= coef * b[j];
    }
    return q;
}

} // namespace

std::vector<std::int64_t> cyclotomic_polynomial(int m) {
    static std::mutex mu;
    static std::map<int, Poly> cache;
    std::lock_guard lock(mu);
    if (auto it = cache.find(m); it != cache.end()) return it->second;
    // x^m - 1 = prod_{d | m} Phi_d
    Poly p(m + 1, 0);
    p[0] = -1;
    p[m] = 1;
    for (int d = 1; d < m; ++d) {
        if (m % d) continue;
        Poly phi_d;
        if (auto it = cache.find(d); it != cache.end()) {
            phi_d = it->second;
        } else {
            // compute recursively without holding the lock twice
            Poly x(d + 1, 0);
            x[0] = -1;
            x[d] = 1;
            for (int e = 1; e < d; ++e) {
                if (d % e == 0) x = divide_exact(x, cache.at(e));
            }
            cache[d] = x;
            phi_d = x;
        }
        p = divide_exact(p, phi_d);
    }
    cache[m] = p;
    return p;
}

CyclotomicInteger::CyclotomicInteger(int m) : m_(m), c_(static_cast<std::size_t>(m), 0) {
    if (m < 1) throw InvalidArgument("CyclotomicInteger: order must be positive");
}

CyclotomicInteger CyclotomicInteger::root_of_unity(int m, int k) {
    CyclotomicInteger z(m);
    z.add_root(k);
    return z;
}

CyclotomicInteger CyclotomicInteger::integer(int m, std::int64_t v) {
    CyclotomicInteger z(m);
    z.c_[0] = v;
    return z;
}

CyclotomicInteger& CyclotomicInteger::operator+=(const CyclotomicInteger& o) {
    if (o.m_ != m_) throw InvalidArgument("CyclotomicInteger: order mismatch");
    for (int i = 0; i < m_; ++i) c_[i] += o.c_[i];
    return *this;
}

CyclotomicInteger& CyclotomicInteger::operator-=(const CyclotomicInteger& o) {
    if (o.m_ != m_) throw InvalidArgument("CyclotomicInteger: order mismatch");
    for (int i = 0; i < m_; ++i) c_[i] -= o.c_[i];
    return *this;
}

CyclotomicInteger CyclotomicInteger::operator*(const CyclotomicInteger& o) const {
    if (o.m_ != m_) throw InvalidArgument("CyclotomicInteger: order mismatch");
    CyclotomicInteger r(m_);
    for (int i = 0; i < m_; ++i) {
        if (c_[i] == 0) continue;
        for (int j = 0; j < m_; ++j) {
            if (o.c_[j] == 0) continue;
            r.c_[(i + j) % m_] += c_[i] * o.c_[j];
        }
    }
    return r;
}

CyclotomicInteger CyclotomicInteger::times_root(int k) const {
    CyclotomicInteger r(m_);
    k %= m_;
    if (k < 0) k += m_;
    for (int i = 0; i < m_; ++i) r.c_[(i + k) % m_] = c_[i];
    return r;
}

void CyclotomicInteger::add_root(int k, std::int64_t coeff) {
    k %= m_;
    if (k < 0) k += m_;
    c_[k] += coeff;
}

CyclotomicInteger CyclotomicInteger::reduced() const {
    const Poly phi = cyclotomic_polynomial(m_);
    const std::size_t deg = phi.size() - 1;
    Poly a = c_;
    for (std::size_t i = a.size(); i-- > deg;) {
        const std::int64_t coef = a[i];
        if (coef == 0) continue;
        for (std::size_t j = 0; j <= deg; ++j) a[i - deg + j] -= coef * phi[j];
    }
    CyclotomicInteger r(m_);
    for (std::size_t i = 0; i < deg; ++i) r.c_[i] = a[i];
    return r;
}

bool CyclotomicInteger::is_zero() const {
    const auto r = reduced();
    for (auto v : r.c_) {
        if (v != 0) return false;
    }
    return true;
}

std::optional<std::int64_t> CyclotomicInteger::as_integer() const {
    const auto r = reduced();
    for (int i = 1; i < m_; ++i) {
        if (r.c_[i] != 0) return std::nullopt;
    }
    return r.c_[0];
}

std::complex<double> CyclotomicInteger::to_complex() const {
    std::complex<double> s = 0;
    for (int i = 0; i < m_; ++i) {
        if (c_[i] == 0) continue;
        const double ang = 2.0 * std::numbers::pi * i / m_;
        s += static_cast<double>(c_[i]) * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    return s;
}

bool CyclotomicInteger::operator==(const CyclotomicInteger& o) const {
    return m_ == o.m_ && (*this - o).is_zero();
}

} // namespace normcount
