#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

namespace normcount {

// Element of Z[zeta_m], stored as coefficients of 1, zeta, ..., zeta^{m-1}.
// The representation is not unique until reduce() is called, which rewrites
// the element modulo the m-th cyclotomic polynomial.
class CyclotomicInteger {
public:
    CyclotomicInteger() : CyclotomicInteger(1) {}
    explicit CyclotomicInteger(int m);
    static CyclotomicInteger root_of_unity(int m, int k);
    static CyclotomicInteger integer(int m, std::int64_t v);

    int order() const { return m_; }
    const std::vector<std::int64_t>& coefficients() const { return c_; }

    CyclotomicInteger& operator+=(const CyclotomicInteger& o);
    CyclotomicInteger& operator-=(const CyclotomicInteger& o);
    CyclotomicInteger operator*(const CyclotomicInteger& o) const;
    friend CyclotomicInteger operator+(CyclotomicInteger a, const CyclotomicInteger& b) { return a += b; }
    friend CyclotomicInteger operator-(CyclotomicInteger a, const CyclotomicInteger& b) { return a -= b; }
    // Multiply by zeta^k.
    CyclotomicInteger times_root(int k) const;
    void add_root(int k, std::int64_t coeff = 1);

    CyclotomicInteger reduced() const;
    bool is_zero() const;
    std::optional<std::int64_t> as_integer() const;
    std::complex<double> to_complex() const;
    bool operator==(const CyclotomicInteger& o) const;

private:
    int m_;
    std::vector<std::int64_t> c_;
};

// Integer coefficients of the m-th cyclotomic polynomial, constant term first.
std::vector<std::int64_t> cyclotomic_polynomial(int m);

} // namespace normcount
