#pragma once

#include "normcount/arith.hpp"
#include "normcount/cyclotomic.hpp"
#include "normcount/form_spec.hpp"

#include <complex>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace normcount {

// Abelian number field L inside Q(zeta_q), given as the fixed field of the
// subgroup H of (Z/qZ)^x. `pid` is the user's assertion that O_L is a PID.
struct FieldSpec {
    u64 q = 1;
    std::vector<u64> H;
    bool pid = false;
    friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

// Validates H as a subgroup and rewrites (q, H) at the minimal conductor.
FieldSpec make_field_spec(u64 q, std::vector<u64> H, bool pid);
bool is_conductor_minimal(u64 q, std::span<const u64> H);
// Class-number-one status from a small built-in table, if the field is listed.
std::optional<bool> known_pid(const FieldSpec& spec);

// (Z/qZ)^x as a product of cyclic groups with fixed generators
// (2-part first: -1 then 5, then a primitive root for each odd prime power).
class UnitGroup {
public:
    explicit UnitGroup(u64 q);

    u64 modulus() const { return q_; }
    int rank() const { return static_cast<int>(orders_.size()); }
    const std::vector<u64>& generators() const { return gens_; }
    const std::vector<int>& orders() const { return orders_; }
    int exponent() const { return exponent_; }
    u64 size() const { return size_; }
    bool is_unit(u64 x) const { return dlog_[(x % q_) * stride()] >= 0; }
    // Coordinates of x with respect to generators(); x must be a unit.
    std::span<const int> dlog(u64 x) const;

private:
    std::size_t stride() const { return std::max<std::size_t>(1, orders_.size()); }
    u64 q_;
    u64 size_ = 1;
    std::vector<u64> gens_;
    std::vector<int> orders_;
    int exponent_ = 1;
    std::vector<int> dlog_;
};

// Dirichlet character mod q with values zeta_M^k, M = exponent of (Z/q)^x.
struct Character {
    std::vector<int> coords;
    int order = 1;
    u64 conductor = 1;
    // exponent of zeta_M on residues mod q, -1 on non-units
    std::vector<int> table;
    // exponent of the induced primitive character on residues mod conductor
    std::vector<int> primitive_table;
};

struct SplittingData {
    int e = 1;
    int f = 1;
    int g = 1;
    friend bool operator==(const SplittingData&, const SplittingData&) = default;
};

class AbelianField {
public:
    explicit AbelianField(FieldSpec spec);

    const FieldSpec& spec() const { return spec_; }
    u64 modulus() const { return spec_.q; }
    int degree() const { return n_; }
    int root_order() const { return units_.exponent(); }
    const UnitGroup& units() const { return units_; }
    bool in_H(i64 x) const;
    bool is_totally_real() const;

    // Characters of Gal(L/Q), trivial character first, lexicographic in coords.
    const std::vector<Character>& characters() const { return chars_; }
    u64 conductor_discriminant() const;

    // Exponent k with chi_i(x) = zeta_M^k using the primitive character, or
    // nullopt when the value is 0.
    std::optional<int> char_exponent(std::size_t i, i64 x) const;
    std::complex<double> char_value(std::size_t i, i64 x) const;

    // psi_L = chi_1 * ... * chi_{n-1} (Dirichlet convolution over the
    // nontrivial characters). Integer valued; the exact route is kept.
    CyclotomicInteger psi_exact(u64 k) const;
    CyclotomicInteger psi_prime_power_exact(u64 p, int nu) const;
    i64 psi(u64 k) const;
    i64 psi(const Factorization& k) const;
    i64 psi_prime_power(u64 p, int nu) const;
    // psi_L(p) = sum of chi(p) over nontrivial characters; table lookup.
    i64 psi_prime(u64 p) const;
    // prod_l chi_l(k_l) over the nontrivial characters; size must be n-1.
    CyclotomicInteger Psi(std::span<const u64> ks) const;

    // prod_{i=1}^{n-1} (1 - chi_i(p) w)^{-1} = 1 + sum_nu psi_L(p^nu) w^nu.
    std::complex<double> local_psi_factor(u64 p, std::complex<double> w) const;

    // Number of integral ideals of norm k, as (1 * psi_L)(k).
    i64 r_L(u64 k) const;
    i64 r_L(const Factorization& k) const;
    // Same count from splitting data.
    u64 r_L_from_splitting(const Factorization& k) const;
    // Ideals of norm p^e from splitting data; p must be prime (unchecked).
    u64 r_L_local(u64 p, int e) const;

    // Whether p splits completely, via (1/n) sum_chi chi(p); p must not ramify.
    bool is_norm_prime(u64 p) const;
    SplittingData splitting_data(u64 p) const;
    // Residue degree of an unramified prime (fast table lookup).
    int residue_degree(u64 p) const;
    bool is_ramified(u64 p) const { return spec_.q % p == 0; }

    // prod_{p | k} [e_p f_p | v_p(k)]
    bool varpi(const Factorization& k) const;
    bool varpi(u64 k) const;
    // prod_{p | k} [f_p | v_p(k)]: k is the norm of an integral ideal.
    bool is_ideal_norm(const Factorization& k) const;
    bool is_ideal_norm(u64 k) const;
    template <class It>
    bool is_ideal_norm_range(It begin, It end) const {
        for (auto it = begin; it != end; ++it) {
            if (it->e % local_f(it->p) != 0) return false;
        }
        return true;
    }
    int local_f(u64 p) const {
        if (spec_.q % p == 0) return ramified_.at(p).f;
        return fdeg_[p % spec_.q];
    }
    int local_ef(u64 p) const {
        if (spec_.q % p == 0) {
            const auto& sd = ramified_.at(p);
            return sd.e * sd.f;
        }
        return fdeg_[p % spec_.q];
    }

private:
    std::vector<int> primitive_values(u64 p) const;

    FieldSpec spec_;
    UnitGroup units_;
    int n_;
    std::vector<bool> in_h_;
    std::vector<Character> chars_;
    std::vector<int> fdeg_;
    std::vector<i64> psi1_;
    std::map<u64, SplittingData> ramified_;
};

// Number of irreducible factors (1 or 2) of a form of discriminant `disc`
// over L: 2 exactly when Q(sqrt(disc)) is a subfield of L.
int factor_count_over_L(const AbelianField& L, const FormSpec& F);
// Fundamental discriminant of Q(sqrt(d)).
i64 fundamental_discriminant(i64 d);

// The degree n/2 field L0 with r_L(p) = 2 r_{L0}(p) whenever F splits at p.
// Requires factor_count_over_L == 2 and even n >= 4 (n >= 3 even).
FieldSpec construct_L0(const AbelianField& L, const FormSpec& F);

} // namespace normcount
