#include "normcount/fields.hpp"

#include "normcount/errors.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

namespace normcount {

namespace {

u64 crt_pair(u64 r1, u64 m1, u64 r2, u64 m2) {
    // m1, m2 coprime
    const u64 m = m1 * m2;
    const u64 inv = invmod(m1 % m2, m2);
    const u64 diff = (r2 % m2 + m2 - r1 % m2) % m2;
    const u64 k = mulmod(diff, inv, m2);
    return (r1 % m1 + mulmod(k, m1, m)) % m;
}

u64 primitive_root_prime_power(u64 p, int a) {
    const u64 phi = p - 1;
    const Factorization fphi = factor(phi);
    u64 g = 2;
    for (;; ++g) {
        bool ok = true;
        for (const auto& pp : fphi.factors) {
            if (powmod(g, phi / pp.p, p) == 1) {
                ok = false;
                break;
            }
        }
        if (ok) break;
    }
    if (a >= 2 && powmod(g, p - 1, p * p) == 1) g += p;
    return g;
}

std::vector<bool> membership(u64 q, std::span<const u64> H) {
    std::vector<bool> in(q, false);
    for (u64 h : H) in[h % q] = true;
    return in;
}

u64 binomial(u64 n, u64 k) {
    if (k > n) return 0;
    u64 r = 1;
    for (u64 i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

} // namespace

std::string FormSpec::to_string() const {
    std::ostringstream os;
    bool first = true;
    auto term = [&](i64 k, const char* mono) {
        if (k == 0) return;
        if (first) {
            if (k < 0) os << "-";
        } else {
            os << (k < 0 ? " - " : " + ");
        }
        const i64 m = k < 0 ? -k : k;
        if (m != 1) os << m;
        os << mono;
        first = false;
    };
    term(a, "s^2");
    term(b, "st");
    term(c, "t^2");
    if (first) os << "0";
    return os.str();
}

FormSpec make_form_spec(i64 a, i64 b, i64 c) {
    FormSpec f{a, b, c};
    const i64 d = f.disc();
    if (d == 0) throw InvalidArgument("form: discriminant is zero");
    if (is_perfect_square(d)) throw InvalidArgument("form: reducible over Q (square discriminant " + std::to_string(d) + ")");
    return f;
}

bool is_conductor_minimal(u64 q, std::span<const u64> H) {
    const auto in = membership(q, H);
    for (u64 d = 1; d < q; ++d) {
        if (q % d) continue;
        bool contained = true;
        for (u64 x = 1 % q; x < q && contained; x += d) {
            if (std::gcd(x, q) == 1 && !in[x]) contained = false;
        }
        if (contained) return false;
    }
    return true;
}

FieldSpec make_field_spec(u64 q, std::vector<u64> H, bool pid) {
    if (q < 3) throw InvalidArgument("field: modulus q must be at least 3");
    if (q > 2'000'000) throw InvalidArgument("field: modulus q too large");
    for (auto& h : H) {
        h %= q;
        if (std::gcd(h, q) != 1) throw InvalidArgument("field: H contains non-unit " + std::to_string(h));
    }
    std::sort(H.begin(), H.end());
    H.erase(std::unique(H.begin(), H.end()), H.end());
    if (H.empty() || H.front() != 1) throw InvalidArgument("field: H must contain 1");
    const auto in = membership(q, H);
    for (u64 x : H) {
        for (u64 y : H) {
            if (!in[mulmod(x, y, q)]) throw InvalidArgument("field: H is not closed under multiplication");
        }
    }
    const u64 phi = euler_phi(q);
    if (phi % H.size() != 0) throw InvalidArgument("field: |H| does not divide phi(q)");
    if (phi / H.size() < 2) throw InvalidArgument("field: degree must be at least 2");

    // minimal conductor
    u64 qmin = q;
    for (u64 d = 1; d < q; ++d) {
        if (q % d) continue;
        bool contained = true;
        for (u64 x = 1 % q; x < q && contained; x += d) {
            if (std::gcd(x, q) == 1 && !in[x]) contained = false;
        }
        if (contained) {
            qmin = d;
            break;
        }
    }
    FieldSpec spec;
    spec.q = qmin;
    spec.pid = pid;
    std::set<u64> reduced;
    for (u64 h : H) reduced.insert(h % qmin);
    spec.H.assign(reduced.begin(), reduced.end());
    if (qmin < 3) throw InvalidArgument("field: degree must be at least 2");
    return spec;
}

std::optional<bool> known_pid(const FieldSpec& spec) {
    struct Entry {
        u64 q;
        std::vector<u64> H;
        bool pid;
    };
    static const std::vector<Entry> table = [] {
        std::vector<Entry> t;
        for (u64 m : {3, 4, 5, 7, 8, 9, 11, 12, 13, 15, 16, 17, 19, 20, 21, 24, 25, 27, 28, 32, 33, 35, 36, 40,
                      44, 45, 48, 60, 84}) {
            t.push_back({m, {1}, true});
        }
        for (u64 m : {23, 29, 31, 37, 39, 41, 43, 47, 49, 51, 52, 53, 55, 56, 57, 59}) {
            t.push_back({m, {1}, false});
        }
        t.push_back({7, {1, 6}, true});
        t.push_back({9, {1, 8}, true});
        auto quad = [&](i64 d, bool pid) {
            const u64 q = static_cast<u64>(d < 0 ? -d : d);
            std::vector<u64> H;
            for (u64 x = 1; x < q; ++x) {
                if (std::gcd(x, q) == 1 && kronecker(d, x) == 1) H.push_back(x);
            }
            t.push_back({q, H, pid});
        };
        for (i64 d : {-3, -4, -7, -8, -11, -19, -43, -67, -163}) quad(d, true);
        for (i64 d : {-15, -20, -23, -24, -31, -35, -39, -40, -47, -51, -52, -55, -56}) quad(d, false);
        for (i64 d : {5, 8, 12, 13, 17, 21, 24, 28, 29, 33, 37, 41, 44, 53, 56, 57, 61, 69, 73, 76, 77, 88, 89, 92, 93, 97})
            quad(d, true);
        for (i64 d : {40, 60, 65, 85, 104, 120, 136, 140}) quad(d, false);
        return t;
    }();
    for (const auto& e : table) {
        if (e.q == spec.q && e.H == spec.H) return e.pid;
    }
    return std::nullopt;
}

UnitGroup::UnitGroup(u64 q) : q_(q) {
    if (q == 0) throw InvalidArgument("UnitGroup: modulus must be positive");
    if (q > 1) {
        for (const auto& pp : factor(q).factors) {
            u64 pa = 1;
            for (int i = 0; i < pp.e; ++i) pa *= pp.p;
            const u64 rest = q / pa;
            auto lift = [&](u64 g) { return crt_pair(g % pa, pa, 1 % rest, rest); };
            if (pp.p == 2) {
                if (pp.e == 2) {
                    gens_.push_back(lift(3));
                    orders_.push_back(2);
                } else if (pp.e >= 3) {
                    gens_.push_back(lift(pa - 1));
                    orders_.push_back(2);
                    gens_.push_back(lift(5));
                    orders_.push_back(static_cast<int>(pa / 4));
                }
            } else {
                gens_.push_back(lift(primitive_root_prime_power(pp.p, pp.e)));
                orders_.push_back(static_cast<int>(pa / pp.p * (pp.p - 1)));
            }
        }
    }
    for (int o : orders_) {
        exponent_ = std::lcm(exponent_, o);
        size_ *= static_cast<u64>(o);
    }
    const std::size_t r = stride();
    dlog_.assign(q * r, -1);
    struct Item {
        u64 x;
        std::vector<int> c;
    };
    std::vector<Item> items{{1 % q, std::vector<int>(orders_.size(), 0)}};
    for (std::size_t i = 0; i < orders_.size(); ++i) {
        std::vector<Item> next;
        next.reserve(items.size() * orders_[i]);
        for (const auto& it : items) {
            u64 x = it.x;
            for (int j = 0; j < orders_[i]; ++j) {
                Item n{x, it.c};
                n.c[i] = j;
                next.push_back(std::move(n));
                x = mulmod(x, gens_[i], q);
            }
        }
        items = std::move(next);
    }
    for (const auto& it : items) {
        if (orders_.empty()) {
            dlog_[it.x * r] = 0;
        } else {
            std::copy(it.c.begin(), it.c.end(), dlog_.begin() + static_cast<std::ptrdiff_t>(it.x * r));
        }
    }
}

std::span<const int> UnitGroup::dlog(u64 x) const {
    x %= q_;
    if (dlog_[x * stride()] < 0) throw InvalidArgument("UnitGroup::dlog: not a unit");
    return {dlog_.data() + x * stride(), orders_.size()};
}

AbelianField::AbelianField(FieldSpec spec)
    : spec_(make_field_spec(spec.q, std::move(spec.H), spec.pid)), units_(spec_.q) {
    const u64 q = spec_.q;
    in_h_ = membership(q, spec_.H);
    const int M = units_.exponent();
    const auto& ord = units_.orders();
    const int rank = units_.rank();

    auto exponent_of = [&](const std::vector<int>& c, u64 x) {
        const auto d = units_.dlog(x);
        long long s = 0;
        for (int i = 0; i < rank; ++i) s += static_cast<long long>(c[i]) * d[i] * (M / ord[i]);
        return static_cast<int>(s % M);
    };

    std::vector<int> c(rank, 0);
    for (;;) {
        bool trivial_on_h = true;
        for (u64 h : spec_.H) {
            if (exponent_of(c, h) != 0) {
                trivial_on_h = false;
                break;
            }
        }
        if (trivial_on_h) {
            Character ch;
            ch.coords = c;
            for (int i = 0; i < rank; ++i) ch.order = std::lcm(ch.order, ord[i] / std::gcd(ord[i], c[i]));
            ch.table.assign(q, -1);
            for (u64 x = 0; x < q; ++x) {
                if (units_.is_unit(x)) ch.table[x] = exponent_of(c, x);
            }
            for (u64 d = 1; d <= q; ++d) {
                if (q % d) continue;
                bool ok = true;
                for (u64 x = 1 % q; x < q && ok; x += d) {
                    if (ch.table[x] > 0) ok = false;
                }
                if (ok) {
                    ch.conductor = d;
                    break;
                }
            }
            const u64 f = ch.conductor;
            ch.primitive_table.assign(f, -1);
            for (u64 r = 0; r < f; ++r) {
                if (std::gcd(r, f) != 1) continue;
                u64 x = r;
                while (std::gcd(x, q) != 1) x += f;
                ch.primitive_table[r] = ch.table[x % q];
            }
            chars_.push_back(std::move(ch));
        }
        int i = rank - 1;
        while (i >= 0 && ++c[i] == ord[i]) {
            c[i] = 0;
            --i;
        }
        if (i < 0) break;
    }
    n_ = static_cast<int>(chars_.size());
    if (static_cast<u64>(n_) * spec_.H.size() != units_.size()) {
        throw InvalidArgument("field: H is not a subgroup of (Z/q)^x");
    }

    fdeg_.assign(q, 0);
    for (u64 x = 0; x < q; ++x) {
        if (!units_.is_unit(x)) continue;
        int j = 1;
        u64 y = x;
        while (!in_h_[y]) {
            y = mulmod(y, x, q);
            ++j;
        }
        fdeg_[x] = j;
    }

    psi1_.assign(q, 0);
    for (u64 x = 0; x < q; ++x) {
        if (!units_.is_unit(x)) continue;
        CyclotomicInteger s(M);
        for (int i = 1; i < n_; ++i) s.add_root(chars_[i].table[x]);
        psi1_[x] = *s.as_integer();
    }

    for (const auto& pp : factor(q).factors) {
        u64 pa = 1;
        for (int i = 0; i < pp.e; ++i) pa *= pp.p;
        const u64 m = q / pa;
        std::vector<bool> hk(q, false);
        for (u64 k = 1 % q; k < q; k += m) {
            if (std::gcd(k, q) != 1) continue;
            for (u64 h : spec_.H) hk[mulmod(h, k, q)] = true;
        }
        const auto hk_size = static_cast<u64>(std::count(hk.begin(), hk.end(), true));
        SplittingData sd;
        sd.e = static_cast<int>(hk_size / spec_.H.size());
        const u64 frob = m == 1 ? 1 % q : crt_pair(pp.p % m, m, 1 % pa, pa);
        u64 y = frob;
        sd.f = 1;
        while (!hk[y]) {
            y = mulmod(y, frob, q);
            ++sd.f;
        }
        sd.g = n_ / (sd.e * sd.f);
        ramified_[pp.p] = sd;
    }
}

bool AbelianField::in_H(i64 x) const {
    return in_h_[static_cast<u64>(floor_mod(x, static_cast<i64>(spec_.q)))];
}

bool AbelianField::is_totally_real() const { return in_H(-1); }

u64 AbelianField::conductor_discriminant() const {
    u64 r = 1;
    for (const auto& ch : chars_) r *= ch.conductor;
    return r;
}

std::optional<int> AbelianField::char_exponent(std::size_t i, i64 x) const {
    const auto& ch = chars_.at(i);
    const int v = ch.primitive_table[static_cast<u64>(floor_mod(x, static_cast<i64>(ch.conductor)))];
    if (v < 0) return std::nullopt;
    return v;
}

std::complex<double> AbelianField::char_value(std::size_t i, i64 x) const {
    const auto e = char_exponent(i, x);
    if (!e) return 0.0;
    return CyclotomicInteger::root_of_unity(root_order(), *e).to_complex();
}

std::vector<int> AbelianField::primitive_values(u64 p) const {
    std::vector<int> v;
    v.reserve(n_ - 1);
    for (int i = 1; i < n_; ++i) {
        const auto e = char_exponent(i, static_cast<i64>(p));
        v.push_back(e ? *e : -1);
    }
    return v;
}

CyclotomicInteger AbelianField::psi_prime_power_exact(u64 p, int nu) const {
    const int M = root_order();
    std::vector<CyclotomicInteger> h(nu + 1, CyclotomicInteger(M));
    h[0] = CyclotomicInteger::integer(M, 1);
    for (int e : primitive_values(p)) {
        if (e < 0) continue;
        for (int j = 1; j <= nu; ++j) h[j] += h[j - 1].times_root(e);
    }
    return h[nu];
}

CyclotomicInteger AbelianField::psi_exact(u64 k) const {
    if (k == 0) throw InvalidArgument("psi_L: argument must be positive");
    CyclotomicInteger r = CyclotomicInteger::integer(root_order(), 1);
    for (const auto& pp : factor(k).factors) r = r * psi_prime_power_exact(pp.p, pp.e);
    return r;
}

i64 AbelianField::psi_prime_power(u64 p, int nu) const {
    const auto v = psi_prime_power_exact(p, nu).as_integer();
    if (!v) throw std::logic_error("psi_L: non-integral value");
    return *v;
}

i64 AbelianField::psi_prime(u64 p) const {
    if (spec_.q % p == 0) return psi_prime_power(p, 1);
    return psi1_[p % spec_.q];
}

i64 AbelianField::psi(const Factorization& k) const {
    i64 r = 1;
    for (const auto& pp : k.factors) r *= psi_prime_power(pp.p, pp.e);
    return r;
}

i64 AbelianField::psi(u64 k) const {
    if (k == 0) throw InvalidArgument("psi_L: argument must be positive");
    return psi(factor(k));
}

CyclotomicInteger AbelianField::Psi(std::span<const u64> ks) const {
    if (ks.size() != static_cast<std::size_t>(n_ - 1)) {
        throw InvalidArgument("Psi_L: expected " + std::to_string(n_ - 1) + " arguments, got " +
                              std::to_string(ks.size()));
    }
    const int M = root_order();
    int total = 0;
    for (std::size_t l = 0; l < ks.size(); ++l) {
        if (ks[l] == 0) throw InvalidArgument("Psi_L: arguments must be positive");
        const auto e = char_exponent(l + 1, static_cast<i64>(ks[l]));
        if (!e) return CyclotomicInteger(M);
        total = (total + *e) % M;
    }
    return CyclotomicInteger::root_of_unity(M, total);
}

i64 AbelianField::r_L(const Factorization& k) const {
    const int M = root_order();
    i64 r = 1;
    for (const auto& pp : k.factors) {
        std::vector<CyclotomicInteger> h(pp.e + 1, CyclotomicInteger(M));
        h[0] = CyclotomicInteger::integer(M, 1);
        for (int e : primitive_values(pp.p)) {
            if (e < 0) continue;
            for (int j = 1; j <= pp.e; ++j) h[j] += h[j - 1].times_root(e);
        }
        CyclotomicInteger s(M);
        for (const auto& x : h) s += x;
        const auto v = s.as_integer();
        if (!v) throw std::logic_error("r_L: non-integral local factor");
        r *= *v;
        if (r == 0) break;
    }
    return r;
}

i64 AbelianField::r_L(u64 k) const {
    if (k == 0) throw InvalidArgument("r_L: argument must be positive");
    return r_L(factor(k));
}

u64 AbelianField::r_L_from_splitting(const Factorization& k) const {
    u64 r = 1;
    for (const auto& pp : k.factors) {
        const auto sd = splitting_data(pp.p);
        if (pp.e % sd.f != 0) return 0;
        r *= binomial(static_cast<u64>(pp.e / sd.f + sd.g - 1), static_cast<u64>(sd.g - 1));
    }
    return r;
}

u64 AbelianField::r_L_local(u64 p, int e) const {
    int f, g;
    if (spec_.q % p == 0) {
        const auto& sd = ramified_.at(p);
        f = sd.f;
        g = sd.g;
    } else {
        f = fdeg_[p % spec_.q];
        g = n_ / f;
    }
    if (e % f != 0) return 0;
    return binomial(static_cast<u64>(e / f + g - 1), static_cast<u64>(g - 1));
}

bool AbelianField::is_norm_prime(u64 p) const {
    if (!is_prime(p)) throw InvalidArgument("is_norm_prime: argument must be prime");
    if (is_ramified(p)) throw InvalidArgument("is_norm_prime: p = " + std::to_string(p) + " ramifies in L");
    CyclotomicInteger s(root_order());
    for (const auto& ch : chars_) s.add_root(ch.table[p % spec_.q]);
    const auto v = s.as_integer();
    if (!v || (*v != 0 && *v != n_)) throw std::logic_error("is_norm_prime: character sum not in {0, n}");
    return *v == n_;
}

std::complex<double> AbelianField::local_psi_factor(u64 p, std::complex<double> w) const {
    if (is_ramified(p)) throw InvalidArgument("local_psi_factor: p = " + std::to_string(p) + " ramifies in L");
    std::complex<double> r = 1.0;
    for (int i = 1; i < n_; ++i) r /= 1.0 - char_value(i, static_cast<i64>(p)) * w;
    return r;
}

SplittingData AbelianField::splitting_data(u64 p) const {
    if (!is_prime(p)) throw InvalidArgument("splitting_data: argument must be prime");
    if (is_ramified(p)) return ramified_.at(p);
    const int f = fdeg_[p % spec_.q];
    return {1, f, n_ / f};
}

int AbelianField::residue_degree(u64 p) const { return local_f(p); }

bool AbelianField::varpi(const Factorization& k) const {
    for (const auto& pp : k.factors) {
        if (pp.e % local_ef(pp.p) != 0) return false;
    }
    return true;
}

bool AbelianField::varpi(u64 k) const {
    if (k == 0) throw InvalidArgument("varpi: argument must be positive");
    return varpi(factor(k));
}

bool AbelianField::is_ideal_norm(const Factorization& k) const {
    return is_ideal_norm_range(k.factors.begin(), k.factors.end());
}

bool AbelianField::is_ideal_norm(u64 k) const {
    if (k == 0) throw InvalidArgument("is_ideal_norm: argument must be positive");
    return is_ideal_norm(factor(k));
}

i64 fundamental_discriminant(i64 d) {
    if (d == 0 || is_perfect_square(d)) throw InvalidArgument("fundamental_discriminant: d must be a non-square");
    i64 d0 = d < 0 ? -1 : 1;
    for (const auto& pp : factor(static_cast<u64>(d < 0 ? -d : d)).factors) {
        if (pp.e % 2) d0 *= static_cast<i64>(pp.p);
    }
    return floor_mod(d0, 4) == 1 ? d0 : 4 * d0;
}

int factor_count_over_L(const AbelianField& L, const FormSpec& F) {
    const i64 dk = fundamental_discriminant(make_form_spec(F.a, F.b, F.c).disc());
    const u64 adk = static_cast<u64>(dk < 0 ? -dk : dk);
    if (L.modulus() % adk != 0) return 1;
    for (u64 h : L.spec().H) {
        if (kronecker(dk, h) != 1) return 1;
    }
    return 2;
}

FieldSpec construct_L0(const AbelianField& L, const FormSpec& F) {
    if (factor_count_over_L(L, F) != 2) {
        throw HypothesisError("construct_L0: F is irreducible over L (r = 1)");
    }
    const int n = L.degree();
    if (n < 3 || n % 2) throw HypothesisError("construct_L0: requires even degree n >= 3");

    const auto& chars = L.characters();
    const auto& ord = L.units().orders();
    const int N = static_cast<int>(chars.size());
    const int M = L.root_order();
    std::map<std::vector<int>, int> index;
    for (int i = 0; i < N; ++i) index[chars[i].coords] = i;
    auto add = [&](int x, int y) {
        std::vector<int> c(ord.size());
        for (std::size_t k = 0; k < ord.size(); ++k) c[k] = (chars[x].coords[k] + chars[y].coords[k]) % ord[k];
        return index.at(c);
    };
    auto power = [&](int x, int e) {
        int r = 0;
        for (int k = 0; k < e; ++k) r = add(r, x);
        return r;
    };

    const i64 dk = fundamental_discriminant(F.disc());
    int chi0 = -1;
    for (int i = 0; i < N && chi0 < 0; ++i) {
        bool match = true;
        for (u64 x = 1; x < L.modulus() && match; ++x) {
            if (!L.units().is_unit(x)) continue;
            const int want = kronecker(dk, x) == 1 ? 0 : M / 2;
            if (chars[i].table[x] != want) match = false;
        }
        if (match) chi0 = i;
    }
    if (chi0 < 0) throw std::logic_error("construct_L0: quadratic character not found");

    using Set = std::vector<char>;
    auto closure = [&](Set s, int g) {
        for (;;) {
            Set next = s;
            for (int i = 0; i < N; ++i) {
                if (s[i]) next[add(i, g)] = 1;
            }
            if (next == s) return s;
            s = std::move(next);
        }
    };
    auto count = [](const Set& s) { return static_cast<int>(std::count(s.begin(), s.end(), 1)); };

    int max_a = 0;
    for (const auto& ch : chars) {
        int o = ch.order, a = 0;
        while (o % 2 == 0) {
            o /= 2;
            ++a;
        }
        if (o == 1) max_a = std::max(max_a, a);
    }

    for (int a = max_a; a >= 1; --a) {
        const int pa = 1 << a;
        for (int x = 0; x < N; ++x) {
            if (chars[x].order != pa || power(x, pa / 2) != chi0) continue;
            Set trivial(N, 0);
            trivial[0] = 1;
            const Set C = closure(trivial, x);
            const int target = N / pa;
            std::function<std::optional<Set>(const Set&, int)> dfs = [&](const Set& S, int start) -> std::optional<Set> {
                if (count(S) == target) return S;
                for (int i = start; i < N; ++i) {
                    if (S[i]) continue;
                    Set T = closure(S, i);
                    if (count(T) > target) continue;
                    bool meets = false;
                    for (int j = 1; j < N; ++j) {
                        if (T[j] && C[j]) meets = true;
                    }
                    if (meets) continue;
                    if (auto r = dfs(T, i + 1)) return r;
                }
                return std::nullopt;
            };
            const auto comp = dfs(trivial, 1);
            if (!comp) continue;
            if (a >= 2) {
                throw HypothesisError("construct_L0: the maximal cyclic 2-power factor through Q(sqrt(disc)) has order " +
                                      std::to_string(pa) + " > 2; the prescribed character set is not a group");
            }
            std::vector<u64> H0;
            for (u64 u = 1; u < L.modulus(); ++u) {
                if (!L.units().is_unit(u)) continue;
                bool in_kernel = true;
                for (int i = 0; i < N && in_kernel; ++i) {
                    if ((*comp)[i] && chars[i].table[u] != 0) in_kernel = false;
                }
                if (in_kernel) H0.push_back(u);
            }
            FieldSpec l0 = make_field_spec(L.modulus(), H0, false);
            l0.pid = known_pid(l0).value_or(false);
            return l0;
        }
    }
    throw std::logic_error("construct_L0: no cyclic decomposition found");
}

} // namespace normcount
