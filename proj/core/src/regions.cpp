#include "normcount/regions.hpp"

#include "normcount/errors.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace normcount {

namespace {

void check_args(double B, double z) {
    if (!(B > 0) || !std::isfinite(B)) throw InvalidArgument("region: B must be positive");
    if (!(z >= 0) || !std::isfinite(z)) throw InvalidArgument("region: z must be non-negative");
}

struct Coeffs {
    double a, b, c;
};

// normalize so that c > 0; |F| is unchanged
Coeffs normalized(const FormSpec& F) {
    Coeffs k{static_cast<double>(F.a), static_cast<double>(F.b), static_cast<double>(F.c)};
    if (k.c < 0) k = {-k.a, -k.b, -k.c};
    return k;
}

double overlap(double lo, double hi) {
    lo = std::max(lo, -1.0);
    hi = std::min(hi, 1.0);
    return hi > lo ? hi - lo : 0.0;
}

// length of {t in [-1, 1] : |F(s, t)| < zeta}
double slice_length(const Coeffs& k, double s, double zeta) {
    const double D = k.b * k.b - 4 * k.a * k.c;
    double len = 0.0;
    const double d1 = D * s * s + 4 * k.c * zeta;
    if (d1 > 0) {
        const double r = std::sqrt(d1);
        len += overlap((-k.b * s - r) / (2 * k.c), (-k.b * s + r) / (2 * k.c));
    }
    const double d2 = D * s * s - 4 * k.c * zeta;
    if (d2 > 0) {
        const double r = std::sqrt(d2);
        len -= overlap((-k.b * s - r) / (2 * k.c), (-k.b * s + r) / (2 * k.c));
    }
    return len;
}

void push_quadratic_roots(double A, double Bq, double C, std::vector<double>& out) {
    if (A == 0) {
        if (Bq != 0) out.push_back(-C / Bq);
        return;
    }
    const double disc = Bq * Bq - 4 * A * C;
    if (disc < 0) return;
    const double r = std::sqrt(disc);
    out.push_back((-Bq - r) / (2 * A));
    out.push_back((-Bq + r) / (2 * A));
}

// area of {(s, t) in [-1, 1]^2 : |F| < zeta}
double area_below_quadrature(const FormSpec& F, double zeta) {
    if (zeta <= 0) return 0.0;
    const Coeffs k = normalized(F);
    const double D = k.b * k.b - 4 * k.a * k.c;
    std::vector<double> bp{-1.0, 1.0};
    for (double sign : {1.0, -1.0}) {
        const double v = -sign * 4 * k.c * zeta / D;
        if (v > 0) {
            bp.push_back(std::sqrt(v));
            bp.push_back(-std::sqrt(v));
        }
        for (double tt : {1.0, -1.0}) {
            // F(s, tt) = sign * zeta
            push_quadratic_roots(k.a, k.b * tt, k.c * tt * tt - sign * zeta, bp);
        }
    }
    bp.erase(std::remove_if(bp.begin(), bp.end(), [](double x) { return !(x >= -1.0 && x <= 1.0); }), bp.end());
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());

    boost::math::quadrature::tanh_sinh<double> integrator(12);
    auto f = [&](double s) { return slice_length(k, s, zeta); };
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
        if (bp[i + 1] - bp[i] < 1e-15) continue;
        total += integrator.integrate(f, bp[i], bp[i + 1], 1e-12);
    }
    return total;
}

// antiderivative of sqrt(alpha + beta s^2), valid where the radicand is >= 0
double sqrt_quadratic_primitive(double alpha, double beta, double s) {
    const double rad = std::max(0.0, alpha + beta * s * s);
    const double root = std::sqrt(rad);
    if (beta == 0) return s * std::sqrt(std::max(0.0, alpha));
    if (beta > 0) {
        const double sb = std::sqrt(beta);
        const double arg = sb * s + root;
        const double log_term = arg > 0 ? std::log(arg) : 0.0;
        return 0.5 * s * root + alpha / (2 * sb) * log_term;
    }
    const double x = std::clamp(s * std::sqrt(-beta / alpha), -1.0, 1.0);
    return 0.5 * s * root + alpha / (2 * std::sqrt(-beta)) * std::asin(x);
}

// integral over [0, 1] of min(1, sqrt(max(0, alpha + beta s^2)))
double clipped_sqrt_integral(double alpha, double beta) {
    std::vector<double> bp{0.0, 1.0};
    if (beta != 0) {
        for (double level : {0.0, 1.0}) {
            const double v = (level - alpha) / beta;
            if (v > 0 && v < 1) bp.push_back(std::sqrt(v));
        }
    }
    std::sort(bp.begin(), bp.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
        const double lo = bp[i], hi = bp[i + 1];
        if (hi <= lo) continue;
        const double mid = 0.5 * (lo + hi);
        const double val = alpha + beta * mid * mid;
        if (val >= 1) {
            total += hi - lo;
        } else if (val > 0) {
            total += sqrt_quadratic_primitive(alpha, beta, hi) - sqrt_quadratic_primitive(alpha, beta, lo);
        }
    }
    return total;
}

double area_below_closed_form(const FormSpec& F, double zeta) {
    if (F.b != 0) throw InvalidArgument("vol_region_closed_form: form must be diagonal (b = 0)");
    if (zeta <= 0) return 0.0;
    const Coeffs k = normalized(F);
    // |t| < sqrt((zeta - a s^2)/c) minus |t| <= sqrt((-zeta - a s^2)/c)
    const double upper = clipped_sqrt_integral(zeta / k.c, -k.a / k.c);
    const double lower = clipped_sqrt_integral(-zeta / k.c, -k.a / k.c);
    return 4.0 * (upper - lower);
}

struct LinearSplit {
    double jac;
    double A1, A2;
};

LinearSplit split(const FormSpec& F) {
    const double D = static_cast<double>(F.disc());
    if (D <= 0) throw InvalidArgument("area bound: form must be indefinite (disc > 0)");
    const double a = static_cast<double>(F.a), b = static_cast<double>(F.b), c = static_cast<double>(F.c);
    const double r = std::sqrt(D);
    if (a != 0) {
        const double r1 = (-b + r) / (2 * a), r2 = (-b - r) / (2 * a);
        // F = (a s - a r1 t)(s - r2 t)
        return {r, std::abs(a) + std::abs(a * r1), 1.0 + std::abs(r2)};
    }
    // F = t (b s + c t)
    return {std::abs(b), 1.0, std::abs(b) + std::abs(c)};
}

} // namespace

double vol_region_quadrature(const FormSpec& F, double B, double z) {
    check_args(B, z);
    return B * B * (4.0 - area_below_quadrature(F, z / (B * B)));
}

double vol_region_closed_form(const FormSpec& F, double B, double z) {
    check_args(B, z);
    return B * B * (4.0 - area_below_closed_form(F, z / (B * B)));
}

double vol_region(const FormSpec& F, double B, double z) {
    return F.b == 0 ? vol_region_closed_form(F, B, z) : vol_region_quadrature(F, B, z);
}

double delta_vol(const FormSpec& F, double B, double z1, double z2) {
    if (!(z1 < z2)) throw InvalidArgument("delta_vol: requires z1 < z2");
    check_args(B, z1);
    check_args(B, z2);
    auto below = [&](double z) {
        const double zeta = z / (B * B);
        return F.b == 0 ? area_below_closed_form(F, zeta) : area_below_quadrature(F, zeta);
    };
    return B * B * (below(z2) - below(z1));
}

double definite_unit_area(const FormSpec& F) {
    const double D = static_cast<double>(F.disc());
    if (D >= 0) throw InvalidArgument("definite_unit_area: form must be definite");
    return 2.0 * std::numbers::pi / std::sqrt(-D);
}

double sublevel_area_bound(const FormSpec& F, double B, double z) {
    check_args(B, z);
    const auto L = split(F);
    const double A = L.A1 * L.A2 * B * B;
    if (z == 0) return 0.0;
    return 4.0 / L.jac * z * (1.0 + std::max(0.0, std::log(A / z)));
}

double strip_area_bound(const FormSpec& F, double B, double z, int l) {
    check_args(B, z);
    if (l < 0) throw InvalidArgument("strip_area_bound: l must be non-negative");
    const auto L = split(F);
    const double A = L.A1 * L.A2 * B * B;
    if (z == 0) return 0.0;
    return 4.0 / L.jac * z * (1.0 + std::max(0.0, std::log(A / ((l + 1) * z))));
}

} // namespace normcount
