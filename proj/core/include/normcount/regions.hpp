#pragma once

#include "normcount/form_spec.hpp"

namespace normcount {

// Area of R(B, z) = {(s, t) in [-B, B]^2 : |F(s, t)| >= z}.
// Diagonal forms (b = 0) use exact piecewise antiderivatives; other forms
// integrate the per-s slice length with tanh-sinh quadrature.
double vol_region(const FormSpec& F, double B, double z);
double vol_region_quadrature(const FormSpec& F, double B, double z);
double vol_region_closed_form(const FormSpec& F, double B, double z);

// vol R(B, z1) - vol R(B, z2) for z1 < z2, i.e. area of z1 <= |F| < z2.
double delta_vol(const FormSpec& F, double B, double z1, double z2);

// Area of {|F| <= 1} for a definite form: 2 pi / sqrt(-disc).
double definite_unit_area(const FormSpec& F);

// Explicit upper bounds for an indefinite form (disc > 0), obtained by
// splitting F into real linear factors:
//   area{|F| < z} <= (4/J) z (1 + log+(A1 A2 / z))
//   area{l z <= |F| < (l+1) z} <= (4/J) z (1 + log+(A1 A2 / ((l+1) z)))
double sublevel_area_bound(const FormSpec& F, double B, double z);
double strip_area_bound(const FormSpec& F, double B, double z, int l);

} // namespace normcount
