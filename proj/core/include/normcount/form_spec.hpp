#pragma once

#include "normcount/arith.hpp"

#include <string>

namespace normcount {

// Binary quadratic form a s^2 + b s t + c t^2, irreducible over Q.
struct FormSpec {
    i64 a = 0;
    i64 b = 0;
    i64 c = 0;

    i64 disc() const { return b * b - 4 * a * c; }
    i128 eval(i64 s, i64 t) const {
        return static_cast<i128>(a) * s * s + static_cast<i128>(b) * s * t + static_cast<i128>(c) * t * t;
    }
    std::string to_string() const;
    friend bool operator==(const FormSpec&, const FormSpec&) = default;
};

// Validates irreducibility over Q (discriminant nonzero and not a square).
FormSpec make_form_spec(i64 a, i64 b, i64 c);

} // namespace normcount
