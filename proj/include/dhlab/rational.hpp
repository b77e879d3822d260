#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace dhlab {

// Exact rationals. mpq_class keeps values canonical (lowest terms, positive
// denominator) after every arithmetic operation.
using Rational = mpq_class;

// Exact conversion; every finite double is a dyadic rational.
Rational rational_from_double(double value);

// Accepts "p", "p/q" and plain decimals ("2.5", "-0.125", "1e-3").
Rational parse_rational(std::string_view text);

inline double to_double(const Rational& r) { return r.get_d(); }

std::string to_string(const Rational& r);

}  // namespace dhlab
