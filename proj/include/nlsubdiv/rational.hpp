#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace nlsd {

/// Exact rational backend used for coefficient and operator-norm certification.
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
    return Rational(num, den);
}

inline double to_double(const Rational& r) {
    return r.convert_to<double>();
}

inline Rational abs(const Rational& r) {
    return r < 0 ? Rational(-r) : r;
}

/// "p/q" (or "p" when q == 1).
std::string to_string(const Rational& r);

/// Accepts "p/q", "p", or "-p/q".
Rational parse_rational(const std::string& text);

}  // namespace nlsd
