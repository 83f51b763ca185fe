#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <stdexcept>
#include <string>

namespace rankone {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Exact conversion: every finite double is a dyadic rational.
inline Rational rational_from_double(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("rational_from_double: non-finite value");
    int exp = 0;
    double m = std::frexp(x, &exp);          // x = m * 2^exp, |m| in [0.5, 1)
    auto mant = static_cast<long long>(std::ldexp(m, 53));
    exp -= 53;
    Rational r(mant);
    if (exp >= 0) {
        r *= Rational(BigInt(1) << exp);
    } else {
        r /= Rational(BigInt(1) << -exp);
    }
    return r;
}

inline std::string rational_to_string(const Rational& r) {
    return boost::multiprecision::numerator(r).str() + "/" +
           boost::multiprecision::denominator(r).str();
}

} // namespace rankone
