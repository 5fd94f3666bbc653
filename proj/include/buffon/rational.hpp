#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace buffon {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(std::int64_t num, std::int64_t den)
{
    return Rational(BigInt(num), BigInt(den));
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Parses "3", "-2/7" or a finite decimal such as "0.9" or "1e-3" into an exact rational.
Rational parse_rational(std::string_view text);

/// "p/q" or "p" when q == 1.
std::string to_string(const Rational& r);

/// Integer power with overflow check; throws BudgetExceeded on overflow.
std::int64_t checked_pow(std::int64_t base, int exp);
std::int64_t checked_mul(std::int64_t a, std::int64_t b);
std::int64_t checked_add(std::int64_t a, std::int64_t b);

} // namespace buffon
