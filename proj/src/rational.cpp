#include "buffon/rational.hpp"

#include <cctype>

#include "buffon/errors.hpp"

namespace buffon {

namespace {

BigInt parse_integer(std::string_view s)
{
    require(!s.empty(), "empty integer");
    bool neg = false;
    std::size_t i = 0;
    if (s[0] == '+' || s[0] == '-') {
        neg = s[0] == '-';
        i = 1;
    }
    require(i < s.size(), "sign without digits");
    BigInt v = 0;
    for (; i < s.size(); ++i) {
        require(std::isdigit(static_cast<unsigned char>(s[i])) != 0,
                "bad digit in number '" + std::string(s) + "'");
        v = v * 10 + (s[i] - '0');
    }
    return neg ? BigInt(-v) : v;
}

} // namespace

Rational parse_rational(std::string_view text)
{
    require(!text.empty(), "empty number");
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        BigInt num = parse_integer(text.substr(0, slash));
        BigInt den = parse_integer(text.substr(slash + 1));
        require(den != 0, "zero denominator");
        return Rational(num, den);
    }

    int exp10 = 0;
    std::string_view mant = text;
    if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
        exp10 = static_cast<int>(parse_integer(text.substr(e + 1)));
        mant = text.substr(0, e);
    }
    std::string digits;
    if (auto dot = mant.find('.'); dot != std::string_view::npos) {
        digits = std::string(mant.substr(0, dot)) + std::string(mant.substr(dot + 1));
        exp10 -= static_cast<int>(mant.size() - dot - 1);
        if (digits.empty() || digits == "-" || digits == "+")
            throw InvalidArgument("bad decimal '" + std::string(text) + "'");
    } else {
        digits = std::string(mant);
    }
    Rational r(parse_integer(digits));
    BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(exp10 < 0 ? -exp10 : exp10));
    return exp10 < 0 ? Rational(r / scale) : Rational(r * scale);
}

std::string to_string(const Rational& r)
{
    auto num = boost::multiprecision::numerator(r);
    auto den = boost::multiprecision::denominator(r);
    if (den == 1)
        return num.str();
    return num.str() + "/" + den.str();
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b)
{
    std::int64_t out;
    if (__builtin_mul_overflow(a, b, &out))
        throw BudgetExceeded("int64 overflow in exact arithmetic");
    return out;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b)
{
    std::int64_t out;
    if (__builtin_add_overflow(a, b, &out))
        throw BudgetExceeded("int64 overflow in exact arithmetic");
    return out;
}

std::int64_t checked_pow(std::int64_t base, int exp)
{
    require(exp >= 0, "negative exponent");
    std::int64_t out = 1;
    for (int i = 0; i < exp; ++i)
        out = checked_mul(out, base);
    return out;
}

} // namespace buffon
