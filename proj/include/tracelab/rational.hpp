#ifndef TRACELAB_RATIONAL_HPP
#define TRACELAB_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "tracelab/errors.hpp"

namespace tracelab {

// All numeric work is exact.  There is no floating point anywhere in the
// library; values are arbitrary-precision integers and reduced fractions.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt ipow(BigInt b, unsigned e) {
    BigInt r = 1;
    while (e) {
        if (e & 1u) r *= b;
        b *= b;
        e >>= 1u;
    }
    return r;
}

// floor toward minus infinity
inline BigInt rfloor(const Rational& x) {
    BigInt n = boost::multiprecision::numerator(x);
    BigInt d = boost::multiprecision::denominator(x); // > 0, reduced
    BigInt q = n / d;
    if (n < 0 && q * d != n) --q;
    return q;
}

inline Rational rfrac(const Rational& x) {
    return x - Rational(rfloor(x));
}

// base^e for any integer exponent; base must be nonzero when e < 0.
inline Rational rational_pow(const Rational& base, long long e) {
    if (e >= 0) {
        return Rational(ipow(boost::multiprecision::numerator(base), static_cast<unsigned>(e)),
                        ipow(boost::multiprecision::denominator(base), static_cast<unsigned>(e)));
    }
    if (base == 0) throw PreconditionError("rational_pow: 0 to a negative power");
    return Rational(ipow(boost::multiprecision::denominator(base), static_cast<unsigned>(-e)),
                    ipow(boost::multiprecision::numerator(base), static_cast<unsigned>(-e)));
}

// Accepts "123" or "a/b" with optional leading '-'.  No decimal points:
// inputs are exact by construction.
inline Rational parse_rational(const std::string& s) {
    auto is_digits = [](const std::string& t) {
        if (t.empty()) return false;
        for (char c : t)
            if (c < '0' || c > '9') return false;
        return true;
    };
    std::string body = s;
    bool neg = false;
    if (!body.empty() && (body[0] == '-' || body[0] == '+')) {
        neg = body[0] == '-';
        body.erase(0, 1);
    }
    const auto slash = body.find('/');
    BigInt num, den = 1;
    if (slash == std::string::npos) {
        if (!is_digits(body)) throw ParseError("invalid rational '" + s + "'");
        num = BigInt(body);
    } else {
        const std::string a = body.substr(0, slash);
        const std::string b = body.substr(slash + 1);
        if (!is_digits(a) || !is_digits(b)) throw ParseError("invalid rational '" + s + "'");
        num = BigInt(a);
        den = BigInt(b);
        if (den == 0) throw ParseError("zero denominator in '" + s + "'");
    }
    if (neg) num = -num;
    return Rational(num, den);
}

inline std::string rational_to_string(const Rational& x) {
    const BigInt n = boost::multiprecision::numerator(x);
    const BigInt d = boost::multiprecision::denominator(x);
    if (d == 1) return n.str();
    return n.str() + "/" + d.str();
}

} // namespace tracelab

#endif
