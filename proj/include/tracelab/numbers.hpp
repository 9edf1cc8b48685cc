#ifndef TRACELAB_NUMBERS_HPP
#define TRACELAB_NUMBERS_HPP

#include <algorithm>
#include <vector>

#include "tracelab/automaton.hpp"
#include "tracelab/configuration.hpp"
#include "tracelab/rational.hpp"

namespace tracelab {

// True iff den divides some power of base, i.e. the fraction has a
// terminating base expansion.
inline bool terminates_in_base(BigInt den, int base) {
    BigInt g = boost::multiprecision::gcd(den, BigInt(base));
    while (g > 1) {
        den /= g;
        g = boost::multiprecision::gcd(den, BigInt(base));
    }
    return den == 1;
}

// Exact base-pq expansion of a nonnegative rational with terminating
// expansion.  Integer digits by repeated division, fractional digits by
// repeated multiplication until the remainder hits zero; the terminating
// (not base-1-tailed) expansion is always the one produced.
inline Configuration encode(const Rational& xi, const Params& pr) {
    if (xi < 0) throw PreconditionError("encode: value must be nonnegative");
    const int base = pr.base();
    if (!terminates_in_base(boost::multiprecision::denominator(xi), base))
        throw NonTerminating("encode: " + rational_to_string(xi) +
                             " has no terminating base-" + std::to_string(base) + " expansion");

    BigInt ipart = rfloor(xi);
    Rational frac = xi - Rational(ipart);

    DigitWord int_digits; // least significant first: positions 0, -1, -2, ...
    while (ipart > 0) {
        int_digits.push_back(static_cast<Digit>(ipart % base));
        ipart /= base;
    }
    if (int_digits.empty()) int_digits.push_back(0);

    DigitWord frac_digits; // positions 1, 2, ...
    while (frac != 0) {
        frac *= base;
        const BigInt d = rfloor(frac);
        frac_digits.push_back(static_cast<Digit>(d));
        frac -= Rational(d);
    }

    DigitWord core(int_digits.rbegin(), int_digits.rend());
    core.insert(core.end(), frac_digits.begin(), frac_digits.end());
    const long long offset = -(static_cast<long long>(int_digits.size()) - 1);
    return Configuration(0, std::move(core), 0, offset);
}

// Exact value of a configuration.  The left tail must be zero (otherwise
// the positional sum diverges); any constant right tail is summed in closed
// form, so both representatives of a number decode to the same value.
inline Rational decode(const Configuration& x, const Params& pr) {
    if (x.left_tail() != 0)
        throw LeftTailNonzero("decode: left tail digit " + std::to_string(x.left_tail()) +
                              " makes the value diverge");
    const int base = pr.base();
    Rational v = 0;
    for (std::size_t i = 0; i < x.core().size(); ++i) {
        const long long pos = x.offset() + static_cast<long long>(i);
        v += Rational(x.core()[i]) * rational_pow(Rational(base), -pos);
    }
    if (x.right_tail() != 0) {
        // sum_{i >= e} r * base^-i  =  r * base^(1-e) / (base - 1)
        const long long e = x.core_end();
        v += Rational(x.right_tail()) * rational_pow(Rational(base), 1 - e) / (base - 1);
    }
    return v;
}

struct TrajectoryReport {
    bool ok = true;
    int first_mismatch = -1;              // step index, or -1
    std::vector<Rational> expected;       // (p/q)^t * xi for t = 1..steps
    std::vector<Rational> decoded;        // values read back from the automaton
};

// Runs the p/q automaton on encode(xi) for `steps` steps and checks the
// decoded value against exact rational multiplication at every step.
inline TrajectoryReport verify_multiplication(const Rational& xi, const Rules& R, int steps) {
    const Params& pr = R.params();
    TrajectoryReport rep;
    Configuration x = encode(xi, pr);
    Rational v = xi;
    const Rational ratio(pr.p(), pr.q());
    for (int t = 1; t <= steps; ++t) {
        x = apply(x, R, AutomatonKind::fmul_p_over_q);
        v *= ratio;
        rep.expected.push_back(v);
        rep.decoded.push_back(decode(x, pr));
        if (rep.ok && rep.expected.back() != rep.decoded.back()) {
            rep.ok = false;
            rep.first_mismatch = t;
        }
    }
    return rep;
}

} // namespace tracelab

#endif
