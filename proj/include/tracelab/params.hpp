#ifndef TRACELAB_PARAMS_HPP
#define TRACELAB_PARAMS_HPP

#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tracelab/errors.hpp"

namespace tracelab {

using Digit = int;
using DigitWord = std::vector<Digit>;

// A coprime pair (p, q), both > 1.  Fixes the working base p*q and with it
// the digit alphabet {0, ..., pq-1}.  Immutable after construction; cheap
// to copy and safe to share across threads.
class Params {
public:
    Params(int p, int q) : p_(p), q_(q), base_(p * q) {
        if (p < 2 || q < 2)
            throw PreconditionError("params: p and q must both be > 1");
        if (p == q)
            throw PreconditionError("params: p and q must differ");
        if (std::gcd(p, q) != 1)
            throw PreconditionError("params: p and q must be coprime");
    }

    int p() const { return p_; }
    int q() const { return q_; }
    int base() const { return base_; }
    bool p_gt_q() const { return p_ > q_; }

    // Same base, roles of p and q exchanged.
    Params swapped() const { return Params(q_, p_); }

    void require_p_gt_q(const char* what) const {
        if (!p_gt_q())
            throw PreconditionError(std::string(what) + ": requires p > q");
    }

    bool operator==(const Params&) const = default;

private:
    int p_;
    int q_;
    int base_;
};

// Remainder of m divided by n with floor semantics, so the result is
// always in [0, n) even for negative m.
inline long long md(long long m, long long n) {
    if (n <= 1) throw PreconditionError("md: modulus must be > 1");
    long long r = m % n;
    return r < 0 ? r + n : r;
}

enum class Direction { by_p, by_q };

// Unique split d = hi*q + lo with lo in [0,q), hi in [0,p)  (by_q),
// or           d = hi*p + lo with lo in [0,p), hi in [0,q)  (by_p).
inline std::pair<Digit, Digit> decompose(Digit d, const Params& pr, Direction dir) {
    if (d < 0 || d >= pr.base())
        throw PreconditionError("decompose: digit out of range");
    const int m = dir == Direction::by_q ? pr.q() : pr.p();
    return {d / m, d % m};
}

enum class ResidueKind {
    Qpq, // digits congruent to a modulo p: q members, complete residue system mod q
    Qqp, // digits congruent to a modulo q: p members, complete residue system mod p
};

struct ResidueClass {
    int modulus;       // p for Qpq, q for Qqp
    Digit representative;
    DigitWord members; // ascending
};

inline ResidueClass residue_class(Digit a, const Params& pr, ResidueKind kind) {
    if (a < 0 || a >= pr.base())
        throw PreconditionError("residue_class: digit out of range");
    const int m = kind == ResidueKind::Qpq ? pr.p() : pr.q();
    ResidueClass rc{m, a, {}};
    for (Digit d = static_cast<Digit>(a % m); d < pr.base(); d += m)
        rc.members.push_back(d);
    return rc;
}

// Packed key of a digit word: the digits read as a base-`base` numeral,
// most significant first.  Distinct words of equal length get distinct keys;
// the length must be carried alongside.  Throws when the key would not fit
// 64 bits, which no budget-respecting enumeration can reach.
inline std::uint64_t pack_word(std::span<const Digit> w, int base) {
    std::uint64_t key = 0;
    for (Digit d : w) {
        if (key > (~std::uint64_t{0} - static_cast<std::uint64_t>(d)) / base)
            throw BudgetExceeded("pack_word: packed key exceeds 64 bits");
        key = key * base + static_cast<std::uint64_t>(d);
    }
    return key;
}

inline DigitWord unpack_word(std::uint64_t key, int length, int base) {
    DigitWord w(static_cast<std::size_t>(length));
    for (int i = length - 1; i >= 0; --i) {
        w[static_cast<std::size_t>(i)] = static_cast<Digit>(key % base);
        key /= static_cast<std::uint64_t>(base);
    }
    return w;
}

inline char digit_to_char(Digit d) {
    return d < 10 ? static_cast<char>('0' + d) : static_cast<char>('a' + d - 10);
}

inline Digit char_to_digit(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'z') return c - 'a' + 10;
    throw ParseError(std::string("invalid digit character '") + c + "'");
}

inline std::string word_to_string(std::span<const Digit> w) {
    std::string s;
    s.reserve(w.size());
    for (Digit d : w) s.push_back(digit_to_char(d));
    return s;
}

} // namespace tracelab

#endif
