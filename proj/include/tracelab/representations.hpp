#ifndef TRACELAB_REPRESENTATIONS_HPP
#define TRACELAB_REPRESENTATIONS_HPP

#include <span>
#include <sstream>
#include <unordered_map>
#include <vector>

#include "tracelab/check.hpp"
#include "tracelab/numbers.hpp"
#include "tracelab/rational.hpp"
#include "tracelab/trace_language.hpp"

namespace tracelab {

// Companion digits live in {-(q-1), ..., p-1}.
using CompanionDigit = int;
using CompanionWord = std::vector<CompanionDigit>;

namespace detail {

inline CompanionDigit companion_digit_raw(const Rational& xi, const Params& pr) {
    const BigInt v = BigInt(pr.q()) * rfloor(Rational(pr.p(), pr.q()) * xi) -
                     BigInt(pr.p()) * rfloor(xi);
    return static_cast<CompanionDigit>(v);
}

} // namespace detail

// q*floor((p/q)*xi) - p*floor(xi): the digit of xi in the base-p/q
// companion expansion.  Exact; asserts the range bound and a period-q
// spot check on every call.
inline CompanionDigit companion_digit(const Rational& xi, const Params& pr) {
    if (xi <= 0) throw PreconditionError("companion_digit: value must be positive");
    const CompanionDigit v = detail::companion_digit_raw(xi, pr);
    if (v < -(pr.q() - 1) || v > pr.p() - 1)
        throw ConsistencyViolation("companion_digit: value outside digit range");
    if (detail::companion_digit_raw(xi + pr.q(), pr) != v)
        throw ConsistencyViolation("companion_digit: period-q check failed");
    return v;
}

// Companion digits of (p/q)^i * xi for i in [i_from, i_to], exact over
// rationals in both index directions.
inline CompanionWord companion_window(const Rational& xi, long long i_from, long long i_to,
                                      const Params& pr) {
    if (i_from > i_to) throw PreconditionError("companion_window: empty index range");
    if (xi <= 0) throw PreconditionError("companion_window: value must be positive");
    CompanionWord out;
    out.reserve(static_cast<std::size_t>(i_to - i_from + 1));
    const Rational ratio(pr.p(), pr.q());
    Rational v = xi * rational_pow(ratio, i_from);
    for (long long i = i_from; i <= i_to; ++i) {
        out.push_back(companion_digit(v, pr));
        v *= ratio;
    }
    return out;
}

// The sliding block code connecting trace and companion digits:
//   Phi(y)[i] = q*md_p(y[i+1]) - p*md_q(y[i])
// on any digit sequence y.  Consecutive entries of a column trace are
// consecutive time steps, which is the reading under which
// Phi(trace) = companion holds.
inline CompanionDigit companion_from_pair(Digit y_i, Digit y_next, const Params& pr) {
    return static_cast<CompanionDigit>(pr.q() * static_cast<int>(md(y_next, pr.p())) -
                                       pr.p() * static_cast<int>(md(y_i, pr.q())));
}

inline CompanionWord companion_from_word(std::span<const Digit> y, const Params& pr) {
    CompanionWord out;
    if (y.size() < 2) return out;
    out.reserve(y.size() - 1);
    for (std::size_t i = 0; i + 1 < y.size(); ++i)
        out.push_back(companion_from_pair(y[i], y[i + 1], pr));
    return out;
}

// Companion digits for times [t_from, t_to] read off the column-0 trace of
// a configuration; negative times run the inverse automaton first.
// F^t_from(x): negative times run the inverse automaton.
inline Configuration advance(const Configuration& x, long long t, const Rules& R) {
    Configuration cur = x;
    for (long long i = 0; i < t; ++i) cur = apply(cur, R, AutomatonKind::fmul_p_over_q);
    for (long long i = 0; i > t; --i) cur = apply(cur, R, AutomatonKind::fmul_q_over_p);
    return cur;
}

inline CompanionWord companion_from_trace(const Configuration& x, long long t_from, long long t_to,
                                          const Rules& R) {
    if (t_from > t_to) throw PreconditionError("companion_from_trace: empty time range");
    const Configuration start = advance(x, t_from, R);
    const int len = static_cast<int>(t_to - t_from + 2); // one extra for the pair at t_to
    const DigitWord tr = trace_of(start, 0, len, R);
    return companion_from_word(tr, R.params());
}

struct CompfracResult {
    CompanionWord digits;  // companion digits 0..N
    Rational partial_sum;  // (1/p) * sum (q/p)^i * digit_i
    Rational error;        // |frac(xi) - partial_sum|
    Rational bound;        // (q/p)^(N+1)
    bool within_bound = false;
};

// Partial reconstruction of frac(xi) from its companion digits; the
// truncation error is at most (q/p)^(N+1).
inline CompfracResult compfrac_reconstruct(const Rational& xi, int N, const Params& pr) {
    if (N < 0) throw PreconditionError("compfrac_reconstruct: N must be >= 0");
    CompfracResult res;
    res.digits = companion_window(xi, 0, N, pr);
    const Rational qp(pr.q(), pr.p());
    Rational sum = 0;
    Rational pow = 1;
    for (int i = 0; i <= N; ++i) {
        sum += pow * res.digits[static_cast<std::size_t>(i)];
        pow *= qp;
    }
    res.partial_sum = sum / pr.p();
    const Rational diff = rfrac(xi) - res.partial_sum;
    res.error = diff < 0 ? Rational(-diff) : diff;
    res.bound = rational_pow(qp, N + 1);
    res.within_bound = res.error <= res.bound;
    return res;
}

// The companion word of a digit word, together with the two boundary
// residues, pins the word down: Phi values recover every interior digit
// mod p and mod q.  Verifies this exhaustively on all words of length 2 up
// to max_len, both by direct reconstruction and by key collision.
inline CheckResult companion_injectivity_check(int max_len, const Params& pr) {
    const int base = pr.base();
    const int p = pr.p();
    const int q = pr.q();

    // q^{-1} mod p and (-p)^{-1} mod q by search; moduli are tiny
    int q_inv_mod_p = 0;
    for (int t = 1; t < p; ++t)
        if (t * q % p == 1) q_inv_mod_p = t;
    int p_inv_mod_q = 0;
    for (int t = 1; t < q; ++t)
        if (t * p % q == 1) p_inv_mod_q = t;

    std::vector<Digit> crt(static_cast<std::size_t>(p * q));
    for (Digit d = 0; d < base; ++d)
        crt[static_cast<std::size_t>((d % p) * q + d % q)] = d;

    for (int len = 2; len <= max_len; ++len) {
        std::unordered_map<std::string, std::uint64_t> seen;
        bool overflow = false;
        const std::uint64_t total = detail::checked_pow_u64(base, len, overflow);
        if (overflow) throw PreconditionError("companion_injectivity_check: length too large");
        DigitWord w(static_cast<std::size_t>(len));
        for (std::uint64_t key = 0; key < total; ++key) {
            std::uint64_t rest = key;
            for (int i = len - 1; i >= 0; --i) {
                w[static_cast<std::size_t>(i)] = static_cast<Digit>(rest % base);
                rest /= static_cast<std::uint64_t>(base);
            }
            const CompanionWord phi = companion_from_word(w, pr);

            // direct reconstruction from phi plus boundary residues
            DigitWord rec(static_cast<std::size_t>(len));
            std::vector<int> res_p(static_cast<std::size_t>(len), -1);
            std::vector<int> res_q(static_cast<std::size_t>(len), -1);
            res_p[0] = w[0] % p;                                    // boundary
            res_q[static_cast<std::size_t>(len - 1)] = w.back() % q; // boundary
            for (int i = 0; i + 1 < len; ++i) {
                const int phi_i = phi[static_cast<std::size_t>(i)];
                res_p[static_cast<std::size_t>(i + 1)] =
                    static_cast<int>(md(phi_i, p)) * q_inv_mod_p % p;
                res_q[static_cast<std::size_t>(i)] =
                    static_cast<int>(md(-phi_i, q)) * p_inv_mod_q % q;
            }
            for (int i = 0; i < len; ++i) {
                rec[static_cast<std::size_t>(i)] =
                    crt[static_cast<std::size_t>(res_p[static_cast<std::size_t>(i)] * q +
                                                 res_q[static_cast<std::size_t>(i)])];
            }
            if (rec != w) {
                std::ostringstream os;
                os << "reconstruction failed for word " << word_to_string(w);
                return CheckResult::fail(os.str());
            }

            // no two words may share (phi word, boundary residues)
            std::string sig;
            for (int v : phi) sig += std::to_string(v) + ",";
            sig += "|" + std::to_string(w[0] % p) + "," + std::to_string(w.back() % q);
            auto [it, inserted] = seen.emplace(std::move(sig), key);
            if (!inserted) {
                std::ostringstream os;
                os << "collision: words " << word_to_string(unpack_word(it->second, len, base))
                   << " and " << word_to_string(w) << " share companion image and boundary";
                return CheckResult::fail(os.str());
            }
        }
    }
    return CheckResult::pass();
}

} // namespace tracelab

#endif
