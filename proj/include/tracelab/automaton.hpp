#ifndef TRACELAB_AUTOMATON_HPP
#define TRACELAB_AUTOMATON_HPP

#include <cstdint>
#include <span>
#include <sstream>
#include <vector>

#include "tracelab/configuration.hpp"
#include "tracelab/params.hpp"

namespace tracelab {

enum class FracDirection { p_over_q, q_over_p };

inline FracDirection opposite(FracDirection d) {
    return d == FracDirection::p_over_q ? FracDirection::q_over_p : FracDirection::p_over_q;
}

// Two-digit local rule of multiplication by p in base pq:
//   mul(a, b) = a0*p + b1   where a = a1*q + a0, b = b1*q + b0.
// Direction by_q swaps the roles of p and q (multiplication by q).
inline Digit mul_rule(Digit a, Digit b, const Params& pr, Direction dir) {
    const int hi = dir == Direction::by_p ? pr.p() : pr.q();
    const auto [a1, a0] = decompose(a, pr, dir == Direction::by_p ? Direction::by_q : Direction::by_p);
    const auto [b1, b0] = decompose(b, pr, dir == Direction::by_p ? Direction::by_q : Direction::by_p);
    (void)a1;
    (void)b0;
    return a0 * hi + b1;
}

// Three-digit local rule of multiplication by p/q in base pq, the fusion of
// two mul steps followed by a shift:
//   fmul(a, c, b) = mul(mul(a, c), mul(c, b)).
inline Digit fmul_rule(Digit a, Digit c, Digit b, const Params& pr, FracDirection dir) {
    const Direction d = dir == FracDirection::p_over_q ? Direction::by_p : Direction::by_q;
    return mul_rule(mul_rule(a, c, pr, d), mul_rule(c, b, pr, d), pr, d);
}

// Dense lookup tables for the local rules of one parameter pair.
// Immutable after construction and freely shared between threads.
class Rules {
public:
    explicit Rules(Params pr) : params_(pr) {
        const int b = pr.base();
        mul_p_.resize(static_cast<std::size_t>(b) * b);
        mul_q_.resize(static_cast<std::size_t>(b) * b);
        for (Digit a = 0; a < b; ++a)
            for (Digit c = 0; c < b; ++c) {
                mul_p_[idx2(a, c)] = mul_rule(a, c, pr, Direction::by_p);
                mul_q_[idx2(a, c)] = mul_rule(a, c, pr, Direction::by_q);
            }
        fmul_pq_.resize(static_cast<std::size_t>(b) * b * b);
        fmul_qp_.resize(static_cast<std::size_t>(b) * b * b);
        for (Digit a = 0; a < b; ++a)
            for (Digit c = 0; c < b; ++c)
                for (Digit d = 0; d < b; ++d) {
                    // composed through the tables, then cross-checked
                    // against the direct formula
                    const Digit fp = mul_p_[idx2(mul_p_[idx2(a, c)], mul_p_[idx2(c, d)])];
                    const Digit fq = mul_q_[idx2(mul_q_[idx2(a, c)], mul_q_[idx2(c, d)])];
                    if (fp != fmul_rule(a, c, d, pr, FracDirection::p_over_q) ||
                        fq != fmul_rule(a, c, d, pr, FracDirection::q_over_p))
                        throw ConsistencyViolation("rules: fused table disagrees with composition");
                    fmul_pq_[idx3(a, c, d)] = fp;
                    fmul_qp_[idx3(a, c, d)] = fq;
                }
    }

    const Params& params() const { return params_; }
    int base() const { return params_.base(); }

    Digit mul(Digit a, Digit b, Direction dir) const {
        return dir == Direction::by_p ? mul_p_[idx2(a, b)] : mul_q_[idx2(a, b)];
    }

    Digit fmul(Digit a, Digit c, Digit b, FracDirection dir) const {
        return dir == FracDirection::p_over_q ? fmul_pq_[idx3(a, c, b)] : fmul_qp_[idx3(a, c, b)];
    }

    const Digit* fmul_table(FracDirection dir) const {
        return dir == FracDirection::p_over_q ? fmul_pq_.data() : fmul_qp_.data();
    }

    // Extended application to finite words: length shrinks by 1 (mul)
    // or 2 (fmul).
    DigitWord mul_word(std::span<const Digit> w, Direction dir) const {
        DigitWord out;
        if (w.size() < 2) return out;
        out.reserve(w.size() - 1);
        for (std::size_t i = 0; i + 1 < w.size(); ++i)
            out.push_back(mul(w[i], w[i + 1], dir));
        return out;
    }

    DigitWord fmul_word(std::span<const Digit> w, FracDirection dir) const {
        DigitWord out;
        if (w.size() < 3) return out;
        out.reserve(w.size() - 2);
        for (std::size_t i = 0; i + 2 < w.size(); ++i)
            out.push_back(fmul(w[i], w[i + 1], w[i + 2], dir));
        return out;
    }

private:
    std::size_t idx2(Digit a, Digit b) const {
        return static_cast<std::size_t>(a) * static_cast<std::size_t>(params_.base()) +
               static_cast<std::size_t>(b);
    }
    std::size_t idx3(Digit a, Digit c, Digit b) const {
        return (static_cast<std::size_t>(a) * params_.base() + static_cast<std::size_t>(c)) *
                   params_.base() +
               static_cast<std::size_t>(b);
    }

    Params params_;
    DigitWord mul_p_, mul_q_;   // base^2
    DigitWord fmul_pq_, fmul_qp_; // base^3
};

enum class AutomatonKind { mul_p, mul_q, shift, shift_inverse, fmul_p_over_q, fmul_q_over_p };

// One exact automaton step on an eventually-constant configuration.  The
// core is padded by two tail digits per side, the local rule swept across
// the padded word, and the result re-canonicalized, so the image is exact
// with O(core) work.  Tails map to the rule's value on constant input.
inline Configuration apply(const Configuration& x, const Rules& R, AutomatonKind kind) {
    switch (kind) {
    case AutomatonKind::shift:
        return Configuration(x.left_tail(), x.core(), x.right_tail(), x.offset() - 1);
    case AutomatonKind::shift_inverse:
        return Configuration(x.left_tail(), x.core(), x.right_tail(), x.offset() + 1);
    case AutomatonKind::mul_p:
    case AutomatonKind::mul_q: {
        const Direction dir = kind == AutomatonKind::mul_p ? Direction::by_p : Direction::by_q;
        const long long lo = x.offset() - 2;
        const long long hi = x.core_end() + 1;
        const DigitWord padded = x.window(lo, hi);
        // image position i reads x[i], x[i+1]
        const DigitWord img = R.mul_word(padded, dir);
        const Digit lt = R.mul(x.left_tail(), x.left_tail(), dir);
        const Digit rt = R.mul(x.right_tail(), x.right_tail(), dir);
        return Configuration(lt, img, rt, lo);
    }
    case AutomatonKind::fmul_p_over_q:
    case AutomatonKind::fmul_q_over_p: {
        const FracDirection dir = kind == AutomatonKind::fmul_p_over_q
                                      ? FracDirection::p_over_q
                                      : FracDirection::q_over_p;
        const long long lo = x.offset() - 2;
        const long long hi = x.core_end() + 1;
        const DigitWord padded = x.window(lo, hi);
        // image position i reads x[i-1], x[i], x[i+1]
        const DigitWord img = R.fmul_word(padded, dir);
        const Digit lt = R.fmul(x.left_tail(), x.left_tail(), x.left_tail(), dir);
        const Digit rt = R.fmul(x.right_tail(), x.right_tail(), x.right_tail(), dir);
        return Configuration(lt, img, rt, lo + 1);
    }
    }
    throw PreconditionError("apply: unknown automaton kind");
}

inline AutomatonKind fmul_kind(FracDirection dir) {
    return dir == FracDirection::p_over_q ? AutomatonKind::fmul_p_over_q
                                          : AutomatonKind::fmul_q_over_p;
}

// Materialized evolution: rows[t] = F^t(x) for t = 0..steps-1.
struct SpaceTimeDiagram {
    Params params;
    int steps = 0;
    std::vector<Configuration> rows;
};

inline SpaceTimeDiagram space_time_diagram(const Configuration& x, int steps, const Rules& R,
                                           AutomatonKind kind = AutomatonKind::fmul_p_over_q) {
    if (steps < 1) throw PreconditionError("space_time_diagram: steps must be >= 1");
    SpaceTimeDiagram d{R.params(), steps, {}};
    d.rows.reserve(static_cast<std::size_t>(steps));
    d.rows.push_back(x);
    for (int t = 1; t < steps; ++t) d.rows.push_back(apply(d.rows.back(), R, kind));
    return d;
}

// Radius-1 reconstruction rule: in a space-time diagram of the p/q
// automaton, the digit one column to the left is a function of the three
// nearest digits in the current column,
//
//   x[0] = delta( F^-1(x)[1], x[1], F(x)[1] ).
//
// The table is derived by exhausting all three-digit windows; uniqueness is
// checked on the way.  Triples that no window realizes stay undefined.
class DeltaRule {
public:
    explicit DeltaRule(const Rules& R) : params_(R.params()) {
        const int b = params_.base();
        table_.assign(static_cast<std::size_t>(b) * b * b, kUndefined);
        for (Digit x0 = 0; x0 < b; ++x0)
            for (Digit x1 = 0; x1 < b; ++x1)
                for (Digit x2 = 0; x2 < b; ++x2) {
                    const Digit u = R.fmul(x0, x1, x2, FracDirection::q_over_p);
                    const Digit v = R.fmul(x0, x1, x2, FracDirection::p_over_q);
                    std::int16_t& slot = table_[index(u, x1, v)];
                    if (slot == kUndefined) {
                        slot = static_cast<std::int16_t>(x0);
                    } else if (slot != x0) {
                        std::ostringstream os;
                        os << "delta: triple (" << u << "," << x1 << "," << v
                           << ") maps to both " << slot << " and " << x0;
                        throw ConsistencyViolation(os.str());
                    }
                }
    }

    const Params& params() const { return params_; }

    bool defined(Digit u, Digit c, Digit v) const { return table_[index(u, c, v)] != kUndefined; }

    Digit lookup(Digit u, Digit c, Digit v) const {
        const std::int16_t r = table_[index(u, c, v)];
        if (r == kUndefined) {
            std::ostringstream os;
            os << "delta: triple (" << u << "," << c << "," << v << ") is not realizable";
            throw UndefinedTriple(os.str());
        }
        return static_cast<Digit>(r);
    }

    // One reconstruction pass over a finite column reading y[t] for
    // t in [0, |y|): returns the neighboring column at times [1, |y|-1).
    DigitWord apply_word(std::span<const Digit> y) const {
        DigitWord out;
        if (y.size() < 3) return out;
        out.reserve(y.size() - 2);
        for (std::size_t t = 1; t + 1 < y.size(); ++t)
            out.push_back(lookup(y[t - 1], y[t], y[t + 1]));
        return out;
    }

private:
    static constexpr std::int16_t kUndefined = -1;

    std::size_t index(Digit u, Digit c, Digit v) const {
        const int b = params_.base();
        return (static_cast<std::size_t>(u) * b + static_cast<std::size_t>(c)) * b +
               static_cast<std::size_t>(v);
    }

    Params params_;
    std::vector<std::int16_t> table_;
};

inline DeltaRule derive_delta(const Rules& R) { return DeltaRule(R); }

// Width-widening of a single-column trace word: repeated delta application
// reconstructs the columns to the left, each pass costing two time steps at
// the boundary.  tuples[k][j] is the digit at column (j - width + 1 + ...)
// read left to right, i.e. each tuple lists columns j-width+1 ... j at one
// time step; the first tuple is at time t_begin = width - 1.
struct WidenedTrace {
    int t_begin = 0;
    std::vector<DigitWord> tuples;
};

inline WidenedTrace widen_trace(std::span<const Digit> y, const DeltaRule& delta, int width) {
    if (width < 1) throw PreconditionError("widen_trace: width must be >= 1");
    if (static_cast<int>(y.size()) < 2 * width - 1)
        throw PreconditionError("widen_trace: trace too short for requested width");
    std::vector<DigitWord> levels;
    levels.emplace_back(y.begin(), y.end());
    for (int k = 1; k < width; ++k)
        levels.push_back(delta.apply_word(levels.back())); // starts at time k
    WidenedTrace out;
    out.t_begin = width - 1;
    const int t_end = static_cast<int>(y.size()) - width + 1;
    for (int t = out.t_begin; t < t_end; ++t) {
        DigitWord tuple(static_cast<std::size_t>(width));
        for (int k = 0; k < width; ++k) {
            const auto& level = levels[static_cast<std::size_t>(width - 1 - k)];
            tuple[static_cast<std::size_t>(k)] =
                level[static_cast<std::size_t>(t - (width - 1 - k))];
        }
        out.tuples.push_back(std::move(tuple));
    }
    return out;
}

} // namespace tracelab

#endif
