#ifndef TRACELAB_MAHLER_HPP
#define TRACELAB_MAHLER_HPP

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "tracelab/automaton.hpp"
#include "tracelab/numbers.hpp"
#include "tracelab/rational.hpp"
#include "tracelab/trace_language.hpp"

namespace tracelab {

// A configuration built digit by digit to the left so that its column-0
// trace stays below p forever: start from digit p at the origin with zeros
// to the right, then pick each next left digit so the next trace value
// lands in {0, ..., p-1}.  The reachable trace values at each step form a
// full residue class mod p, which meets {0, ..., p-1} in exactly one digit,
// so the trace is forced and a choice always exists.
struct ConstrainedPrefix {
    Digit seed = 0;                 // digit at position 0
    std::vector<Digit> left_digits; // chosen digits at positions -1, -2, ...
    DigitWord trace;                // trace values at times 1..steps, all < p

    Configuration to_configuration() const {
        DigitWord core(left_digits.rbegin(), left_digits.rend());
        core.push_back(seed);
        return Configuration(0, core, 0, -static_cast<long long>(left_digits.size()));
    }
};

inline ConstrainedPrefix build_constrained_prefix(int steps, const Rules& R) {
    if (steps < 1) throw PreconditionError("build_constrained_prefix: steps must be >= 1");
    const Params& pr = R.params();
    const int base = pr.base();
    const int p = pr.p();

    ConstrainedPrefix out;
    out.seed = p;

    // rows[t][steps + pos] = digit of F^t at position pos.  Row 0 is known
    // on [-i, steps+1] once i left digits are committed; deeper rows hold
    // every cell whose dependence cone fits the known part of row 0.
    const std::size_t width = 2 * static_cast<std::size_t>(steps) + 2;
    std::vector<DigitWord> rows(static_cast<std::size_t>(steps) + 1,
                                DigitWord(width, 0));
    auto cell = [&](int t, long long pos) -> Digit& {
        return rows[static_cast<std::size_t>(t)][static_cast<std::size_t>(pos + steps)];
    };

    cell(0, 0) = p;
    for (int t = 1; t <= steps; ++t)
        for (long long pos = t; pos <= steps + 1 - t; ++pos)
            cell(t, pos) = R.fmul(cell(t - 1, pos - 1), cell(t - 1, pos), cell(t - 1, pos + 1),
                                  FracDirection::p_over_q);

    DigitWord diag(static_cast<std::size_t>(steps) + 1);
    for (int i = 1; i <= steps; ++i) {
        int chosen = -1;
        Digit trace_digit = -1;
        DigitWord reachable;
        for (Digit d = 0; d < base; ++d) {
            Digit c = d;
            for (int t = 1; t <= i; ++t)
                c = R.fmul(c, cell(t - 1, t - i), cell(t - 1, t - i + 1),
                           FracDirection::p_over_q);
            if (std::find(reachable.begin(), reachable.end(), c) == reachable.end())
                reachable.push_back(c);
            if (c < p && chosen < 0) {
                chosen = d;
                trace_digit = c;
            }
        }
        // the reachable values must be one full residue class mod p
        if (static_cast<int>(reachable.size()) != pr.q())
            throw NoChoiceExists("constrained prefix: reachable set is not a full class at step " +
                                 std::to_string(i));
        for (Digit c : reachable)
            if (c % p != reachable.front() % p)
                throw NoChoiceExists("constrained prefix: reachable values differ mod p at step " +
                                     std::to_string(i));
        if (chosen < 0)
            throw NoChoiceExists("constrained prefix: no digit keeps the trace below p at step " +
                                 std::to_string(i));

        // commit the whole diagonal of the chosen digit, past row i down to
        // where its cone leaves the known part of row 0
        const int t_max = std::min(steps, (steps + 1 + i) / 2);
        diag[0] = chosen;
        cell(0, -i) = chosen;
        for (int t = 1; t <= t_max; ++t) {
            diag[static_cast<std::size_t>(t)] =
                R.fmul(diag[static_cast<std::size_t>(t - 1)], cell(t - 1, t - i),
                       cell(t - 1, t - i + 1), FracDirection::p_over_q);
            cell(t, t - i) = diag[static_cast<std::size_t>(t)];
        }
        out.left_digits.push_back(chosen);
        out.trace.push_back(trace_digit);
    }
    return out;
}

// One grid candidate of the finite-column search.
struct ColumnHit {
    long long numerator = 0;
    int den_exp = 0;          // value = numerator / base^den_exp
    int run_length = 0;       // first fractional digits < p for t = 0..run_length-1
    long long first_violation = -1; // step of the first digit >= p, or -1
};

// For every xi = num/base^k in the grid, follows the first fractional digit
// of (p/q)^t * xi (one fixed column of the space-time diagram, but computed
// on the exact rational, which the automaton provably matches) and records
// how long it stays below p.  Result sorted by run length, longest first.
inline std::vector<ColumnHit> search_finite_columns(long long max_num, int max_den_exp, int steps,
                                                    const Params& pr, const Budget& budget) {
    if (max_num < 1 || max_den_exp < 0 || steps < 1)
        throw PreconditionError("search_finite_columns: empty search space");
    const int base = pr.base();
    const unsigned long long candidates = static_cast<unsigned long long>(max_num) *
                                          (static_cast<unsigned long long>(max_den_exp) + 1);
    if (candidates > budget.max_windows)
        throw BudgetExceeded("search_finite_columns: " + std::to_string(candidates) +
                             " candidates exceed the budget");

    std::vector<ColumnHit> hits;
    const Rational ratio(pr.p(), pr.q());
    for (int k = 0; k <= max_den_exp; ++k) {
        const BigInt den = ipow(base, static_cast<unsigned>(k));
        for (long long num = 1; num <= max_num; ++num) {
            if (k > 0 && num % base == 0) continue; // same value as a smaller exponent
            ColumnHit hit{num, k, steps, -1};
            Rational v(BigInt(num), den);
            for (int t = 0; t < steps; ++t) {
                const BigInt digit = rfloor(rfrac(v) * base);
                if (digit >= pr.p()) {
                    hit.run_length = t;
                    hit.first_violation = t;
                    break;
                }
                v *= ratio;
            }
            hits.push_back(hit);
        }
    }
    std::sort(hits.begin(), hits.end(), [](const ColumnHit& a, const ColumnHit& b) {
        if (a.run_length != b.run_length) return a.run_length > b.run_length;
        if (a.den_exp != b.den_exp) return a.den_exp < b.den_exp;
        return a.numerator < b.numerator;
    });
    return hits;
}

enum class DiagramStyle { ascii, pgm };

// Rows t = 0..steps-1 of the p/q space-time diagram restricted to positions
// [win_lo, win_hi].  ascii: one character per digit, '.' for zero; pgm:
// plain P2 with digit d mapped to gray floor(255 * (1 - d/(base-1))), so
// zero renders white.
inline std::string render_diagram(const SpaceTimeDiagram& d, long long win_lo, long long win_hi,
                                  DiagramStyle style) {
    if (win_lo > win_hi) throw PreconditionError("render_diagram: empty window");
    const int base = d.params.base();
    std::ostringstream os;
    if (style == DiagramStyle::pgm)
        os << "P2\n" << (win_hi - win_lo + 1) << ' ' << d.steps << "\n255\n";
    for (const Configuration& row : d.rows) {
        for (long long pos = win_lo; pos <= win_hi; ++pos) {
            const Digit digit = row.at(pos);
            if (style == DiagramStyle::ascii) {
                os << (digit == 0 ? '.' : digit_to_char(digit));
            } else {
                if (pos > win_lo) os << ' ';
                os << (255 * (base - 1 - digit)) / (base - 1);
            }
        }
        os << '\n';
    }
    return os.str();
}

inline std::string render_diagram(const Configuration& x, int steps, long long win_lo,
                                  long long win_hi, const Rules& R, DiagramStyle style) {
    return render_diagram(space_time_diagram(x, steps, R), win_lo, win_hi, style);
}

} // namespace tracelab

#endif
