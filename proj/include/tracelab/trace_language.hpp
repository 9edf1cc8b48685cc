#ifndef TRACELAB_TRACE_LANGUAGE_HPP
#define TRACELAB_TRACE_LANGUAGE_HPP

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "tracelab/automaton.hpp"
#include "tracelab/check.hpp"
#include "tracelab/configuration.hpp"
#include "tracelab/rational.hpp"

namespace tracelab {

// Work cap for exhaustive window sweeps, counted in windows.  The
// TRACELAB_BUDGET environment variable overrides the default.
struct Budget {
    std::uint64_t max_windows = 1'000'000'000ULL;

    static Budget from_env() {
        Budget b;
        if (const char* s = std::getenv("TRACELAB_BUDGET")) {
            char* end = nullptr;
            const unsigned long long v = std::strtoull(s, &end, 10);
            if (end == s || *end != '\0' || v == 0)
                throw ParseError("TRACELAB_BUDGET must be a positive integer");
            b.max_windows = v;
        }
        return b;
    }
};

inline int default_threads() {
    const unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : static_cast<int>(n);
}

// Column reading of a space-time diagram: digits F^t(x)[column] for
// t = 0..length-1, computed by exact automaton application.
inline DigitWord trace_of(const Configuration& x, long long column, int length, const Rules& R,
                          FracDirection dir = FracDirection::p_over_q) {
    DigitWord out;
    out.reserve(static_cast<std::size_t>(std::max(length, 0)));
    Configuration cur = x;
    for (int t = 0; t < length; ++t) {
        out.push_back(cur.at(column));
        if (t + 1 < length) cur = apply(cur, R, fmul_kind(dir));
    }
    return out;
}

// The n-step trace of the center cell depends only on the width-(2n-1)
// window around it.  Collects the center digit while the local rule shrinks
// the word, so an odd-length window is exactly one trace word.
inline DigitWord trace_from_window(std::span<const Digit> w, const Rules& R,
                                   FracDirection dir = FracDirection::p_over_q) {
    if (w.empty() || w.size() % 2 == 0)
        throw PreconditionError("trace_from_window: window length must be odd");
    const int n = (static_cast<int>(w.size()) + 1) / 2;
    DigitWord out;
    out.reserve(static_cast<std::size_t>(n));
    DigitWord cur(w.begin(), w.end());
    int center = n - 1;
    for (int t = 0; t < n; ++t) {
        out.push_back(cur[static_cast<std::size_t>(center)]);
        if (t + 1 < n) {
            cur = R.fmul_word(cur, dir);
            --center;
        }
    }
    return out;
}

// Bit-per-word set over packed length-n words.  The packed space base^n is
// small even when the window space base^(2n-1) is huge, so enumeration
// deduplicates into a few kilobytes.
class WordBitset {
public:
    WordBitset() = default;
    explicit WordBitset(std::uint64_t size) : size_(size), bits_((size + 63) / 64, 0) {}

    std::uint64_t size() const { return size_; }
    bool empty() const { return size_ == 0; }

    void set(std::uint64_t i) { bits_[i >> 6] |= (std::uint64_t{1} << (i & 63)); }
    bool test(std::uint64_t i) const { return (bits_[i >> 6] >> (i & 63)) & 1u; }

    void merge(const WordBitset& other) {
        for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] |= other.bits_[i];
    }

    std::uint64_t count() const {
        std::uint64_t c = 0;
        for (std::uint64_t w : bits_) c += static_cast<std::uint64_t>(__builtin_popcountll(w));
        return c;
    }

    // ascending packed keys
    template <typename Fn> void for_each(Fn&& fn) const {
        for (std::size_t wi = 0; wi < bits_.size(); ++wi) {
            std::uint64_t w = bits_[wi];
            while (w) {
                const int b = __builtin_ctzll(w);
                fn(static_cast<std::uint64_t>(wi) * 64 + static_cast<std::uint64_t>(b));
                w &= w - 1;
            }
        }
    }

    std::vector<std::uint64_t> to_vector() const {
        std::vector<std::uint64_t> v;
        v.reserve(count());
        for_each([&](std::uint64_t k) { v.push_back(k); });
        return v;
    }

private:
    std::uint64_t size_ = 0;
    std::vector<std::uint64_t> bits_;
};

namespace detail {

// Sweeps every window w in digs^m whose packed value lies in a prefix
// block, marking the packed trace of each.  The space-time triangle is kept
// incrementally: bumping window digit k only recomputes the anti-diagonal
// of cells (r, k-r), so the amortized cost per window is O(trace length).
inline void sweep_block(const Rules& R, FracDirection dir, int m, int prefix_len,
                        std::uint64_t prefix_begin, std::uint64_t prefix_end, WordBitset& out) {
    const int base = R.base();
    const int tr_len = (m + 1) / 2;
    const int center = tr_len - 1;
    const Digit* tab = R.fmul_table(dir);
    const std::size_t b = static_cast<std::size_t>(base);

    std::vector<DigitWord> row(static_cast<std::size_t>(tr_len),
                               DigitWord(static_cast<std::size_t>(m), 0));
    std::vector<std::uint64_t> packed(static_cast<std::size_t>(tr_len), 0);

    auto diag = [&](int k) {
        if (k == center) packed[0] = static_cast<std::uint64_t>(row[0][static_cast<std::size_t>(center)]);
        const int rmax = std::min(k / 2, tr_len - 1);
        for (int r = 1; r <= rmax; ++r) {
            const std::size_t pos = static_cast<std::size_t>(k - r);
            const DigitWord& up = row[static_cast<std::size_t>(r - 1)];
            const Digit v = tab[(static_cast<std::size_t>(up[pos - 1]) * b +
                                 static_cast<std::size_t>(up[pos])) *
                                    b +
                                static_cast<std::size_t>(up[pos + 1])];
            row[static_cast<std::size_t>(r)][pos] = v;
            if (static_cast<int>(pos) == center)
                packed[static_cast<std::size_t>(r)] =
                    packed[static_cast<std::size_t>(r - 1)] * b + static_cast<std::uint64_t>(v);
        }
    };

    DigitWord& w = row[0];
    for (std::uint64_t pref = prefix_begin; pref < prefix_end; ++pref) {
        std::uint64_t rest = pref;
        for (int i = prefix_len - 1; i >= 0; --i) {
            w[static_cast<std::size_t>(i)] = static_cast<Digit>(rest % b);
            rest /= b;
        }
        for (int k = prefix_len; k < m; ++k) w[static_cast<std::size_t>(k)] = 0;
        for (int k = 0; k < m; ++k) diag(k);
        for (;;) {
            out.set(packed[static_cast<std::size_t>(tr_len - 1)]);
            int k = m - 1;
            while (k >= prefix_len && w[static_cast<std::size_t>(k)] == base - 1) {
                w[static_cast<std::size_t>(k)] = 0;
                --k;
            }
            if (k < prefix_len) break;
            ++w[static_cast<std::size_t>(k)];
            for (int kk = k; kk < m; ++kk) diag(kk);
        }
    }
}

inline std::uint64_t checked_pow_u64(int base, int e, bool& overflow) {
    std::uint64_t r = 1;
    overflow = false;
    for (int i = 0; i < e; ++i) {
        if (r > (~std::uint64_t{0}) / static_cast<std::uint64_t>(base)) {
            overflow = true;
            return 0;
        }
        r *= static_cast<std::uint64_t>(base);
    }
    return r;
}

} // namespace detail

// Exhaustive sweep of all base^(2n-1) windows; the result is exactly the
// set of length-n trace words.  Deterministic for any thread count: threads
// partition the window space by leading digits and the private bitsets are
// OR-merged.
inline WordBitset sweep_language(int n, const Rules& R, FracDirection dir, const Budget& budget,
                                 int threads = 0) {
    if (n < 1) throw PreconditionError("sweep_language: n must be >= 1");
    const int base = R.base();
    const int m = 2 * n - 1;
    bool overflow = false;
    const std::uint64_t windows = detail::checked_pow_u64(base, m, overflow);
    if (overflow || windows > budget.max_windows) {
        std::ostringstream os;
        os << "enumeration over " << (overflow ? ipow(base, static_cast<unsigned>(m)).str()
                                               : std::to_string(windows))
           << " windows exceeds the budget of " << budget.max_windows
           << " (set TRACELAB_BUDGET to override)";
        throw BudgetExceeded(os.str());
    }
    const std::uint64_t space = detail::checked_pow_u64(base, n, overflow);
    if (overflow) throw BudgetExceeded("sweep_language: packed word space exceeds 64 bits");

    if (threads <= 0) threads = default_threads();
    int prefix_len = 0;
    if (threads > 1 && m > 2) prefix_len = m >= 4 ? 2 : 1;
    std::uint64_t blocks = 1;
    for (int i = 0; i < prefix_len; ++i) blocks *= static_cast<std::uint64_t>(base);
    const int nthreads = static_cast<int>(
        std::min<std::uint64_t>(static_cast<std::uint64_t>(threads), blocks));

    std::vector<WordBitset> parts(static_cast<std::size_t>(nthreads), WordBitset(space));
    if (nthreads == 1) {
        detail::sweep_block(R, dir, m, prefix_len, 0, blocks, parts[0]);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nthreads));
        for (int t = 0; t < nthreads; ++t) {
            const std::uint64_t lo = blocks * static_cast<std::uint64_t>(t) /
                                     static_cast<std::uint64_t>(nthreads);
            const std::uint64_t hi = blocks * static_cast<std::uint64_t>(t + 1) /
                                     static_cast<std::uint64_t>(nthreads);
            pool.emplace_back([&, t, lo, hi] {
                detail::sweep_block(R, dir, m, prefix_len, lo, hi, parts[static_cast<std::size_t>(t)]);
            });
        }
        for (auto& th : pool) th.join();
        for (int t = 1; t < nthreads; ++t) parts[0].merge(parts[static_cast<std::size_t>(t)]);
    }
    return std::move(parts[0]);
}

// Levels 1..N of the trace language from a single sweep at level N: every
// shorter trace word is a prefix of a longer one, so the lower levels fall
// out by truncation.
class LanguageTable {
public:
    static LanguageTable build(int max_n, const Rules& R, FracDirection dir, const Budget& budget,
                               int threads = 0) {
        LanguageTable t;
        t.params_ = R.params();
        t.dir_ = dir;
        t.levels_.resize(static_cast<std::size_t>(max_n) + 1);
        t.levels_[static_cast<std::size_t>(max_n)] = sweep_language(max_n, R, dir, budget, threads);
        const int base = R.base();
        for (int n = max_n - 1; n >= 1; --n) {
            WordBitset lower(t.levels_[static_cast<std::size_t>(n + 1)].size() /
                             static_cast<std::uint64_t>(base));
            t.levels_[static_cast<std::size_t>(n + 1)].for_each(
                [&](std::uint64_t k) { lower.set(k / static_cast<std::uint64_t>(base)); });
            t.levels_[static_cast<std::size_t>(n)] = std::move(lower);
        }
        return t;
    }

    const Params& params() const { return *params_; }
    int max_n() const { return static_cast<int>(levels_.size()) - 1; }

    const WordBitset& level(int n) const {
        if (n < 1 || n > max_n())
            throw PreconditionError("LanguageTable: level " + std::to_string(n) + " not built");
        return levels_[static_cast<std::size_t>(n)];
    }

    std::uint64_t count(int n) const { return level(n).count(); }
    std::vector<std::uint64_t> words(int n) const { return level(n).to_vector(); }

private:
    LanguageTable() = default;
    std::optional<Params> params_;
    FracDirection dir_ = FracDirection::p_over_q;
    std::vector<WordBitset> levels_;
};

// Predecessor digits of a length-n trace word, read off the level-(n+1)
// set.  Every predecessor set is one residue class mod q or the union of
// two classes with adjacent representatives; anything else is reported as a
// violation.
struct PredecessorSet {
    std::uint64_t word = 0;
    int n = 0;
    DigitWord members;            // ascending
    std::vector<int> class_residues; // residues mod q, one or two, adjacent
};

inline PredecessorSet predecessors(std::uint64_t word, int n, const WordBitset& next_level,
                                   const Params& pr) {
    const int base = pr.base();
    bool overflow = false;
    const std::uint64_t shift = detail::checked_pow_u64(base, n, overflow);
    if (overflow) throw PreconditionError("predecessors: word too long");
    PredecessorSet ps{word, n, {}, {}};
    for (Digit a = 0; a < base; ++a)
        if (next_level.test(static_cast<std::uint64_t>(a) * shift + word))
            ps.members.push_back(a);

    const int p = pr.p();
    const int q = pr.q();
    std::vector<int> residue_count(static_cast<std::size_t>(q), 0);
    for (Digit a : ps.members) ++residue_count[static_cast<std::size_t>(a % q)];
    std::vector<int> full;
    for (int r = 0; r < q; ++r) {
        if (residue_count[static_cast<std::size_t>(r)] == 0) continue;
        if (residue_count[static_cast<std::size_t>(r)] != p)
            throw ShapeViolation("predecessors: partial residue class mod q in pre-set");
        full.push_back(r);
    }
    const bool one_class = full.size() == 1;
    const bool two_adjacent =
        full.size() == 2 && ((full[0] + 1) % q == full[1] || (full[1] + 1) % q == full[0]);
    if (!(one_class || two_adjacent))
        throw ShapeViolation("predecessors: pre-set is not one or two adjacent residue classes");
    ps.class_residues = std::move(full);
    return ps;
}

// One classified language level: words split by predecessor count into
// `narrow` (p predecessors) and `wide` (2p predecessors).
struct LanguageLevel {
    int n = 0;
    std::vector<std::uint64_t> words;  // ascending packed keys
    std::vector<std::uint64_t> narrow; // |pre| = p
    std::vector<std::uint64_t> wide;   // |pre| = 2p
};

inline LanguageLevel classify_level(const LanguageTable& table, int n) {
    const Params& pr = table.params();
    const WordBitset& next = table.level(n + 1);
    LanguageLevel lvl;
    lvl.n = n;
    lvl.words = table.words(n);
    const int p = pr.p();
    for (std::uint64_t w : lvl.words) {
        const PredecessorSet ps = predecessors(w, n, next, pr);
        if (static_cast<int>(ps.members.size()) == p)
            lvl.narrow.push_back(w);
        else if (static_cast<int>(ps.members.size()) == 2 * p)
            lvl.wide.push_back(w);
        else
            throw ShapeViolation("classify_level: predecessor count is neither p nor 2p");
    }
    return lvl;
}

// Builds one classified level; sweeps level n+1 under the hood.
inline LanguageLevel enumerate_language(int n, const Rules& R, const Budget& budget,
                                        int threads = 0,
                                        FracDirection dir = FracDirection::p_over_q) {
    const LanguageTable table = LanguageTable::build(n + 1, R, dir, budget, threads);
    return classify_level(table, n);
}

// Direct generation of the wide words: traces of configurations with a
// nonzero multiple of p at the origin and zeros to its right, every choice
// of the n digits left of the origin.  Returns sorted packed words of
// length n (the trace read at times 1..n).
inline std::vector<std::uint64_t> construct_wide_words(int n, const Rules& R) {
    if (n < 1) throw PreconditionError("construct_wide_words: n must be >= 1");
    const Params& pr = R.params();
    const int base = pr.base();
    bool overflow = false;
    const std::uint64_t combos = detail::checked_pow_u64(base, n, overflow);
    if (overflow) throw BudgetExceeded("construct_wide_words: n too large");

    WordBitset seen(combos);
    const int m = 2 * n + 1;
    DigitWord window(static_cast<std::size_t>(m), 0);
    for (int mult = 1; mult < pr.q(); ++mult) {
        const Digit s = static_cast<Digit>(mult * pr.p());
        window[static_cast<std::size_t>(n)] = s;
        for (std::uint64_t choice = 0; choice < combos; ++choice) {
            std::uint64_t rest = choice;
            for (int i = n - 1; i >= 0; --i) {
                window[static_cast<std::size_t>(i)] = static_cast<Digit>(rest % base);
                rest /= static_cast<std::uint64_t>(base);
            }
            const DigitWord tr = trace_from_window(window, R);
            // drop the time-0 marker digit, keep times 1..n
            seen.set(pack_word(std::span<const Digit>(tr).subspan(1), base));
        }
    }
    return seen.to_vector();
}

// Marker configurations: digit s at position j, constant fill to the right
// (zeros for the plain form, base-1 for the twin form one below), arbitrary
// prefix to the left.
inline Configuration marker_config(const Configuration& left_part, Digit s, long long j,
                                   Digit right_fill) {
    DigitWord core;
    const long long lo = std::min(left_part.offset(), j);
    for (long long i = lo; i < j; ++i) core.push_back(left_part.at(i));
    core.push_back(s);
    return Configuration(left_part.left_tail(), std::move(core), right_fill, lo);
}

// Per-period scan results for the finite-horizon aperiodicity check.
struct PeriodScan {
    int period = 0;
    long long first_disagreement = -1;
    long long last_disagreement = -1;
    bool ok = false;
};

struct AperiodicityReport {
    bool ok = true;
    int horizon = 0;
    int max_period = 0;
    std::vector<PeriodScan> periods;
};

// Scans tr(x)[0..horizon) and requires, for every period P <= max_period,
// a disagreement tr[i] != tr[i+P] with i at or beyond every suffix start
// below horizon/2.  Inputs must represent a positive number or carry a
// rightmost nonzero digit that is a multiple of p.
inline AperiodicityReport check_aperiodicity(const Configuration& x, int horizon, int max_period,
                                             const Rules& R) {
    const Params& pr = R.params();
    const bool finite_nonzero = x.finite() && !x.is_zero();
    // rightmost nonzero digit sits either at the core end or, for a pure
    // step configuration, in the left tail itself
    const Digit last = x.core().empty() ? x.left_tail() : x.core().back();
    const bool marker_shape = x.right_tail() == 0 && last != 0 && last % pr.p() == 0;
    if (!(finite_nonzero || marker_shape))
        throw PreconditionError(
            "check_aperiodicity: need a finite nonzero configuration or a trailing multiple of p");

    const DigitWord tr = trace_of(x, 0, horizon, R);
    AperiodicityReport rep;
    rep.horizon = horizon;
    rep.max_period = max_period;
    const long long need = horizon / 2 - 1; // last disagreement must reach every suffix start
    for (int P = 1; P <= max_period; ++P) {
        PeriodScan scan;
        scan.period = P;
        for (long long i = 0; i + P < horizon; ++i) {
            if (tr[static_cast<std::size_t>(i)] != tr[static_cast<std::size_t>(i + P)]) {
                if (scan.first_disagreement < 0) scan.first_disagreement = i;
                scan.last_disagreement = i;
            }
        }
        scan.ok = scan.last_disagreement >= need;
        if (!scan.ok) rep.ok = false;
        rep.periods.push_back(scan);
    }
    return rep;
}

// No quadruple a1 != a2 (mod q), b1 != b2 (mod p) can have all four words
// a_i w b_j in the language; scans every w in level n against level n+2.
inline CheckResult check_restr(int n, const LanguageTable& table) {
    const Params& pr = table.params();
    const int base = pr.base();
    const WordBitset& full = table.level(n + 2);
    bool overflow = false;
    const std::uint64_t hi_shift = detail::checked_pow_u64(base, n + 1, overflow);
    if (overflow) throw PreconditionError("check_restr: n too large");

    for (std::uint64_t w : table.words(n)) {
        for (Digit a1 = 0; a1 < base; ++a1)
            for (Digit a2 = a1 + 1; a2 < base; ++a2) {
                if (a1 % pr.q() == a2 % pr.q()) continue;
                for (Digit b1 = 0; b1 < base; ++b1) {
                    for (Digit b2 = b1 + 1; b2 < base; ++b2) {
                        if (b1 % pr.p() == b2 % pr.p()) continue;
                        const std::uint64_t w1 = w * static_cast<std::uint64_t>(base);
                        const bool all =
                            full.test(static_cast<std::uint64_t>(a1) * hi_shift + w1 +
                                      static_cast<std::uint64_t>(b1)) &&
                            full.test(static_cast<std::uint64_t>(a1) * hi_shift + w1 +
                                      static_cast<std::uint64_t>(b2)) &&
                            full.test(static_cast<std::uint64_t>(a2) * hi_shift + w1 +
                                      static_cast<std::uint64_t>(b1)) &&
                            full.test(static_cast<std::uint64_t>(a2) * hi_shift + w1 +
                                      static_cast<std::uint64_t>(b2));
                        if (all) {
                            std::ostringstream os;
                            os << "restr: a1=" << a1 << " a2=" << a2 << " b1=" << b1
                               << " b2=" << b2 << " w=" << word_to_string(unpack_word(w, n, base));
                            return CheckResult::fail(os.str());
                        }
                    }
                }
            }
    }
    return CheckResult::pass();
}

inline CheckResult check_restr(int n, const Rules& R, const Budget& budget, int threads = 0) {
    return check_restr(n, LanguageTable::build(n + 2, R, FracDirection::p_over_q, budget, threads));
}

} // namespace tracelab

#endif
