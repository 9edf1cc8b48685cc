#include <catch2/catch_amalgamated.hpp>

#include "tracelab/trace_language.hpp"
#include "tracelab/verify.hpp"

using namespace tracelab;

namespace {
const Params kP32(3, 2);
const Rules& rules32() {
    static const Rules R(kP32);
    return R;
}
const Budget kBudget{1'000'000'000ULL};
} // namespace

TEST_CASE("column traces") {
    REQUIRE(trace_of(encode(1, kP32), 0, 5, rules32()) == DigitWord{1, 1, 2, 3, 5});
    REQUIRE(trace_of(Configuration(), 0, 6, rules32()) == DigitWord(6, 0));
    REQUIRE(trace_of(encode(Rational(1, 2), kP32), 0, 3, rules32()) == DigitWord{0, 0, 1});

    // oracle: the digit at the units column of F^t(x) is floor(value) mod 6
    std::mt19937_64 rng(31);
    for (int i = 0; i < 100; ++i) {
        const Rational xi = random_terminating_rational(rng, kP32);
        const DigitWord tr = trace_of(encode(xi, kP32), 0, 8, rules32());
        Rational v = xi;
        for (int t = 0; t < 8; ++t) {
            REQUIRE(tr[static_cast<std::size_t>(t)] ==
                    static_cast<Digit>(md(static_cast<long long>(rfloor(v) % 6), 6)));
            v *= Rational(3, 2);
        }
    }
}

TEST_CASE("window traces") {
    REQUIRE(trace_from_window(DigitWord{0, 0, 1, 0, 0}, rules32()) == DigitWord{1, 1, 2});
    REQUIRE(trace_from_window(DigitWord(7, 0), rules32()) == DigitWord(4, 0));
    REQUIRE(trace_from_window(DigitWord{4}, rules32()) == DigitWord{4});
    REQUIRE_THROWS_AS(trace_from_window(DigitWord{1, 2}, rules32()), PreconditionError);
    REQUIRE_THROWS_AS(trace_from_window(DigitWord{}, rules32()), PreconditionError);

    std::mt19937_64 rng(32);
    REQUIRE(check_trace_window_agreement(rules32(), rng, 2000).ok);
}

TEST_CASE("language levels by exhaustive sweep") {
    SECTION("level 1 is the whole alphabet") {
        const WordBitset l1 = sweep_language(1, rules32(), FracDirection::p_over_q, kBudget, 1);
        REQUIRE(l1.count() == 6);
        const WordBitset l1_52 =
            sweep_language(1, Rules{Params(5, 2)}, FracDirection::p_over_q, kBudget, 1);
        REQUIRE(l1_52.count() == 10);
    }

    SECTION("first counts for base 6") {
        const LanguageTable t =
            LanguageTable::build(4, rules32(), FracDirection::p_over_q, kBudget, 2);
        REQUIRE(t.count(1) == 6);
        REQUIRE(t.count(2) == 24);
        REQUIRE(t.count(3) == 84);
        REQUIRE(t.count(4) == 276);
    }

    SECTION("budget is enforced before sweeping") {
        REQUIRE_THROWS_AS(sweep_language(6, rules32(), FracDirection::p_over_q, Budget{1000}, 1),
                          BudgetExceeded);
    }

    SECTION("thread counts do not change the result") {
        const WordBitset a = sweep_language(3, rules32(), FracDirection::p_over_q, kBudget, 1);
        const WordBitset b = sweep_language(3, rules32(), FracDirection::p_over_q, kBudget, 2);
        REQUIRE(a.to_vector() == b.to_vector());
    }
}

TEST_CASE("classification into narrow and wide words") {
    const LanguageLevel l1 = enumerate_language(1, rules32(), kBudget, 2);
    REQUIRE(l1.words.size() == 6);
    REQUIRE(l1.wide == std::vector<std::uint64_t>{1, 4});
    REQUIRE(l1.narrow == std::vector<std::uint64_t>{0, 2, 3, 5});

    const LanguageTable t = LanguageTable::build(4, rules32(), FracDirection::p_over_q, kBudget, 2);
    for (int n = 1; n <= 3; ++n) {
        const LanguageLevel lvl = classify_level(t, n);
        REQUIRE(lvl.wide.size() ==
                static_cast<std::size_t>(ipow(2, static_cast<unsigned>(n))));
        REQUIRE(lvl.narrow.size() + lvl.wide.size() == lvl.words.size());
        REQUIRE(construct_wide_words(n, rules32()) == lvl.wide);
    }
}

TEST_CASE("predecessor sets") {
    const LanguageTable t = LanguageTable::build(2, rules32(), FracDirection::p_over_q, kBudget, 1);
    const WordBitset& l2 = t.level(2);

    const PredecessorSet pre1 = predecessors(1, 1, l2, kP32);
    REQUIRE(pre1.members.size() == 6);
    REQUIRE(pre1.class_residues.size() == 2);

    const PredecessorSet pre0 = predecessors(0, 1, l2, kP32);
    REQUIRE(pre0.members.size() == 3);
    REQUIRE(pre0.class_residues.size() == 1);

    const PredecessorSet pre4 = predecessors(4, 1, l2, kP32);
    REQUIRE(pre4.members.size() == 6);

    REQUIRE(check_letter_contexts(t).ok);
}

TEST_CASE("predecessor shape across levels") {
    const LanguageTable t = LanguageTable::build(4, rules32(), FracDirection::p_over_q, kBudget, 2);
    REQUIRE(check_predecessor_shape(t, 3).ok);
    REQUIRE(check_count_recurrence(t, 3).ok);
}

TEST_CASE("last-letter closure in both directions") {
    const LanguageTable pq = LanguageTable::build(4, rules32(), FracDirection::p_over_q, kBudget, 2);
    REQUIRE(check_flipword(pq, 3, 3).ok);
    const LanguageTable qp = LanguageTable::build(4, rules32(), FracDirection::q_over_p, kBudget, 2);
    REQUIRE(check_flipword(qp, 3, 2).ok);
}

TEST_CASE("no forbidden predecessor-successor quadruples") {
    const LanguageTable t = LanguageTable::build(4, rules32(), FracDirection::p_over_q, kBudget, 2);
    REQUIRE(check_restr(1, t).ok);
    REQUIRE(check_restr(2, t).ok);
    REQUIRE(check_restr(1, Rules{Params(5, 3)}, kBudget, 2).ok);
}

TEST_CASE("finite-horizon aperiodicity") {
    const Rules& R = rules32();

    SECTION("trace of 1 has no short period") {
        const AperiodicityReport rep = check_aperiodicity(encode(1, kP32), 200, 20, R);
        REQUIRE(rep.ok);
        for (const PeriodScan& s : rep.periods) {
            REQUIRE(s.first_disagreement >= 0);
            REQUIRE(s.last_disagreement >= 99);
        }
    }

    SECTION("marker configurations with and without junk on the left") {
        REQUIRE(check_aperiodicity(Configuration(0, {3}, 0, 0), 200, 20, R).ok);
        std::mt19937_64 rng(33);
        for (int i = 0; i < 5; ++i) {
            const Configuration left = random_configuration(rng, kP32, false);
            const Configuration x = marker_config(left, 3, 0, 0);
            REQUIRE(check_aperiodicity(x, 200, 20, R).ok);
        }
    }

    SECTION("inputs that are trivially periodic are rejected") {
        REQUIRE_THROWS_AS(check_aperiodicity(Configuration(), 100, 10, R), PreconditionError);
        // nonzero right tail is not a valid marker shape either
        REQUIRE_THROWS_AS(check_aperiodicity(Configuration(0, {3}, 5, 0), 100, 10, R),
                          PreconditionError);
    }
}
