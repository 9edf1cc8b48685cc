#include <catch2/catch_amalgamated.hpp>

#include "tracelab/automaton.hpp"
#include "tracelab/numbers.hpp"
#include "tracelab/verify.hpp"

using namespace tracelab;

namespace {
const Params kP32(3, 2);
const Rules& rules32() {
    static const Rules R(kP32);
    return R;
}
} // namespace

TEST_CASE("two-digit rule table for (3,2)") {
    // full table of mul(a,b) for base 6, rows a = 0..5
    const int expected[6][6] = {
        {0, 0, 1, 1, 2, 2},
        {3, 3, 4, 4, 5, 5},
        {0, 0, 1, 1, 2, 2},
        {3, 3, 4, 4, 5, 5},
        {0, 0, 1, 1, 2, 2},
        {3, 3, 4, 4, 5, 5},
    };
    for (Digit a = 0; a < 6; ++a)
        for (Digit b = 0; b < 6; ++b)
            REQUIRE(rules32().mul(a, b, Direction::by_p) == expected[a][b]);

    REQUIRE(rules32().mul(1, 2, Direction::by_p) == 4);
    REQUIRE(rules32().mul(0, 0, Direction::by_p) == 0);
    REQUIRE(rules32().mul(5, 5, Direction::by_p) == 5);
}

TEST_CASE("three-digit rule table for (3,2)") {
    // fmul(a,c,b) for base 6; block for each center digit c, rows a = 0..5
    const int expected[6][6][6] = {
        // c = 0
        {{0, 0, 0, 0, 1, 1},
         {3, 3, 3, 3, 4, 4},
         {0, 0, 0, 0, 1, 1},
         {3, 3, 3, 3, 4, 4},
         {0, 0, 0, 0, 1, 1},
         {3, 3, 3, 3, 4, 4}},
        // c = 1
        {{1, 1, 2, 2, 2, 2},
         {4, 4, 5, 5, 5, 5},
         {1, 1, 2, 2, 2, 2},
         {4, 4, 5, 5, 5, 5},
         {1, 1, 2, 2, 2, 2},
         {4, 4, 5, 5, 5, 5}},
        // c = 2
        {{3, 3, 3, 3, 4, 4},
         {0, 0, 0, 0, 1, 1},
         {3, 3, 3, 3, 4, 4},
         {0, 0, 0, 0, 1, 1},
         {3, 3, 3, 3, 4, 4},
         {0, 0, 0, 0, 1, 1}},
        // c = 3
        {{4, 4, 5, 5, 5, 5},
         {1, 1, 2, 2, 2, 2},
         {4, 4, 5, 5, 5, 5},
         {1, 1, 2, 2, 2, 2},
         {4, 4, 5, 5, 5, 5},
         {1, 1, 2, 2, 2, 2}},
        // c = 4
        {{0, 0, 0, 0, 1, 1},
         {3, 3, 3, 3, 4, 4},
         {0, 0, 0, 0, 1, 1},
         {3, 3, 3, 3, 4, 4},
         {0, 0, 0, 0, 1, 1},
         {3, 3, 3, 3, 4, 4}},
        // c = 5
        {{1, 1, 2, 2, 2, 2},
         {4, 4, 5, 5, 5, 5},
         {1, 1, 2, 2, 2, 2},
         {4, 4, 5, 5, 5, 5},
         {1, 1, 2, 2, 2, 2},
         {4, 4, 5, 5, 5, 5}},
    };
    for (Digit c = 0; c < 6; ++c)
        for (Digit a = 0; a < 6; ++a)
            for (Digit b = 0; b < 6; ++b)
                REQUIRE(rules32().fmul(a, c, b, FracDirection::p_over_q) == expected[c][a][b]);

    REQUIRE(rules32().fmul(0, 0, 4, FracDirection::p_over_q) == 1);
    REQUIRE(rules32().fmul(5, 3, 1, FracDirection::p_over_q) == 1);
    REQUIRE(rules32().fmul(0, 0, 0, FracDirection::p_over_q) == 0);
}

TEST_CASE("configurations canonicalize and round-trip text") {
    const Configuration c(0, {0, 0, 1, 3, 0}, 0, -2);
    REQUIRE(c.offset() == 0);
    REQUIRE(c.core() == DigitWord{1, 3});
    REQUIRE(c.at(-1) == 0);
    REQUIRE(c.at(0) == 1);
    REQUIRE(c.at(1) == 3);
    REQUIRE(c.at(100) == 0);

    REQUIRE(Configuration(2, {2, 2}, 2, 5) == Configuration::constant(2));
    REQUIRE(Configuration().is_zero());

    const Configuration step(1, {}, 4, 2); // step from 1s to 4s at position 2
    REQUIRE(step.at(1) == 1);
    REQUIRE(step.at(2) == 4);
    REQUIRE(step != Configuration(1, {}, 4, 3));

    const Configuration e30 = Configuration::from_text("0|3.|0", kP32);
    REQUIRE(e30.core() == DigitWord{3});
    REQUIRE(e30.offset() == 0);
    REQUIRE(e30.to_text() == "0|3.|0");
    REQUIRE(Configuration::from_text(e30.to_text(), kP32) == e30);

    const Configuration frac = Configuration::from_text("0|.13|5", kP32);
    REQUIRE(frac.offset() == 1);
    REQUIRE(frac.core() == DigitWord{1, 3});
    REQUIRE(frac.right_tail() == 5);

    REQUIRE_THROWS_AS(Configuration::from_text("013", kP32), ParseError);
    REQUIRE_THROWS_AS(Configuration::from_text("0|13|0", kP32), ParseError);
    REQUIRE_THROWS_AS(Configuration::from_text("0|1.3.2|0", kP32), ParseError);
    REQUIRE_THROWS_AS(Configuration::from_text("0|7.|0", kP32), PreconditionError);
}

TEST_CASE("one automaton step is exact") {
    const Rules& R = rules32();

    SECTION("multiplying 1 by 3/2 gives 1.3") {
        const Configuration one = encode(1, kP32);
        const Configuration img = apply(one, R, AutomatonKind::fmul_p_over_q);
        REQUIRE(img.core() == DigitWord{1, 3});
        REQUIRE(img.offset() == 0);
        REQUIRE(decode(img, kP32) == Rational(3, 2));
    }

    SECTION("marker digit moves one position right") {
        const Configuration e30(0, {3}, 0, 0);
        const Configuration img = apply(e30, R, AutomatonKind::fmul_p_over_q);
        REQUIRE(img.core() == DigitWord{4, 3});
        REQUIRE(img.offset() == 0);
    }

    SECTION("zero is a fixed point") {
        REQUIRE(apply(Configuration(), R, AutomatonKind::fmul_p_over_q) == Configuration());
    }

    SECTION("constant tails map through the rule diagonal") {
        std::mt19937_64 rng(3);
        for (int i = 0; i < 50; ++i) {
            const Configuration x = random_configuration(rng, kP32, false);
            const Configuration y = apply(x, R, AutomatonKind::fmul_p_over_q);
            REQUIRE(y.left_tail() == R.fmul(x.left_tail(), x.left_tail(), x.left_tail(),
                                            FracDirection::p_over_q));
            REQUIRE(y.right_tail() == R.fmul(x.right_tail(), x.right_tail(), x.right_tail(),
                                             FracDirection::p_over_q));
            REQUIRE(static_cast<long long>(y.core().size()) <=
                    static_cast<long long>(x.core().size()) + 2);
        }
    }

    SECTION("finite values multiply by exactly p/q") {
        std::mt19937_64 rng(4);
        for (int i = 0; i < 200; ++i) {
            const Rational xi = random_terminating_rational(rng, kP32);
            const Configuration x = encode(xi, kP32);
            REQUIRE(decode(apply(x, R, AutomatonKind::fmul_p_over_q), kP32) ==
                    xi * Rational(3, 2));
        }
    }

    SECTION("shift multiplies by the base") {
        const Configuration x = encode(Rational(7, 36), kP32);
        REQUIRE(decode(apply(x, R, AutomatonKind::shift), kP32) == Rational(7, 6));
        REQUIRE(decode(apply(x, R, AutomatonKind::shift_inverse), kP32) == Rational(7, 216));
        REQUIRE(decode(apply(x, R, AutomatonKind::mul_p), kP32) == Rational(7, 12));
        REQUIRE(decode(apply(x, R, AutomatonKind::mul_q), kP32) == Rational(7, 18));
    }
}

TEST_CASE("inverse and composition identities") {
    std::mt19937_64 rng(5);
    for (auto [p, q] : {std::pair{3, 2}, {5, 2}, {5, 3}}) {
        const Rules R{Params(p, q)};
        REQUIRE(check_inverse_identity(R, rng, 200).ok);
        REQUIRE(check_composition(R, rng, 100).ok);
    }
}

TEST_CASE("local rule lemmas hold exhaustively") {
    for (auto [p, q] : {std::pair{3, 2}, {5, 2}, {4, 3}}) {
        const Rules R{Params(p, q)};
        REQUIRE(check_g1(R).ok);
        REQUIRE(check_g2(R).ok);
        REQUIRE(check_g3(R).ok);
        REQUIRE(check_f1(R).ok);
        REQUIRE(check_f2(R).ok);
        REQUIRE(check_f3(R).ok);
        REQUIRE(check_strongxz(R).ok);
        REQUIRE(check_flip(R).ok);
        REQUIRE(check_tail_fixed(R).ok);
    }
}

TEST_CASE("marker tails keep their shape under one step") {
    std::mt19937_64 rng(6);
    for (auto [p, q] : {std::pair{3, 2}, {5, 3}}) {
        const Rules R{Params(p, q)};
        REQUIRE(check_tail_lemma(R, rng, 20).ok);
    }
}

TEST_CASE("column reconstruction rule") {
    const DeltaRule delta = derive_delta(rules32());

    SECTION("frozen example for base 6") {
        REQUIRE(delta.lookup(2, 4, 3) == 3);
        REQUIRE(delta.lookup(0, 0, 0) == 0);
    }

    SECTION("derivation succeeds for every configured parameter pair") {
        for (auto [p, q] : {std::pair{3, 2}, {5, 2}, {5, 3}, {4, 3}, {7, 2}})
            REQUIRE_NOTHROW(derive_delta(Rules{Params(p, q)}));
    }

    SECTION("unrealizable triples are rejected, realizable ones covered") {
        const int base = 6;
        long long defined = 0;
        Digit bad_u = -1, bad_c = -1, bad_v = -1;
        for (Digit u = 0; u < base; ++u)
            for (Digit c = 0; c < base; ++c)
                for (Digit v = 0; v < base; ++v) {
                    if (delta.defined(u, c, v)) {
                        ++defined;
                    } else if (bad_u < 0) {
                        bad_u = u;
                        bad_c = c;
                        bad_v = v;
                    }
                }
        // base^3 windows cannot cover all triples injectively and uniquely
        // unless every x0 is recoverable; count what the sweep produced
        REQUIRE(defined >= base * base);
        if (bad_u >= 0) REQUIRE_THROWS_AS(delta.lookup(bad_u, bad_c, bad_v), UndefinedTriple);
    }

    SECTION("reconstruction agrees with direct simulation") {
        std::mt19937_64 rng(8);
        REQUIRE(check_delta_reconstruction(rules32(), rng, 300).ok);
        REQUIRE(check_delta_reconstruction(Rules{Params(5, 2)}, rng, 100).ok);
    }
}

TEST_CASE("trace widening") {
    const DeltaRule delta = derive_delta(rules32());

    SECTION("width 1 is the identity") {
        const DigitWord y{1, 2, 3, 4, 5};
        const WidenedTrace wt = widen_trace(y, delta, 1);
        REQUIRE(wt.t_begin == 0);
        REQUIRE(wt.tuples.size() == 5);
        for (std::size_t i = 0; i < y.size(); ++i) REQUIRE(wt.tuples[i] == DigitWord{y[i]});
    }

    SECTION("matches direct multi-column traces") {
        std::mt19937_64 rng(9);
        REQUIRE(check_widen_trace(rules32(), rng, 100).ok);
    }

    SECTION("rejects short inputs") {
        REQUIRE_THROWS_AS(widen_trace(DigitWord{1, 2}, delta, 2), PreconditionError);
        REQUIRE_THROWS_AS(widen_trace(DigitWord{1, 2, 3}, delta, 0), PreconditionError);
    }
}
