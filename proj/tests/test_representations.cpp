#include <catch2/catch_amalgamated.hpp>

#include "tracelab/representations.hpp"
#include "tracelab/verify.hpp"

using namespace tracelab;

namespace {
const Params kP32(3, 2);
const Rules& rules32() {
    static const Rules R(kP32);
    return R;
}
} // namespace

TEST_CASE("companion digit formula") {
    REQUIRE(companion_digit(1, kP32) == -1);        // 2*floor(3/2) - 3*floor(1)
    REQUIRE(companion_digit(Rational(1, 2), kP32) == 0);
    REQUIRE(companion_digit(2, kP32) == 0);
    REQUIRE(companion_digit(Rational(3, 2), kP32) == 1);
    REQUIRE_THROWS_AS(companion_digit(0, kP32), PreconditionError);
    REQUIRE_THROWS_AS(companion_digit(Rational(-1, 2), kP32), PreconditionError);

    std::mt19937_64 rng(41);
    REQUIRE(check_psi_range(kP32, rng).ok);
    REQUIRE(check_psi_range(Params(5, 3), rng).ok);
}

TEST_CASE("companion windows") {
    REQUIRE(companion_window(1, 0, 2, kP32) == CompanionWord{-1, 1, 0});
    REQUIRE(companion_window(Rational(1, 2), 0, 2, kP32) == CompanionWord{0, 2, -1});
    REQUIRE(companion_window(1, 2, 2, kP32) == CompanionWord{0}); // single index
    REQUIRE_THROWS_AS(companion_window(1, 3, 1, kP32), PreconditionError);

    // negative indices run through exact negative powers
    const CompanionWord w = companion_window(Rational(9, 4), -2, 0, kP32);
    REQUIRE(w.size() == 3);
    REQUIRE(w[0] == companion_digit(Rational(9, 4) * Rational(4, 9), kP32));
    REQUIRE(w[2] == companion_digit(Rational(9, 4), kP32));
}

TEST_CASE("companion digits from the trace") {
    SECTION("first digit of the trace of 1") {
        // trace 1,1,2,...: 2*md_3(1) - 3*md_2(1) = -1
        const CompanionWord w = companion_from_trace(encode(1, kP32), 0, 0, rules32());
        REQUIRE(w == CompanionWord{-1});
    }

    SECTION("zero configuration gives zero digits") {
        const DigitWord tr(12, 0);
        const CompanionWord w = companion_from_word(tr, kP32);
        for (CompanionDigit d : w) REQUIRE(d == 0);
    }

    SECTION("trace route equals value route") {
        std::mt19937_64 rng(42);
        REQUIRE(check_repchange(rules32(), rng, 60, 30).ok);
        REQUIRE(check_repchange(Rules{Params(5, 2)}, rng, 40, 30).ok);
        const Configuration half = encode(Rational(1, 2), kP32);
        REQUIRE(companion_from_trace(half, 0, 2, rules32()) ==
                companion_window(Rational(1, 2), 0, 2, kP32));
    }

    SECTION("sliding the trace slides the companion word") {
        std::mt19937_64 rng(43);
        REQUIRE(check_shift_equivariance(rules32(), rng, 40).ok);
    }
}

TEST_CASE("partial reconstruction from companion digits") {
    SECTION("frozen values for 1/2") {
        const CompfracResult res = compfrac_reconstruct(Rational(1, 2), 2, kP32);
        REQUIRE(res.digits == CompanionWord{0, 2, -1});
        REQUIRE(res.partial_sum == Rational(8, 27));
        REQUIRE(res.error == Rational(11, 54));
        REQUIRE(res.bound == Rational(8, 27));
        REQUIRE(res.within_bound);
    }

    SECTION("integers at N = 0 stay within q/p") {
        const CompfracResult res = compfrac_reconstruct(7, 0, kP32);
        REQUIRE(res.bound == Rational(2, 3));
        REQUIRE(res.within_bound);
    }

    SECTION("deep truncation of 1") {
        const CompfracResult res = compfrac_reconstruct(1, 10, kP32);
        REQUIRE(res.bound == rational_pow(Rational(2, 3), 11));
        REQUIRE(res.within_bound);
    }

    SECTION("bound holds for sampled values and depths") {
        std::mt19937_64 rng(44);
        REQUIRE(check_compfrac(kP32, rng, 25, 20).ok);
        REQUIRE(check_compfrac(Params(7, 2), rng, 15, 20).ok);
    }
}

TEST_CASE("companion words of values are not periodic at short horizons") {
    std::mt19937_64 rng(45);
    REQUIRE(check_companion_aperiodic(kP32, rng, 20).ok);
}

TEST_CASE("companion image plus boundary residues pins a word down") {
    REQUIRE(companion_injectivity_check(3, kP32).ok);
    REQUIRE(companion_injectivity_check(3, Params(5, 2)).ok);
    REQUIRE(companion_injectivity_check(2, Params(5, 3)).ok);
}
