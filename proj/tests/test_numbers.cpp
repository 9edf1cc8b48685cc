#include <catch2/catch_amalgamated.hpp>

#include "tracelab/numbers.hpp"
#include "tracelab/verify.hpp"

using namespace tracelab;

namespace {
const Params kP32(3, 2);
}

TEST_CASE("encode produces the terminating expansion") {
    REQUIRE(encode(1, kP32) == Configuration(0, {1}, 0, 0));
    REQUIRE(encode(Rational(1, 2), kP32) == Configuration(0, {3}, 0, 1)); // 0.3 in base 6
    REQUIRE(encode(Rational(9, 4), kP32) == Configuration(0, {2, 1, 3}, 0, 0)); // 2.13
    REQUIRE(encode(0, kP32).is_zero());
    REQUIRE(encode(36, kP32) == Configuration(0, {1}, 0, -2));

    REQUIRE_THROWS_AS(encode(Rational(1, 7), kP32), NonTerminating);
    REQUIRE_THROWS_AS(encode(Rational(5, 14), kP32), NonTerminating);
    REQUIRE_THROWS_AS(encode(Rational(-1, 2), kP32), PreconditionError);

    // but 1/7 terminates when 7 divides the base
    REQUIRE_NOTHROW(encode(Rational(1, 7), Params(7, 2)));
}

TEST_CASE("decode is the exact positional sum") {
    REQUIRE(decode(Configuration(), kP32) == 0);
    REQUIRE(decode(Configuration(0, {2, 1, 3}, 0, 0), kP32) == Rational(9, 4));

    // 0.1555... in base 6 equals 1/3
    REQUIRE(decode(Configuration(0, {1}, 5, 1), kP32) == Rational(1, 3));
    // the two representatives of 1/2 decode equally
    REQUIRE(decode(Configuration(0, {2}, 5, 1), kP32) == decode(Configuration(0, {3}, 0, 1), kP32));

    REQUIRE_THROWS_AS(decode(Configuration(1, {2}, 0, 0), kP32), LeftTailNonzero);
}

TEST_CASE("decode agrees with an independent common-denominator sum") {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 300; ++i) {
        Configuration x = random_configuration(rng, kP32, true);
        // oracle: collect digits over [offset, end) as one big integer over
        // a single power-of-base denominator
        BigInt num = 0;
        const long long lo = x.offset();
        const long long hi = x.core_end();
        for (long long pos = lo; pos < hi; ++pos) num = num * 6 + x.at(pos);
        Rational expected(num, 1);
        expected *= rational_pow(Rational(6), -(hi - 1));
        REQUIRE(decode(x, kP32) == expected);
    }
}

TEST_CASE("decode-encode round trip on a grid") {
    REQUIRE(check_encode_decode_grid(kP32).ok);
    REQUIRE(check_encode_decode_grid(Params(5, 3)).ok);
}

TEST_CASE("trajectories follow exact rational multiplication") {
    const Rules R(kP32);

    SECTION("powers of 3/2 from 1") {
        const TrajectoryReport rep = verify_multiplication(1, R, 4);
        REQUIRE(rep.ok);
        REQUIRE(rep.expected ==
                std::vector<Rational>{Rational(3, 2), Rational(9, 4), Rational(27, 8),
                                      Rational(81, 16)});
        REQUIRE(rep.decoded == rep.expected);
    }

    SECTION("zero stays zero") {
        const TrajectoryReport rep = verify_multiplication(0, R, 5);
        REQUIRE(rep.ok);
        for (const Rational& v : rep.decoded) REQUIRE(v == 0);
    }

    SECTION("5/36 trajectory") {
        const TrajectoryReport rep = verify_multiplication(Rational(5, 36), R, 3);
        REQUIRE(rep.ok);
        REQUIRE(rep.decoded ==
                std::vector<Rational>{Rational(5, 24), Rational(5, 16), Rational(15, 32)});
    }

    SECTION("random values, ten steps, several parameter pairs") {
        std::mt19937_64 rng(22);
        for (auto [p, q] : {std::pair{3, 2}, {5, 2}, {4, 3}})
            REQUIRE(check_multiplication_agreement(Rules{Params(p, q)}, rng, 200, 10).ok);
    }
}

TEST_CASE("images of finite configurations stay finite") {
    std::mt19937_64 rng(23);
    REQUIRE(check_finiteness_preservation(Rules{kP32}, rng, 100).ok);
}
