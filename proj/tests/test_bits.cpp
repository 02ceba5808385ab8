#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hitforge/bits.hpp"
#include "hitforge/errors.hpp"
#include "hitforge/random.hpp"
#include "hitforge/rational.hpp"

using namespace hitforge;

TEST_CASE("parse and render") {
    CHECK(BitString::parse("01101").str() == "01101");
    CHECK(BitString::parse("").empty());
    CHECK_THROWS_AS(BitString::parse("012"), FormatError);
    CHECK(BitString::from_uint(5, 4).str() == "0101");
    CHECK(BitString::parse("0101").to_uint() == 5);
}

TEST_CASE("left_n") {
    const auto u = BitString::parse("01101");
    CHECK(left_n(u, 3).str() == "011");
    CHECK(left_n(u, 5).str() == "01101");
    CHECK(left_n(u, 0).str().empty());
    CHECK_THROWS_AS(left_n(u, 6), InputShapeError);
}

TEST_CASE("ordering is lexicographic") {
    CHECK(BitString::parse("011") < BitString::parse("100"));
    CHECK(BitString::parse("01") < BitString::parse("010"));
}

TEST_CASE("rationals render as p/q") {
    CHECK(to_string(Rational(1)) == "1/1");
    CHECK(to_string(Rational(2, 8)) == "1/4");
    CHECK(parse_rational("3/5") == Rational(3, 5));
    CHECK(parse_rational("0.6") == Rational(3, 5));
    CHECK(parse_rational("7") == Rational(7));
    CHECK_THROWS_AS(parse_rational("1/0"), FormatError);
    CHECK_THROWS_AS(parse_rational("x"), FormatError);
}

TEST_CASE("random source is reproducible and split streams differ") {
    RandomSource a(7), b(7);
    CHECK(a.bits(64) == b.bits(64));
    RandomSource c(7);
    auto child = c.split();
    CHECK(child.bits(64) != RandomSource(7).bits(64));
}

TEST_CASE("bernoulli is exact at the extremes and near p otherwise") {
    RandomSource rng(11);
    int hits = 0;
    for (int i = 0; i < 30000; ++i) hits += rng.bernoulli(Rational(2, 3));
    CHECK(hits > 19500);
    CHECK(hits < 20500);
    for (int i = 0; i < 100; ++i) {
        CHECK_FALSE(rng.bernoulli(Rational(0)));
        CHECK(rng.bernoulli(Rational(1)));
    }
}
