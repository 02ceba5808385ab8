#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <map>

#include "hitforge/easy_witness.hpp"
#include "hitforge/errors.hpp"
#include "hitforge/sampler.hpp"

using namespace hitforge;

namespace {

std::string data_path(const std::string& name) {
    const char* dir = std::getenv("HITFORGE_TEST_DATA");
    return std::string(dir ? dir : "tests/data") + "/" + name;
}

SamplableEnsemble never_fail_ensemble() {
    return {"never-fail", [](std::size_t n, const BitString& w) { return std::optional(w.prefix(n)); }, 2, 0};
}

SamplableEnsemble always_fail_ensemble() {
    return {"always-fail", [](std::size_t, const BitString&) { return std::optional<BitString>(); }, 2, 1};
}

// Succeeds iff the first ceil(log2 n) random bits are zero, so at a power
// of two n it fails with probability 1 - 1/n.
SamplableEnsemble rare_ensemble() {
    return {"rare",
            [](std::size_t n, const BitString& w) -> std::optional<BitString> {
                std::size_t b = 0;
                while ((std::size_t{1} << b) < n) ++b;
                for (std::size_t i = 0; i < b; ++i) {
                    if (w[i]) return std::nullopt;
                }
                return w.prefix(n);
            },
            2, 1};
}

CanonicalSampleConfig default_config() {
    return {2, hard_table_producer(4, 4), {4, 0, 2}};
}

CanonicalSampleConfig noisy_config() {
    return {0, parse_producer("purified:400:noisy:0110100110010110:2/3"), {4, 0, 2}};
}

}  // namespace

TEST_CASE("length intervals") {
    CHECK(interval_of(1, 2).first == 1);
    CHECK(interval_of(1, 2).last == 3);
    CHECK(interval_of(3, 2).first == 9);
    CHECK(interval_of(3, 2).last == 15);
    CHECK(interval_of(2, 1).first == 2);
    CHECK(interval_of(2, 1).last == 2);
    CHECK_THROWS_AS(interval_of(0, 2), InputShapeError);
    CHECK_THROWS_AS(interval_index(0, 2), InputShapeError);
}

TEST_CASE("intervals S_1..S_10 partition [1, 120] for c = 2") {
    std::size_t next = 1;
    for (std::size_t i = 1; i <= 10; ++i) {
        const auto s = interval_of(i, 2);
        CHECK(s.first == next);
        CHECK(s.last >= s.first);
        for (std::size_t m = s.first; m <= s.last; ++m) CHECK(interval_index(m, 2) == i);
        next = s.last + 1;
    }
    CHECK(next == 121);
}

TEST_CASE("interval_index agrees with interval_of for c = 1..3") {
    for (std::size_t c = 1; c <= 3; ++c) {
        for (std::size_t m = 1; m <= 500; ++m) {
            const std::size_t i = interval_index(m, c);
            CHECK(interval_of(i, c).contains(m));
        }
    }
}

TEST_CASE("sample checks the random string length") {
    const auto e = first_bit_ensemble();
    CHECK(e.randomness_length(3) == 9);
    CHECK_THROWS_AS(e.sample(3, BitString::parse("1010")), InputShapeError);
    CHECK(e.sample(2, BitString::parse("1001")) == BitString::parse("01"));
    CHECK_FALSE(e.sample(2, BitString::parse("0001")).has_value());
}

TEST_CASE("ensemble property of a sampler that never fails is every string") {
    const auto q = ensemble_property(never_fail_ensemble());
    CHECK(q.name == "ensemble:never-fail");
    for (std::size_t m = 1; m <= 12; ++m) CHECK(density(q, m) == Rational(1));
}

TEST_CASE("ensemble property of first-bit has density 1/2") {
    const auto q = ensemble_property(first_bit_ensemble());
    for (std::size_t m = 1; m <= 14; ++m) CHECK(density(q, m) == Rational(1, 2));
    CHECK_THROWS_AS(q.contains(BitString()), InputShapeError);
}

TEST_CASE("ensemble property of sparse-prefix has density 1/4 past S_1") {
    const auto q = ensemble_property(sparse_prefix_ensemble());
    // Lengths 1..3 read a single random bit.
    for (std::size_t m = 1; m <= 3; ++m) CHECK(density(q, m) == Rational(1, 2));
    for (std::size_t m = 4; m <= 14; ++m) CHECK(density(q, m) == Rational(1, 4));
}

TEST_CASE("ensemble property of a sampler failing with probability 1 - 1/n") {
    const auto q = ensemble_property(rare_ensemble());
    for (std::size_t m : {4, 8}) CHECK(density(q, m) == Rational(1, 2));        // i = 2
    for (std::size_t m : {16, 20, 24}) CHECK(density(q, m) == Rational(1, 4));  // i = 4
}

TEST_CASE("canonical sample of first-bit takes the deterministic path") {
    const auto e = first_bit_ensemble();
    for (std::size_t n = 1; n <= 4; ++n) {
        // Independent expectation: the least string of H^easy at length n^2
        // that starts with 1, read by the sampler.
        const auto h = build_easy_hitting_set(n * n, 2);
        std::optional<BitString> least;
        for (const auto& x : h.elements()) {
            if (x[0]) {
                least = x;
                break;
            }
        }
        REQUIRE(least);
        const auto expected = e.sample(n, left_n(*least, n * n));
        for (std::uint64_t seed : {1, 2, 99}) {
            RandomSource rng(seed);
            const auto out = canonical_sample(e, n, default_config(), rng);
            REQUIRE(out.sample);
            CHECK(*out.sample == *expected);
            CHECK(out.chosen_length == n * n);
            REQUIRE(out.attempts.size() == 1);
            CHECK(out.attempts[0].phase == Phase::deterministic);
        }
    }
}

TEST_CASE("canonical sample of a sampler that always fails is bottom") {
    RandomSource rng(5);
    const auto out = canonical_sample(always_fail_ensemble(), 2, default_config(), rng);
    CHECK_FALSE(out.sample);
    CHECK_FALSE(out.chosen_length);
    CHECK(out.attempts.size() == interval_of(2, 2).last - interval_of(2, 2).first + 1);
    for (const auto& a : out.attempts) CHECK_FALSE(a.value);
}

TEST_CASE("canonical sample through the randomized phase is dominated by one value") {
    const auto e = sparse_prefix_ensemble();
    for (std::size_t n = 2; n <= 3; ++n) {
        std::map<std::optional<BitString>, int> outcomes;
        for (std::uint64_t seed = 0; seed < 200; ++seed) {
            RandomSource rng(seed);
            outcomes[canonical_sample(e, n, noisy_config(), rng).sample]++;
        }
        int dominant = 0;
        for (const auto& [value, count] : outcomes) {
            if (value) CHECK(in_sampler_range(e, n, *value));
            if (value && count > dominant) dominant = count;
        }
        CHECK(dominant >= 190);
    }
}

TEST_CASE("randomized phase picks the same sample on a rerun with the same seed") {
    const auto e = sparse_prefix_ensemble();
    RandomSource a(17), b(17);
    const auto x = canonical_sample(e, 2, noisy_config(), a);
    const auto y = canonical_sample(e, 2, noisy_config(), b);
    CHECK(x.sample == y.sample);
    CHECK(x.chosen_length == y.chosen_length);
    REQUIRE(x.sample);
    CHECK(x.attempts.back().phase == Phase::probabilistic);
}

TEST_CASE("in_sampler_range") {
    const auto e = sparse_prefix_ensemble();
    // At n = 2 every sample is reachable: 10 then free bits.
    for (std::string s : {"00", "01", "10", "11"}) CHECK(in_sampler_range(e, 2, BitString::parse(s)));
    CHECK_FALSE(in_sampler_range(always_fail_ensemble(), 2, BitString::parse("00")));
    Limits small = default_limits();
    small.max_enum_arity = 8;
    CHECK_THROWS_AS(in_sampler_range(e, 3, BitString::parse("000"), small), ResourceLimitError);
}

TEST_CASE("plug-in sampler matches the built-in first-bit sampler") {
    const auto plug = plugin_ensemble(data_path("tail_sampler.sh"), 2, 1);
    const auto builtin = first_bit_ensemble();
    RandomSource rng(3);
    for (int i = 0; i < 20; ++i) {
        const auto w = rng.bits(9);
        CHECK(plug.sample(3, w) == builtin.sample(3, w));
    }
    RandomSource a(8), b(8);
    CHECK(canonical_sample(plug, 2, default_config(), a).sample ==
          canonical_sample(builtin, 2, default_config(), b).sample);
}

TEST_CASE("plug-in sampler failures surface as PropertyError") {
    const auto bad = plugin_ensemble(data_path("exit_three.sh"), 2, 1);
    CHECK_THROWS_AS(bad.sample(2, BitString::parse("1000")), PropertyError);
    const auto missing = plugin_ensemble(data_path("no_such_program"), 2, 1);
    CHECK_THROWS_AS(missing.sample(2, BitString::parse("1000")), PropertyError);
}

TEST_CASE("resolve_ensemble") {
    CHECK(resolve_ensemble("first-bit").name == "first-bit");
    CHECK(resolve_ensemble("sparse-prefix").k == 2);
    CHECK(resolve_ensemble("/bin/true", 3, 2).c == 3);
}
