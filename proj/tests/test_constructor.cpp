#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "hitforge/capp.hpp"
#include "hitforge/constructor.hpp"
#include "hitforge/easy_witness.hpp"
#include "hitforge/errors.hpp"
#include "hitforge/nwgen.hpp"
#include "oracles.hpp"

using namespace hitforge;
using namespace hitforge::circuits;

namespace {

HittingSet set_of(std::vector<std::string> xs) {
    std::vector<BitString> elements;
    for (const auto& x : xs) elements.push_back(BitString::parse(x));
    return HittingSet(elements.front().size(), elements, Provenance::file);
}

// Returns 000 and 111 alternately, starting with 000.
RandomizedProducer alternating() {
    auto flip = std::make_shared<bool>(false);
    return {"alternating",
            [flip](std::size_t, RandomSource&) -> std::optional<BitString> {
                *flip = !*flip;
                return BitString::parse(*flip ? "000" : "111");
            },
            [](std::size_t) { return std::size_t{3}; }};
}

const BitString kW = BitString::parse("1011001110001111");

}  // namespace

TEST_CASE("first_member examples") {
    CHECK(first_member(set_of({"100", "011", "101"}), primes_property())->str() == "101");
    CHECK_FALSE(first_member(set_of({"100", "110"}), primes_property()).has_value());
    CHECK(first_member(set_of({"110", "010", "111"}), all_strings_property())->str() == "010");
}

TEST_CASE("first_member ignores the set's internal order") {
    auto a = set_of({"1101", "1011", "0111", "1111"});
    auto b = set_of({"1111", "0111", "1011", "1101"});
    CHECK(first_member(a, primes_property()) == first_member(b, primes_property()));
}

TEST_CASE("amplify examples") {
    RandomSource rng(1);
    CHECK(amplify(constant_producer(BitString::parse("0110")), 4, 7, rng)->str() == "0110");
    CHECK(amplify(alternating(), 3, 4, rng)->str() == "000");
    CHECK_FALSE(amplify(noisy_producer(kW, Rational(0)), 16, 5, rng).has_value());
    CHECK_THROWS_AS(amplify(constant_producer(kW), 16, 0, rng), InputShapeError);
}

TEST_CASE("amplify recovers a 0.55 plurality with 401 repetitions in at least 99% of 1000 trials") {
    auto producer = noisy_producer(kW, Rational(11, 20), true);
    int wins = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        RandomSource rng(seed);
        wins += amplify(producer, 16, 401, rng) == kW;
    }
    CHECK(wins >= 990);
}

TEST_CASE("producer failures and contract violations") {
    RandomizedProducer throws{"throws", [](std::size_t, RandomSource&) -> std::optional<BitString> {
                                  throw std::runtime_error("boom");
                              }, [](std::size_t) { return std::size_t{2}; }};
    RandomSource rng(2);
    CHECK_THROWS_AS(amplify(throws, 2, 3, rng), ProducerError);
    RandomizedProducer wrong{"wrong", [](std::size_t, RandomSource&) -> std::optional<BitString> {
                                 return BitString::parse("0");
                             }, [](std::size_t) { return std::size_t{2}; }};
    CHECK_THROWS_AS(amplify(wrong, 2, 3, rng), ProducerContractError);
}

TEST_CASE("purify examples") {
    RandomSource rng(3);
    auto constant = purify(constant_producer(BitString::parse("1011")), 4, rng);
    CHECK(constant.value->str() == "1011");
    CHECK(constant.trial_count == 16);
    CHECK(constant.winner_count == 16);
    CHECK_THROWS_AS(purify(constant_producer(kW), 0, rng), InputShapeError);
}

TEST_CASE("purify: 50/50 producer gives bottom, 2/3 producer gives w, each in at least 99% of 1000 runs") {
    RandomizedProducer coin{"coin", [](std::size_t, RandomSource& r) -> std::optional<BitString> {
                                return BitString::filled(4, r.bit());
                            }, [](std::size_t) { return std::size_t{4}; }};
    auto two_thirds = noisy_producer(kW, Rational(2, 3));
    int bottoms = 0, recovered = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        RandomSource a(seed), b(seed + 1'000'000);
        bottoms += !purify(coin, 16, a).value.has_value();
        auto out = purify(two_thirds, 16, b);
        recovered += out.value == kW;
        if (out.value) CHECK(out.winner_count * 5 > out.trial_count * 3);
    }
    CHECK(bottoms >= 990);
    CHECK(recovered >= 990);
}

TEST_CASE("purify never emits two distinct values across reruns") {
    auto producer = noisy_producer(kW, Rational(3, 5), true);
    std::set<BitString> values;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        RandomSource rng(seed);
        if (auto v = purify(producer, 16, rng).value) values.insert(*v);
    }
    CHECK(values.size() <= 1);
}

TEST_CASE("threaded trials aggregate to the same outcome") {
    auto producer = noisy_producer(kW, Rational(2, 3), true);
    Limits four = default_limits();
    four.threads = 4;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        RandomSource a(seed), b(seed);
        auto x = purify(producer, 8, a);
        auto y = purify(producer, 8, b, {}, four);
        CHECK(x.value == y.value);
        CHECK(x.winner_count == y.winner_count);
    }
}

TEST_CASE("pseudodeterministic_construct with a deterministic table is deterministic") {
    auto producer = hard_table_producer(4, 4);
    std::optional<BitString> first;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        RandomSource rng(seed);
        auto out = pseudodeterministic_construct(producer, primes_property(), 8, {4, 0, 2}, rng);
        REQUIRE(out.value.has_value());
        CHECK(primes_membership(*out.value));
        if (!first) first = out.value;
        CHECK(out.value == first);
    }
}

TEST_CASE("pseudodeterministic_construct: bottom and contract cases") {
    RandomSource rng(8);
    auto bottom = pseudodeterministic_construct(noisy_producer(kW, Rational(0)), primes_property(), 8, {4, 0, 2}, rng);
    CHECK_FALSE(bottom.value.has_value());
    auto empty = pseudodeterministic_construct(constant_producer(kW), empty_property(), 8, {4, 0, 2}, rng);
    CHECK_FALSE(empty.value.has_value());
    CHECK_FALSE(empty.diagnostic.empty());
    CHECK_THROWS_AS(pseudodeterministic_construct(constant_producer(BitString::parse("0110")), primes_property(), 8,
                                                  {4, 0, 2}, rng),
                    ProducerContractError);
}

TEST_CASE("purified noisy table producer gives one prime or bottom in at least 95% of 200 runs") {
    // With t = 64 runs the purifier misses its 0.6 threshold about one time
    // in eight, which yields bottom rather than a different prime.
    auto producer = purified(noisy_producer(kW, Rational(2, 3)));
    std::map<std::optional<BitString>, int> outcomes;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        RandomSource rng(seed);
        outcomes[pseudodeterministic_construct(producer, primes_property(), 8, {4, 0, 2}, rng).value]++;
    }
    int dominant = 0, primes = 0;
    for (const auto& [value, count] : outcomes) {
        if (!value) continue;
        ++primes;
        CHECK(primes_membership(*value));
        dominant = std::max(dominant, count);
    }
    CHECK(primes == 1);
    CHECK(dominant + outcomes[std::nullopt] >= 190);
    CHECK(dominant >= 150);
}

TEST_CASE("derandomize: constant target, exact marginals, empty property") {
    SampledHardnessConfig config;
    config.sample_length = 8;
    config.r = 4;
    config.t = 1;
    RandomSource rng(9);
    auto one = derandomize_via_sampled_hardness(all_strings_property(), BooleanCircuit::constant(2, true), config, rng);
    CHECK(one.estimate == Rational(1));

    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        RandomSource r(seed);
        auto out = derandomize_via_sampled_hardness(all_strings_property(), BooleanCircuit::projection(1, 0), config, r);
        REQUIRE(out.estimate.has_value());
        CHECK(*out.estimate == Rational(static_cast<std::int64_t>(out.sample->count_ones()), 8));
    }

    auto none = derandomize_via_sampled_hardness(empty_property(), BooleanCircuit::constant(2, true), config, rng);
    CHECK_FALSE(none.estimate.has_value());
    CHECK(none.draws == config.max_draws);
    CHECK_FALSE(none.diagnostic.empty());
}

TEST_CASE("derandomize with certification uses only hard samples") {
    SampledHardnessConfig config;
    config.sample_length = 8;
    config.hardness_threshold = 3;
    config.r = 6;
    config.t = 2;
    RandomSource rng(10);
    auto out = derandomize_via_sampled_hardness(all_strings_property(), BooleanCircuit::constant(3, false), config, rng);
    REQUIRE(out.sample.has_value());
    CHECK(circuit_complexity(TruthTable(3, *out.sample)) > 3);
    CHECK(out.estimate == Rational(0));

    SampledHardnessConfig impossible = config;
    impossible.hardness_threshold = 4;  // no 3-input function needs more than 4 gates
    auto never = derandomize_via_sampled_hardness(all_strings_property(), BooleanCircuit::constant(3, false), impossible, rng);
    CHECK_FALSE(never.estimate.has_value());
}

TEST_CASE("derandomize reproduces exact acceptance within 1/10 on a regression suite") {
    // Samples are balanced 4-input tables needing more than 4 gates, so every
    // generator bit has marginal exactly 1/2. The design (r=3, m=4, t=1) has
    // overlapping sets, so some targets do distinguish; the suite keeps the
    // candidates whose bias stays below 1/10 for every admissible table.
    DenseProperty balanced{"balanced", [](const BitString& x) { return x.count_ones() * 2 == x.size(); }, {}, {}};
    SampledHardnessConfig config;
    config.sample_length = 16;
    config.max_draws = 200;
    config.hardness_threshold = 4;
    config.r = 3;
    config.t = 1;
    const auto design = build_design(config.r, 4, config.t);

    const std::vector<std::pair<std::string, BooleanCircuit>> candidates = {
        {"and", BooleanCircuit(2, {{GateOp::AND, 0, 1}}, 4)},
        {"xor", BooleanCircuit(2, {{GateOp::XOR, 0, 1}}, 4)},
        {"or-and", BooleanCircuit(3, {{GateOp::OR, 0, 1}, {GateOp::AND, 5, 2}}, 6)},
        {"x1", BooleanCircuit::projection(1, 0)},
        {"x3", BooleanCircuit::projection(3, 2)},
    };
    auto estimate_for = [&](const TruthTable& h, const BooleanCircuit& c) {
        NWGenerator gen(h, design);
        const auto tt = truth_table(c);
        std::int64_t accepted = 0;
        for (std::uint64_t w = 0; w < (std::uint64_t{1} << gen.seed_length()); ++w) {
            std::size_t index = 0;
            for (std::size_t i = 0; i < c.arity(); ++i) index = (index << 1) | gen.output_bit(w, i);
            accepted += tt[index];
        }
        return Rational(accepted, std::int64_t{1} << gen.seed_length());
    };
    std::vector<Rational> worst(candidates.size(), Rational(0));
    for (std::uint64_t v = 0; v < 65536; ++v) {
        const BitString bits = BitString::from_uint(v, 16);
        if (!balanced.contains(bits)) continue;
        const TruthTable h(4, bits);
        if (!complexity_exceeds(h, 4)) continue;
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            const Rational diff = estimate_for(h, candidates[i].second) - exact_acceptance(candidates[i].second);
            worst[i] = std::max(worst[i], diff < 0 ? -diff : diff);
        }
    }
    std::vector<std::string> suite;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (worst[i] < Rational(1, 10)) suite.push_back(candidates[i].first);
    }
    CHECK(suite == std::vector<std::string>{"or-and", "x1", "x3"});

    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (worst[i] >= Rational(1, 10)) continue;
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            RandomSource rng(seed);
            auto out = derandomize_via_sampled_hardness(balanced, candidates[i].second, config, rng);
            REQUIRE(out.estimate.has_value());
            const Rational diff = *out.estimate - exact_acceptance(candidates[i].second);
            CHECK(diff < Rational(1, 10));
            CHECK(diff > Rational(-1, 10));
        }
    }
}

TEST_CASE("two_phase_construct examples") {
    RandomSource rng(12);
    auto fallback = hard_table_producer(4, 4);
    auto all = two_phase_construct(8, all_strings_property(), 2, fallback, {4, 0, 2}, rng);
    CHECK(all.phase == Phase::deterministic);
    CHECK(*all.value == build_easy_hitting_set(8, 2).elements().front());

    const auto table = oracle::sieve(255);
    const auto least = oracle::least_prime_with_bit_length(table, 8);
    CHECK(least == 131);
    auto prime = two_phase_construct(8, primes_property(), 4, fallback, {4, 0, 2}, rng);
    CHECK(prime.phase == Phase::deterministic);
    CHECK(prime.value->to_uint() == least);
    CHECK(prime.value->str() == "10000011");

    auto none = two_phase_construct(8, empty_property(), 4, fallback, {4, 0, 2}, rng);
    CHECK(none.phase == Phase::probabilistic);
    CHECK_FALSE(none.value.has_value());
    CHECK(none.diagnostics.size() == 2);
}

TEST_CASE("two_phase falls back to the generator when the easy set misses") {
    // At gate bound 0 the easy set at n=8 is 0^8, 1^8 and the three variable
    // tables, none of which is prime.
    RandomSource rng(13);
    auto out = two_phase_construct(8, primes_property(), 0, hard_table_producer(4, 4), {4, 0, 2}, rng);
    CHECK(out.phase == Phase::probabilistic);
    REQUIRE(out.value.has_value());
    CHECK(primes_membership(*out.value));
    CHECK(out.nw_set_size > 0);
}

TEST_CASE("producer specifications") {
    RandomSource rng(14);
    CHECK(parse_producer("constant:0101").run(4, rng)->str() == "0101");
    CHECK(parse_producer("hard-tt:3:3").run(1, rng)->size() == 8);
    CHECK(circuit_complexity(TruthTable(3, *parse_producer("hard-tt:3:3").run(1, rng))) == 4);
    CHECK(parse_producer("purified:0:constant:11").run(3, rng)->str() == "11");
    CHECK(parse_producer("noisy:11:1").run(3, rng)->str() == "11");
    CHECK_FALSE(parse_producer("noisy:11:0").run(3, rng).has_value());
    CHECK(parse_producer("sampled-tt:2:0:50").run(1, rng).has_value());
    CHECK_THROWS_AS(parse_producer("what:1"), FormatError);
    CHECK_THROWS_AS(parse_producer("noisy:11"), FormatError);
    CHECK_THROWS_AS(parse_producer("hard-tt:3:4"), ResourceLimitError);
}
