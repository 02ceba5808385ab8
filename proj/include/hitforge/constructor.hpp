#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hitforge/bits.hpp"
#include "hitforge/circuits.hpp"
#include "hitforge/hitting_set.hpp"
#include "hitforge/limits.hpp"
#include "hitforge/properties.hpp"
#include "hitforge/random.hpp"
#include "hitforge/rational.hpp"

namespace hitforge {

/// A randomized algorithm that, given a length n and a randomness source,
/// returns a string of length output_length(n) or nothing (bottom).
struct RandomizedProducer {
    std::string name;
    std::function<std::optional<BitString>(std::size_t n, RandomSource& rng)> procedure;
    std::function<std::size_t(std::size_t n)> output_length;

    /// Runs the procedure. Exceptions become ProducerError; a string of the
    /// wrong length is a ProducerContractError.
    std::optional<BitString> run(std::size_t n, RandomSource& rng) const;
};

/// Always returns `value`, whatever n is.
RandomizedProducer constant_producer(BitString value);

/// Returns `value` with probability p. Otherwise returns bottom, or a
/// uniformly random string of the same length when `uniform_noise` is set.
RandomizedProducer noisy_producer(BitString value, Rational p, bool uniform_noise = false);

/// The lexicographically first truth table of the given arity whose
/// circuit complexity exceeds `threshold` gates. Deterministic.
RandomizedProducer hard_table_producer(std::size_t arity, std::size_t threshold,
                                       const Limits& limits = default_limits());

/// Draws up to `attempts` uniform truth tables and returns the first whose
/// complexity exceeds `threshold`, or bottom.
RandomizedProducer sampled_hard_table_producer(std::size_t arity, std::size_t threshold, std::size_t attempts,
                                               const Limits& limits = default_limits());

/// Producers by specification:
///   constant:<bits>
///   noisy:<bits>:<p>           <bits> with probability p, else bottom
///   noisy-uniform:<bits>:<p>   <bits> with probability p, else uniform noise
///   hard-tt:<arity>:<threshold>
///   sampled-tt:<arity>:<threshold>:<attempts>
///   purified:<trials>:<spec>   purify with <trials> runs (0 for n^2)
RandomizedProducer parse_producer(const std::string& spec, const Limits& limits = default_limits());

/// Lexicographically smallest element of H in Q.
std::optional<BitString> first_member(const HittingSet& h, const DenseProperty& q);

/// Outcome of a vote over independent runs.
struct VoteOutcome {
    std::optional<BitString> value;
    std::size_t trial_count = 0;
    /// Occurrences of the most frequent non-bottom output.
    std::size_t winner_count = 0;
};

/// Runs the producer `trials` times, each with its own source split off
/// `rng` in trial order, on up to limits.threads workers.
std::vector<std::optional<BitString>> run_trials(const RandomizedProducer& producer, std::size_t n,
                                                 std::size_t trials, RandomSource& rng,
                                                 const Limits& limits = default_limits());

/// Plurality output of `reps` runs; bottom is never a candidate and ties go
/// to the lexicographically smaller string.
VoteOutcome amplify_votes(const RandomizedProducer& producer, std::size_t n, std::size_t reps, RandomSource& rng,
                          const Limits& limits = default_limits());
std::optional<BitString> amplify(const RandomizedProducer& producer, std::size_t n, std::size_t reps,
                                 RandomSource& rng, const Limits& limits = default_limits());

struct PurifierConfig {
    /// Number of runs; n^2 when unset.
    std::optional<std::size_t> trials;
    /// A value is output only if it appears in more than threshold * trials runs.
    Rational threshold{3, 5};
};

using PurifiedOutput = VoteOutcome;

PurifiedOutput purify(const RandomizedProducer& producer, std::size_t n, RandomSource& rng,
                      const PurifierConfig& config = {}, const Limits& limits = default_limits());

/// The producer that runs purify on `inner`.
RandomizedProducer purified(RandomizedProducer inner, PurifierConfig config = {},
                            const Limits& limits = default_limits());

/// Parameters of the generator built from a produced truth table.
struct NwParams {
    /// Arity of the hard truth table, equal to the design's set size.
    std::size_t arity = 4;
    /// Generator output length; the target length is used when 0.
    std::size_t r = 0;
    /// Maximum pairwise intersection of design sets.
    std::size_t t = 2;
};

struct ConstructOutcome {
    std::optional<BitString> value;
    std::optional<circuits::TruthTable> table;
    std::size_t hitting_set_size = 0;
    std::string diagnostic;
};

/// Produces a truth table, builds the NW hitting set from it and returns its
/// first member in Q. Bottom when the producer yields bottom or when no
/// element of the set is in Q.
ConstructOutcome pseudodeterministic_construct(const RandomizedProducer& tt_producer, const DenseProperty& q,
                                               std::size_t n, const NwParams& nw, RandomSource& rng,
                                               const Limits& limits = default_limits());

struct SampledHardnessConfig {
    /// Length of each sample before zero padding.
    std::size_t sample_length = 16;
    /// Maximum number of draws.
    std::size_t max_draws = 64;
    /// When set, a sample is used only if its complexity exceeds this many gates.
    std::optional<std::size_t> hardness_threshold;
    /// Generator output length; must be at least the target's arity.
    std::size_t r = 8;
    std::size_t t = 2;
};

struct DerandomizeOutcome {
    std::optional<Rational> estimate;
    std::optional<BitString> sample;
    std::size_t draws = 0;
    std::size_t seed_length = 0;
    std::string diagnostic;
};

/// Draws samples until one lies in Q (and passes certification when
/// requested), reads it zero-padded as a truth table h, and returns the
/// fraction of generator seeds on which `target` accepts the leftmost
/// arity(target) output bits of G_h.
DerandomizeOutcome derandomize_via_sampled_hardness(const DenseProperty& q, const circuits::BooleanCircuit& target,
                                                    const SampledHardnessConfig& config, RandomSource& rng,
                                                    const Limits& limits = default_limits());

enum class Phase { deterministic, probabilistic };
std::string_view phase_name(Phase p);

struct TwoPhaseOutcome {
    Phase phase = Phase::deterministic;
    std::optional<BitString> value;
    std::size_t easy_set_size = 0;
    std::size_t nw_set_size = 0;
    std::vector<std::string> diagnostics;
};

/// Phase 1 returns the first member of H^easy_n (at the given gate bound) in
/// Q. When there is none, phase 2 runs pseudodeterministic_construct with
/// `fallback` as the truth-table producer.
TwoPhaseOutcome two_phase_construct(std::size_t n, const DenseProperty& q, std::size_t easy_gates,
                                    const RandomizedProducer& fallback, const NwParams& nw, RandomSource& rng,
                                    const Limits& limits = default_limits());

}  // namespace hitforge
