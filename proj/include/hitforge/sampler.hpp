#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hitforge/bits.hpp"
#include "hitforge/constructor.hpp"
#include "hitforge/limits.hpp"
#include "hitforge/properties.hpp"
#include "hitforge/random.hpp"

namespace hitforge {

/// A sampler g(n, w) reading a random string w of length n^c and returning
/// a sample or nothing (the failure symbol). k bounds the failure rate:
/// g succeeds with probability at least 1/n^k.
struct SamplableEnsemble {
    std::string name;
    std::function<std::optional<BitString>(std::size_t n, const BitString& w)> g;
    std::size_t c = 1;
    std::size_t k = 1;

    /// n^c; throws ResourceLimitError when it does not fit in 64 bits.
    std::size_t randomness_length(std::size_t n) const;
    /// Checks |w| = n^c and wraps sampler failures as PropertyError.
    std::optional<BitString> sample(std::size_t n, const BitString& w) const;
};

/// Inclusive integer interval [first, last].
struct LengthInterval {
    std::size_t first = 0;
    std::size_t last = 0;
    bool contains(std::size_t m) const noexcept { return first <= m && m <= last; }
};

/// S_i = [i^c, (i+1)^c - 1]; i, c >= 1.
LengthInterval interval_of(std::size_t i, std::size_t c);

/// The unique i >= 1 with m in S_i; m >= 1.
std::size_t interval_index(std::size_t m, std::size_t c);

/// Q = { x : g(i, first i^c bits of x) is not the failure symbol }, where
/// |x| lies in S_i.
DenseProperty ensemble_property(const SamplableEnsemble& e);

struct CanonicalSampleConfig {
    /// Gate bound of the easy hitting set tried at every length.
    std::size_t easy_gates = 2;
    /// Truth-table producer for the second phase.
    RandomizedProducer fallback;
    NwParams nw;
};

struct LengthAttempt {
    std::size_t m = 0;
    std::optional<Phase> phase;
    std::optional<BitString> value;
    std::string diagnostic;
};

struct CanonicalSampleOutcome {
    std::optional<BitString> sample;
    /// The length whose constructed string was used.
    std::optional<std::size_t> chosen_length;
    std::vector<LengthAttempt> attempts;
};

/// Runs two_phase_construct on ensemble_property(E) at every m in S_n in
/// increasing order; at the first success m', returns g(n, first n^c bits of
/// the constructed string).
CanonicalSampleOutcome canonical_sample(const SamplableEnsemble& e, std::size_t n, const CanonicalSampleConfig& config,
                                        RandomSource& rng, const Limits& limits = default_limits());

/// Exhaustively decides whether `sample` is g(n, w) for some w; requires
/// n^c <= limits.max_enum_arity.
bool in_sampler_range(const SamplableEnsemble& e, std::size_t n, const BitString& sample,
                      const Limits& limits = default_limits());

/// Fails exactly when the random string starts with 0; otherwise the
/// sample is the last n bits of the random string. c = 2, k = 1.
SamplableEnsemble first_bit_ensemble();

/// Succeeds exactly when the random string starts with 10 (or is the single
/// bit 1); the sample's bit i is the XOR of the random bits at positions
/// congruent to i modulo n. c = 2, k = 2.
SamplableEnsemble sparse_prefix_ensemble();

/// A sampler run as `<program> sample <n>` with w on standard input,
/// printing the sample or `*` for failure.
SamplableEnsemble plugin_ensemble(const std::string& program, std::size_t c, std::size_t k);

/// first-bit, sparse-prefix, or a plug-in program.
SamplableEnsemble resolve_ensemble(const std::string& name, std::size_t c = 2, std::size_t k = 1);

}  // namespace hitforge
