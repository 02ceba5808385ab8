#pragma once

#include <cstddef>
#include <optional>

#include "hitforge/bits.hpp"
#include "hitforge/hitting_set.hpp"
#include "hitforge/limits.hpp"
#include "hitforge/properties.hpp"

namespace hitforge {

/// ceil(log2 n), but at least 1.
std::size_t easy_arity(std::size_t n);

/// left_n of the truth table of every function on easy_arity(n) inputs that
/// a circuit with at most `gates` gates computes; deduplicated and sorted.
/// Requires n <= 64 and a gate bound the function search can reach.
HittingSet build_easy_hitting_set(std::size_t n, std::size_t gates, const Limits& limits = default_limits());

/// The smallest gate bound at which build_easy_hitting_set(n, .) contains
/// all 2^n strings; when no searchable bound covers, the largest searchable
/// bound at easy_arity(n).
std::size_t default_easy_gates(std::size_t n, const Limits& limits = default_limits());

struct HitResult {
    bool hit = false;
    std::optional<BitString> witness;
};

/// The lexicographically first element of H in Q, if any.
HitResult verify_hitting(const HittingSet& h, const DenseProperty& q);

}  // namespace hitforge
