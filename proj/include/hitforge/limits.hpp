#pragma once

#include <cstddef>
#include <cstdint>

namespace hitforge {

/// Enumeration caps shared by every module. Defaults can be overridden per
/// process through the HITFORGE_* environment variables read by
/// default_limits(), and per call by passing a modified copy.
struct Limits {
    /// Largest arity for which truth tables, exact acceptance and density are
    /// computed by full enumeration.
    std::size_t max_enum_arity = 24;
    /// Largest arity accepted by the minimum-circuit-size oracle.
    std::size_t max_oracle_arity = 4;
    /// Largest seed length enumerated by the NW generator.
    std::size_t max_seed_bits = 24;
    /// Largest universe the greedy design construction may grow to.
    std::size_t max_design_universe = 512;
    /// Upper bound on the estimated number of circuits a literal enumeration
    /// may visit before it is refused.
    std::uint64_t max_enumerated_circuits = 200'000'000;
    /// Upper bound on the estimated number of search nodes the reachable
    /// function search may visit.
    std::uint64_t max_search_nodes = 4'000'000'000ULL;
    /// Worker threads for partitionable enumerations.
    std::size_t threads = 1;
};

/// Limits{} with HITFORGE_MAX_ENUM_ARITY, HITFORGE_MAX_ORACLE_ARITY,
/// HITFORGE_MAX_SEED_BITS, HITFORGE_MAX_DESIGN_UNIVERSE,
/// HITFORGE_MAX_CIRCUITS, HITFORGE_MAX_SEARCH_NODES and HITFORGE_THREADS
/// applied when set.
const Limits& default_limits();

}  // namespace hitforge
