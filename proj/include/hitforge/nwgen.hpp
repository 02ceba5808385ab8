#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hitforge/bits.hpp"
#include "hitforge/circuits.hpp"
#include "hitforge/hitting_set.hpp"
#include "hitforge/limits.hpp"

namespace hitforge {

/// r subsets of {1..l}, each of size m, pairwise intersecting in at most t
/// points. Sets are stored sorted, with 1-based points.
struct CombinatorialDesign {
    std::size_t universe_size = 0;
    std::size_t num_sets = 0;
    std::size_t set_size = 0;
    std::size_t max_intersection = 0;
    std::vector<std::vector<std::size_t>> sets;

    friend bool operator==(const CombinatorialDesign&, const CombinatorialDesign&) = default;
};

/// Greedy first-fit: the universe grows one point at a time and, at each
/// size l, the lexicographically first admissible m-sets containing l are
/// added until r sets exist. Throws ConstructionFailedError once l would
/// exceed limits.max_design_universe.
CombinatorialDesign build_design(std::size_t r, std::size_t m, std::size_t t,
                                 const Limits& limits = default_limits());

/// Exhaustive check of set sizes, point range, sortedness and pairwise
/// intersections. Returns a description of the first violation.
std::optional<std::string> check_design(const CombinatorialDesign& design);

/// `l=<l>;r=<r>;m=<m>;t=<t>` followed by one comma-separated set per line.
std::string format_design(const CombinatorialDesign& design);
CombinatorialDesign parse_design(std::string_view text);

class NWGenerator {
public:
    /// Throws InputShapeError unless hard_tt's arity equals the set size and
    /// the design is valid.
    NWGenerator(circuits::TruthTable hard_tt, CombinatorialDesign design);

    const circuits::TruthTable& hard_tt() const noexcept { return hard_tt_; }
    const CombinatorialDesign& design() const noexcept { return design_; }
    std::size_t seed_length() const noexcept { return design_.universe_size; }
    std::size_t output_length() const noexcept { return design_.num_sets; }

    /// Bit i of the output for a seed given as an integer whose most
    /// significant of seed_length() bits is seed position 1. seed_length() <= 64.
    bool output_bit(std::uint64_t seed, std::size_t i) const;

private:
    circuits::TruthTable hard_tt_;
    CombinatorialDesign design_;
};

/// Output bit i is hard_tt evaluated on the seed restricted to S_i, the
/// restricted coordinates read in increasing order.
BitString nw_generate(const NWGenerator& gen, const BitString& seed);

/// left_n of the generator output on every seed, in seed order 0...0 to 1...1.
HittingSet build_nw_hitting_set(const NWGenerator& gen, std::size_t n,
                                const Limits& limits = default_limits());

/// Builds the design build_design(r, arity(hard_tt), t) and the hitting set.
HittingSet build_nw_hitting_set(const circuits::TruthTable& hard_tt, std::size_t n, std::size_t r,
                                std::size_t t, const Limits& limits = default_limits());

}  // namespace hitforge
