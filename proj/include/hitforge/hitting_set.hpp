#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "hitforge/bits.hpp"

namespace hitforge {

enum class Provenance { easy, nw, file };

std::string_view provenance_name(Provenance p);
Provenance parse_provenance(std::string_view name);

/// An ordered multiset of n-bit strings.
class HittingSet {
public:
    /// Throws InputShapeError when empty or when an element has length != n.
    HittingSet(std::size_t n, std::vector<BitString> elements, Provenance provenance);

    std::size_t n() const noexcept { return n_; }
    std::size_t size() const noexcept { return elements_.size(); }
    const std::vector<BitString>& elements() const noexcept { return elements_; }
    Provenance provenance() const noexcept { return provenance_; }

    /// All 2^n strings of length n in increasing order.
    static HittingSet full_cube(std::size_t n, Provenance provenance = Provenance::file);

private:
    std::size_t n_;
    std::vector<BitString> elements_;
    Provenance provenance_;
};

/// `n=<n>;count=<c>;provenance=<tag>` followed by one string per line.
std::string format_hitting_set(const HittingSet& h);
HittingSet parse_hitting_set(std::string_view text);

}  // namespace hitforge
