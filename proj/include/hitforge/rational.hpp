#pragma once

#include <cstdint>
#include <string>

#include <boost/rational.hpp>

namespace hitforge {

/// Exact rational used for densities, acceptance fractions and thresholds.
using Rational = boost::rational<std::int64_t>;

/// Renders as `p/q` (always with a denominator, e.g. `1/1`).
inline std::string to_string(const Rational& r) {
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

/// Parses `p/q`, a bare integer `p`, or a non-negative decimal such as 0.6.
Rational parse_rational(const std::string& text);

}  // namespace hitforge
