#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hitforge/bits.hpp"
#include "hitforge/limits.hpp"
#include "hitforge/rational.hpp"

namespace hitforge {

/// A decision procedure over bit strings, optionally with the density it
/// claims to have at each length.
struct DenseProperty {
    std::string name;
    std::function<bool(const BitString&)> membership;
    /// gamma(n); empty when the property makes no claim.
    std::function<std::optional<Rational>(std::size_t)> claimed_density;
    /// Optional faster path answering many queries at once.
    std::function<std::vector<bool>(const std::vector<BitString>&)> batch_membership;

    /// Evaluates membership; failures other than hitforge errors are
    /// reported as PropertyError.
    bool contains(const BitString& x) const;
    std::vector<bool> contains_all(const std::vector<BitString>& xs) const;
    std::optional<Rational> claim(std::size_t n) const {
        return claimed_density ? claimed_density(n) : std::nullopt;
    }
};

/// Deterministic Miller-Rabin with witnesses 2..37, exact on 64-bit inputs.
bool is_prime_u64(std::uint64_t value);

/// x_1 = 1 and x read in binary (leftmost bit most significant) is prime.
/// Lengths above 64 are a ResourceLimitError.
bool primes_membership(const BitString& x);

/// Primes with claimed density 1/(2n).
DenseProperty primes_property();
DenseProperty all_strings_property();
DenseProperty empty_property();

/// A length-non-increasing map that is injective on each length.
struct CompressionScheme {
    std::string name;
    std::function<BitString(const BitString&)> map;
    std::function<std::vector<BitString>(const std::vector<BitString>&)> batch_map;

    /// f(x), checked against |f(x)| <= |x| (SchemeContractError otherwise).
    BitString apply(const BitString& x) const;
    std::vector<BitString> apply_all(const std::vector<BitString>& xs) const;
};

CompressionScheme identity_scheme();
/// Strings ending in 00 lose their last bit.
CompressionScheme trailing_zeros_scheme();
/// Strings starting with 000 lose two of those zeros.
CompressionScheme leading_zeros_scheme();

/// |f(x)| >= |x| - 1.
bool incompressible_membership(const BitString& x, const CompressionScheme& f);
/// I^f, with claimed density 1/2.
DenseProperty incompressible_property(CompressionScheme f);

/// Two distinct strings of length n with the same image, found by full
/// enumeration (n <= limits.max_enum_arity), or nullopt.
std::optional<std::pair<BitString, BitString>> find_collision(const CompressionScheme& f, std::size_t n,
                                                              const Limits& limits = default_limits());

/// |Q_n| / 2^n by full enumeration; n <= limits.max_enum_arity.
Rational density(const DenseProperty& q, std::size_t n, const Limits& limits = default_limits());

/// A property decided by an external program: the candidate is written to
/// its standard input and exit status 0 means member, 1 non-member. With
/// `--batch` it reads one candidate per line and prints 1 or 0 per line.
DenseProperty plugin_property(const std::string& program);
/// A scheme computed by an external program printing f(x) for the string on
/// its standard input; `--batch` maps one string per line.
CompressionScheme plugin_scheme(const std::string& program);

/// Built-in names identity, trailing-zeros, leading-zeros; anything else is
/// taken as a plug-in program.
CompressionScheme resolve_scheme(const std::string& name);
/// Built-in names primes, all, none, incompressible (using `scheme`);
/// anything else is taken as a plug-in program.
DenseProperty resolve_property(const std::string& name, const std::string& scheme = "identity");

}  // namespace hitforge
