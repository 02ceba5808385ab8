#pragma once

#include <compare>
#include <functional>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace hitforge {

/// A finite string over {0,1}. Position 0 is the leftmost bit; ordering is
/// lexicographic, which for equal lengths coincides with numeric order when
/// the string is read most-significant-bit first.
class BitString {
public:
    BitString() = default;

    /// Parses a string of '0'/'1' characters; throws FormatError otherwise.
    static BitString parse(std::string_view text);

    /// The low `width` bits of `value`, most significant first.
    static BitString from_uint(std::uint64_t value, std::size_t width);

    static BitString filled(std::size_t width, bool bit) {
        BitString b;
        b.chars_.assign(width, bit ? '1' : '0');
        return b;
    }

    std::size_t size() const noexcept { return chars_.size(); }
    bool empty() const noexcept { return chars_.empty(); }

    bool operator[](std::size_t i) const noexcept { return chars_[i] == '1'; }
    void set(std::size_t i, bool bit) noexcept { chars_[i] = bit ? '1' : '0'; }
    void push_back(bool bit) { chars_.push_back(bit ? '1' : '0'); }

    /// The first `n` bits; throws InputShapeError when n > size().
    BitString prefix(std::size_t n) const;

    /// Reads the string as an unsigned integer, leftmost bit most significant.
    /// Requires size() <= 64.
    std::uint64_t to_uint() const;

    std::size_t count_ones() const noexcept;

    const std::string& str() const noexcept { return chars_; }

    friend auto operator<=>(const BitString&, const BitString&) = default;
    friend bool operator==(const BitString&, const BitString&) = default;

private:
    std::string chars_;
};

/// The leftmost n bits of u.
BitString left_n(const BitString& u, std::size_t n);

struct BitStringHash {
    std::size_t operator()(const BitString& b) const noexcept {
        return std::hash<std::string>{}(b.str());
    }
};

}  // namespace hitforge
