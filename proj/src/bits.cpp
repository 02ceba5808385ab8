#include "hitforge/bits.hpp"

#include <algorithm>

#include "hitforge/errors.hpp"

namespace hitforge {

BitString BitString::parse(std::string_view text) {
    BitString b;
    b.chars_.reserve(text.size());
    for (char c : text) {
        if (c != '0' && c != '1') {
            throw FormatError("not a bit string: '" + std::string(text) + "'");
        }
        b.chars_.push_back(c);
    }
    return b;
}

BitString BitString::from_uint(std::uint64_t value, std::size_t width) {
    BitString b;
    b.chars_.assign(width, '0');
    for (std::size_t i = 0; i < width && i < 64; ++i) {
        if ((value >> i) & 1U) b.chars_[width - 1 - i] = '1';
    }
    return b;
}

BitString BitString::prefix(std::size_t n) const {
    if (n > size()) {
        throw InputShapeError("prefix of length " + std::to_string(n) + " requested from a " +
                              std::to_string(size()) + "-bit string");
    }
    BitString b;
    b.chars_ = chars_.substr(0, n);
    return b;
}

std::uint64_t BitString::to_uint() const {
    if (size() > 64) throw InputShapeError("bit string longer than 64 bits");
    std::uint64_t v = 0;
    for (char c : chars_) v = (v << 1) | static_cast<std::uint64_t>(c == '1');
    return v;
}

std::size_t BitString::count_ones() const noexcept {
    return static_cast<std::size_t>(std::count(chars_.begin(), chars_.end(), '1'));
}

BitString left_n(const BitString& u, std::size_t n) { return u.prefix(n); }

}  // namespace hitforge
