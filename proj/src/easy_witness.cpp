#include "hitforge/easy_witness.hpp"

#include <algorithm>

#include "hitforge/circuits.hpp"
#include "hitforge/errors.hpp"

namespace hitforge {

std::size_t easy_arity(std::size_t n) {
    std::size_t k = 1;
    while ((std::size_t{1} << k) < n) ++k;
    return k;
}

HittingSet build_easy_hitting_set(std::size_t n, std::size_t gates, const Limits& limits) {
    if (n < 1) throw InputShapeError("easy hitting set needs n >= 1");
    const std::size_t k = easy_arity(n);
    if (k > 6) {
        throw ResourceLimitError("easy hitting set at n=" + std::to_string(n) + " needs arity " + std::to_string(k) +
                                 ", above the function search's arity 6");
    }
    auto table = circuits::reachable_functions(k, gates, limits);
    // The first n positions of the truth table are the low n bits of the mask.
    std::vector<std::uint64_t> prefixes;
    prefixes.reserve(static_cast<std::size_t>(table->count()));
    const std::uint64_t low = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
    for (auto mask : table->functions()) prefixes.push_back(mask & low);
    std::sort(prefixes.begin(), prefixes.end());
    prefixes.erase(std::unique(prefixes.begin(), prefixes.end()), prefixes.end());

    std::vector<BitString> elements;
    elements.reserve(prefixes.size());
    for (auto p : prefixes) {
        BitString s = BitString::filled(n, false);
        for (std::size_t j = 0; j < n; ++j) s.set(j, (p >> j) & 1U);
        elements.push_back(std::move(s));
    }
    std::sort(elements.begin(), elements.end());
    return HittingSet(n, std::move(elements), Provenance::easy);
}

std::size_t default_easy_gates(std::size_t n, const Limits& limits) {
    const std::size_t k = easy_arity(n);
    if (k > 6) throw ResourceLimitError("no easy hitting set at n=" + std::to_string(n));
    const std::size_t cap = circuits::kDefaultSearchGateCap[k];
    for (std::size_t s = 0; s <= cap + 1; ++s) {
        try {
            auto h = build_easy_hitting_set(n, s, limits);
            if (n < 64 && h.size() == (std::size_t{1} << n)) return s;
        } catch (const ResourceLimitError&) {
            return s == 0 ? 0 : s - 1;
        }
    }
    return cap + 1;
}

HitResult verify_hitting(const HittingSet& h, const DenseProperty& q) {
    std::vector<BitString> sorted = h.elements();
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    if (!q.batch_membership) {
        for (const auto& x : sorted) {
            if (q.contains(x)) return {true, x};
        }
        return {};
    }
    constexpr std::size_t kChunk = 256;
    for (std::size_t start = 0; start < sorted.size(); start += kChunk) {
        std::vector<BitString> chunk(sorted.begin() + static_cast<std::ptrdiff_t>(start),
                                     sorted.begin() + static_cast<std::ptrdiff_t>(std::min(sorted.size(), start + kChunk)));
        auto answers = q.contains_all(chunk);
        for (std::size_t i = 0; i < chunk.size(); ++i) {
            if (answers[i]) return {true, chunk[i]};
        }
    }
    return {};
}

}  // namespace hitforge
