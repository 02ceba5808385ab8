#include "hitforge/hitting_set.hpp"

#include <sstream>

#include "hitforge/errors.hpp"

namespace hitforge {

std::string_view provenance_name(Provenance p) {
    switch (p) {
        case Provenance::easy: return "easy";
        case Provenance::nw: return "nw";
        case Provenance::file: return "file";
    }
    return "file";
}

Provenance parse_provenance(std::string_view name) {
    if (name == "easy") return Provenance::easy;
    if (name == "nw") return Provenance::nw;
    if (name == "file") return Provenance::file;
    throw FormatError("unknown provenance '" + std::string(name) + "'");
}

HittingSet::HittingSet(std::size_t n, std::vector<BitString> elements, Provenance provenance)
    : n_(n), elements_(std::move(elements)), provenance_(provenance) {
    if (elements_.empty()) throw InputShapeError("hitting set must have at least one element");
    for (const auto& e : elements_) {
        if (e.size() != n_) {
            throw InputShapeError("hitting-set element '" + e.str() + "' does not have length " +
                                  std::to_string(n_));
        }
    }
}

HittingSet HittingSet::full_cube(std::size_t n, Provenance provenance) {
    if (n >= 32) throw InputShapeError("full cube too large");
    std::vector<BitString> all;
    all.reserve(std::size_t{1} << n);
    for (std::uint64_t j = 0; j < (std::uint64_t{1} << n); ++j) all.push_back(BitString::from_uint(j, n));
    return HittingSet(n, std::move(all), provenance);
}

std::string format_hitting_set(const HittingSet& h) {
    std::string out = "n=" + std::to_string(h.n()) + ";count=" + std::to_string(h.size()) +
                      ";provenance=" + std::string(provenance_name(h.provenance())) + "\n";
    out.reserve(out.size() + h.size() * (h.n() + 1));
    for (const auto& e : h.elements()) {
        out += e.str();
        out += '\n';
    }
    return out;
}

namespace {

std::string_view header_field(std::string_view header, std::string_view key) {
    std::size_t pos = 0;
    while (pos <= header.size()) {
        auto semi = header.find(';', pos);
        auto field = header.substr(pos, semi == std::string_view::npos ? std::string_view::npos : semi - pos);
        if (field.size() > key.size() && field.substr(0, key.size()) == key && field[key.size()] == '=') {
            return field.substr(key.size() + 1);
        }
        if (semi == std::string_view::npos) break;
        pos = semi + 1;
    }
    throw FormatError("hitting-set header lacks '" + std::string(key) + "': " + std::string(header));
}

std::size_t parse_count(std::string_view text) {
    try {
        std::size_t used = 0;
        auto v = std::stoull(std::string(text), &used);
        if (used != text.size()) throw FormatError("bad number '" + std::string(text) + "'");
        return static_cast<std::size_t>(v);
    } catch (const std::logic_error&) {
        throw FormatError("bad number '" + std::string(text) + "'");
    }
}

}  // namespace

HittingSet parse_hitting_set(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line)) throw FormatError("empty hitting-set file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::size_t n = parse_count(header_field(line, "n"));
    const std::size_t count = parse_count(header_field(line, "count"));
    const Provenance prov = parse_provenance(header_field(line, "provenance"));
    std::vector<BitString> elements;
    elements.reserve(count);
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        elements.push_back(BitString::parse(line));
    }
    if (elements.size() != count) {
        throw FormatError("hitting-set header declares " + std::to_string(count) + " elements, found " +
                          std::to_string(elements.size()));
    }
    return HittingSet(n, std::move(elements), prov);
}

}  // namespace hitforge
