#include "hitforge/nwgen.hpp"

#include <algorithm>
#include <sstream>

#include "hitforge/errors.hpp"

namespace hitforge {

namespace {

// First-fit search for the sets added while the universe is {1..l}.
class DesignSearch {
public:
    DesignSearch(std::size_t r, std::size_t m, std::size_t t) : r_(r), m_(m), t_(t) {}

    // Returns true once r sets exist.
    bool extend_universe(std::size_t l) {
        members_.resize(l + 1);
        path_.clear();
        round_start_ = sets_.size();
        return descend(l, 1);
    }

    std::vector<std::vector<std::size_t>> take() { return std::move(sets_); }

private:
    bool descend(std::size_t l, std::size_t next) {
        if (path_.size() + 1 == m_) return place(l);
        const std::size_t slots = m_ - 1 - path_.size();
        for (std::size_t p = next; p + slots <= l; ++p) {
            if (!push(p)) continue;
            const bool done = descend(l, p + 1);
            pop(p);
            if (done) return true;
        }
        return false;
    }

    bool push(std::size_t p) {
        bool ok = true;
        for (std::size_t s : members_[p]) {
            if (++counts_[s] > t_) ok = false;
        }
        if (!ok) {
            for (std::size_t s : members_[p]) --counts_[s];
            return false;
        }
        path_.push_back(p);
        return true;
    }

    void pop(std::size_t p) {
        for (std::size_t s : members_[p]) --counts_[s];
        path_.pop_back();
    }

    bool place(std::size_t l) {
        // Sets added in this round already contain l.
        for (std::size_t s = round_start_; s < sets_.size(); ++s) {
            if (counts_[s] + 1 > t_) return false;
        }
        std::vector<std::size_t> set = path_;
        set.push_back(l);
        const std::size_t index = sets_.size();
        for (std::size_t p : set) members_[p].push_back(index);
        // The intersection with the current path is the whole path.
        counts_.push_back(path_.size());
        sets_.push_back(std::move(set));
        return sets_.size() == r_;
    }

    std::size_t r_, m_, t_;
    std::size_t round_start_ = 0;
    std::vector<std::vector<std::size_t>> sets_;
    std::vector<std::vector<std::size_t>> members_;
    std::vector<std::size_t> counts_;
    std::vector<std::size_t> path_;
};

std::size_t parse_size(std::string_view text, std::string_view what) {
    try {
        std::size_t used = 0;
        auto v = std::stoull(std::string(text), &used);
        if (used == text.size()) return static_cast<std::size_t>(v);
    } catch (const std::logic_error&) {
    }
    throw FormatError("bad " + std::string(what) + " '" + std::string(text) + "'");
}

}  // namespace

CombinatorialDesign build_design(std::size_t r, std::size_t m, std::size_t t, const Limits& limits) {
    if (r < 1 || m < 1 || t < 1 || t > m) {
        throw InputShapeError("design parameters need r >= 1 and 1 <= t <= m");
    }
    DesignSearch search(r, m, t);
    for (std::size_t l = m; l <= limits.max_design_universe; ++l) {
        if (search.extend_universe(l)) {
            CombinatorialDesign d;
            d.universe_size = l;
            d.num_sets = r;
            d.set_size = m;
            d.max_intersection = t;
            d.sets = search.take();
            return d;
        }
    }
    throw ConstructionFailedError("greedy design search for r=" + std::to_string(r) + ", m=" +
                                      std::to_string(m) + ", t=" + std::to_string(t) +
                                      " did not finish within a universe of " +
                                      std::to_string(limits.max_design_universe),
                                  limits.max_design_universe);
}

std::optional<std::string> check_design(const CombinatorialDesign& d) {
    if (d.sets.size() != d.num_sets) {
        return "expected " + std::to_string(d.num_sets) + " sets, found " + std::to_string(d.sets.size());
    }
    for (std::size_t i = 0; i < d.sets.size(); ++i) {
        const auto& s = d.sets[i];
        if (s.size() != d.set_size) return "set " + std::to_string(i + 1) + " has the wrong size";
        for (std::size_t j = 0; j < s.size(); ++j) {
            if (s[j] < 1 || s[j] > d.universe_size) return "set " + std::to_string(i + 1) + " leaves the universe";
            if (j > 0 && s[j - 1] >= s[j]) return "set " + std::to_string(i + 1) + " is not strictly increasing";
        }
    }
    for (std::size_t i = 0; i < d.sets.size(); ++i) {
        for (std::size_t j = i + 1; j < d.sets.size(); ++j) {
            std::vector<std::size_t> common;
            std::set_intersection(d.sets[i].begin(), d.sets[i].end(), d.sets[j].begin(), d.sets[j].end(),
                                  std::back_inserter(common));
            if (common.size() > d.max_intersection) {
                return "sets " + std::to_string(i + 1) + " and " + std::to_string(j + 1) + " share " +
                       std::to_string(common.size()) + " points";
            }
        }
    }
    return std::nullopt;
}

std::string format_design(const CombinatorialDesign& d) {
    std::ostringstream out;
    out << "l=" << d.universe_size << ";r=" << d.num_sets << ";m=" << d.set_size << ";t=" << d.max_intersection
        << '\n';
    for (const auto& s : d.sets) {
        for (std::size_t j = 0; j < s.size(); ++j) out << (j ? "," : "") << s[j];
        out << '\n';
    }
    return out.str();
}

CombinatorialDesign parse_design(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line)) throw FormatError("empty design file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    CombinatorialDesign d;
    bool seen[4] = {false, false, false, false};
    std::istringstream header(line);
    std::string field;
    while (std::getline(header, field, ';')) {
        auto eq = field.find('=');
        if (eq == std::string::npos) throw FormatError("bad design header field '" + field + "'");
        auto key = field.substr(0, eq);
        auto value = parse_size(field.substr(eq + 1), key);
        if (key == "l") d.universe_size = value, seen[0] = true;
        else if (key == "r") d.num_sets = value, seen[1] = true;
        else if (key == "m") d.set_size = value, seen[2] = true;
        else if (key == "t") d.max_intersection = value, seen[3] = true;
        else throw FormatError("unknown design header field '" + key + "'");
    }
    if (!(seen[0] && seen[1] && seen[2] && seen[3])) throw FormatError("design header needs l, r, m and t");
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::size_t> set;
        std::istringstream row(line);
        std::string item;
        while (std::getline(row, item, ',')) set.push_back(parse_size(item, "design point"));
        d.sets.push_back(std::move(set));
    }
    if (auto problem = check_design(d)) throw FormatError("invalid design: " + *problem);
    return d;
}

NWGenerator::NWGenerator(circuits::TruthTable hard_tt, CombinatorialDesign design)
    : hard_tt_(std::move(hard_tt)), design_(std::move(design)) {
    if (hard_tt_.arity() != design_.set_size) {
        throw InputShapeError("hard truth table has arity " + std::to_string(hard_tt_.arity()) +
                              " but design sets have size " + std::to_string(design_.set_size));
    }
    if (auto problem = check_design(design_)) throw InputShapeError("invalid design: " + *problem);
}

bool NWGenerator::output_bit(std::uint64_t seed, std::size_t i) const {
    const std::size_t l = design_.universe_size;
    std::size_t index = 0;
    for (std::size_t p : design_.sets[i]) index = (index << 1) | ((seed >> (l - p)) & 1U);
    return hard_tt_[index];
}

BitString nw_generate(const NWGenerator& gen, const BitString& seed) {
    if (seed.size() != gen.seed_length()) {
        throw InputShapeError("seed has length " + std::to_string(seed.size()) + ", generator expects " +
                              std::to_string(gen.seed_length()));
    }
    BitString out;
    for (const auto& set : gen.design().sets) {
        std::size_t index = 0;
        for (std::size_t p : set) index = (index << 1) | static_cast<std::size_t>(seed[p - 1]);
        out.push_back(gen.hard_tt()[index]);
    }
    return out;
}

HittingSet build_nw_hitting_set(const NWGenerator& gen, std::size_t n, const Limits& limits) {
    if (n > gen.output_length()) {
        throw InputShapeError("target length " + std::to_string(n) + " exceeds generator output length " +
                              std::to_string(gen.output_length()));
    }
    const std::size_t l = gen.seed_length();
    if (l > limits.max_seed_bits || l >= 64) {
        throw ResourceLimitError("seed length " + std::to_string(l) + " exceeds the enumeration cap of " +
                                 std::to_string(limits.max_seed_bits));
    }
    std::vector<BitString> elements;
    elements.reserve(std::size_t{1} << l);
    for (std::uint64_t seed = 0; seed < (std::uint64_t{1} << l); ++seed) {
        BitString u = BitString::filled(n, false);
        for (std::size_t i = 0; i < n; ++i) u.set(i, gen.output_bit(seed, i));
        elements.push_back(std::move(u));
    }
    return HittingSet(n, std::move(elements), Provenance::nw);
}

HittingSet build_nw_hitting_set(const circuits::TruthTable& hard_tt, std::size_t n, std::size_t r,
                                std::size_t t, const Limits& limits) {
    if (r < n) throw InputShapeError("generator output length r must be at least n");
    NWGenerator gen(hard_tt, build_design(r, hard_tt.arity(), t, limits));
    return build_nw_hitting_set(gen, n, limits);
}

}  // namespace hitforge
