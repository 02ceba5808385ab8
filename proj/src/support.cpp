#include <cstdlib>
#include <string>

#include "hitforge/errors.hpp"
#include "hitforge/limits.hpp"
#include "hitforge/random.hpp"
#include "hitforge/rational.hpp"

namespace hitforge {

Rational parse_rational(const std::string& text) {
    try {
        auto slash = text.find('/');
        std::size_t used = 0;
        if (auto dot = text.find('.'); dot != std::string::npos && slash == std::string::npos) {
            // Decimal notation, e.g. 0.6 = 6/10.
            auto whole = text.substr(0, dot);
            auto frac = text.substr(dot + 1);
            if (frac.empty() || frac.size() > 12 || frac.find_first_not_of("0123456789") != std::string::npos ||
                (!whole.empty() && whole.find_first_not_of("0123456789") != std::string::npos)) {
                throw FormatError("bad rational: " + text);
            }
            std::int64_t scale = 1;
            for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
            const std::int64_t w = whole.empty() ? 0 : std::stoll(whole);
            return Rational(w * scale + std::stoll(frac), scale);
        }
        if (slash == std::string::npos) {
            auto p = std::stoll(text, &used);
            if (used != text.size()) throw FormatError("bad rational: " + text);
            return Rational(p);
        }
        auto num_text = text.substr(0, slash);
        auto den_text = text.substr(slash + 1);
        auto p = std::stoll(num_text, &used);
        if (used != num_text.size()) throw FormatError("bad rational: " + text);
        auto q = std::stoll(den_text, &used);
        if (used != den_text.size() || q == 0) throw FormatError("bad rational: " + text);
        return Rational(p, q);
    } catch (const std::logic_error&) {
        throw FormatError("bad rational: " + text);
    }
}

namespace {

template <typename T>
void override_from_env(const char* name, T& field) {
    if (const char* v = std::getenv(name); v != nullptr && *v != '\0') {
        try {
            field = static_cast<T>(std::stoull(v));
        } catch (const std::logic_error&) {
            throw FormatError(std::string("environment variable ") + name + " is not a number");
        }
    }
}

}  // namespace

const Limits& default_limits() {
    static const Limits limits = [] {
        Limits l;
        override_from_env("HITFORGE_MAX_ENUM_ARITY", l.max_enum_arity);
        override_from_env("HITFORGE_MAX_ORACLE_ARITY", l.max_oracle_arity);
        override_from_env("HITFORGE_MAX_SEED_BITS", l.max_seed_bits);
        override_from_env("HITFORGE_MAX_DESIGN_UNIVERSE", l.max_design_universe);
        override_from_env("HITFORGE_MAX_CIRCUITS", l.max_enumerated_circuits);
        override_from_env("HITFORGE_MAX_SEARCH_NODES", l.max_search_nodes);
        override_from_env("HITFORGE_THREADS", l.threads);
        if (l.threads == 0) l.threads = 1;
        return l;
    }();
    return limits;
}

std::uint64_t RandomSource::below(std::uint64_t bound) {
    if (bound == 0) throw InputShapeError("RandomSource::below(0)");
    // Largest multiple of bound representable, to reject the biased tail.
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    for (;;) {
        std::uint64_t x = engine_();
        if (x < limit) return x % bound;
    }
}

bool RandomSource::bernoulli(const Rational& p) {
    if (p <= 0) return false;
    if (p >= 1) return true;
    return below(static_cast<std::uint64_t>(p.denominator())) <
           static_cast<std::uint64_t>(p.numerator());
}

}  // namespace hitforge
