#include "hitforge/sampler.hpp"

#include <system_error>

#include "hitforge/errors.hpp"
#include "hitforge/process.hpp"

namespace hitforge {

namespace {

constexpr std::size_t kOverflow = static_cast<std::size_t>(-1);

// base^exp, or kOverflow.
std::size_t checked_pow(std::size_t base, std::size_t exp) {
    std::size_t result = 1;
    for (std::size_t i = 0; i < exp; ++i) {
        if (base != 0 && result > kOverflow / base) return kOverflow;
        result *= base;
    }
    return result;
}

}  // namespace

std::size_t SamplableEnsemble::randomness_length(std::size_t n) const {
    const std::size_t len = checked_pow(n, c);
    if (len == kOverflow) throw ResourceLimitError("n^c overflows for n=" + std::to_string(n));
    return len;
}

std::optional<BitString> SamplableEnsemble::sample(std::size_t n, const BitString& w) const {
    if (w.size() != randomness_length(n)) {
        throw InputShapeError("sampler " + name + " at n=" + std::to_string(n) + " reads " +
                              std::to_string(randomness_length(n)) + " random bits, got " + std::to_string(w.size()));
    }
    try {
        return g(n, w);
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw PropertyError("sampler " + name + " failed: " + e.what());
    }
}

LengthInterval interval_of(std::size_t i, std::size_t c) {
    if (i < 1 || c < 1) throw InputShapeError("interval_of needs i >= 1 and c >= 1");
    const std::size_t first = checked_pow(i, c);
    const std::size_t next = checked_pow(i + 1, c);
    if (first == kOverflow || next == kOverflow) throw ResourceLimitError("interval bounds overflow");
    return {first, next - 1};
}

std::size_t interval_index(std::size_t m, std::size_t c) {
    if (m < 1 || c < 1) throw InputShapeError("interval_index needs m >= 1 and c >= 1");
    std::size_t i = 1;
    while (checked_pow(i + 1, c) <= m) ++i;
    return i;
}

DenseProperty ensemble_property(const SamplableEnsemble& e) {
    DenseProperty q;
    q.name = "ensemble:" + e.name;
    q.membership = [e](const BitString& x) {
        if (x.empty()) throw InputShapeError("ensemble property is undefined on the empty string");
        const std::size_t i = interval_index(x.size(), e.c);
        return e.sample(i, x.prefix(e.randomness_length(i))).has_value();
    };
    return q;
}

CanonicalSampleOutcome canonical_sample(const SamplableEnsemble& e, std::size_t n, const CanonicalSampleConfig& config,
                                        RandomSource& rng, const Limits& limits) {
    const auto interval = interval_of(n, e.c);
    const DenseProperty q = ensemble_property(e);
    CanonicalSampleOutcome out;
    for (std::size_t m = interval.first; m <= interval.last; ++m) {
        LengthAttempt attempt;
        attempt.m = m;
        RandomSource local = rng.split();
        try {
            auto r = two_phase_construct(m, q, config.easy_gates, config.fallback, config.nw, local, limits);
            attempt.phase = r.phase;
            attempt.value = r.value;
            for (const auto& d : r.diagnostics) {
                attempt.diagnostic += (attempt.diagnostic.empty() ? "" : "; ") + d;
            }
        } catch (const Error& err) {
            attempt.diagnostic = err.what();
        }
        const bool success = attempt.value.has_value();
        out.attempts.push_back(attempt);
        if (!success) continue;
        auto sample = e.sample(n, attempt.value->prefix(e.randomness_length(n)));
        if (!sample) {
            out.attempts.back().diagnostic = "sampler failed on a string its property accepted";
            continue;
        }
        out.sample = sample;
        out.chosen_length = m;
        return out;
    }
    return out;
}

bool in_sampler_range(const SamplableEnsemble& e, std::size_t n, const BitString& sample, const Limits& limits) {
    const std::size_t len = e.randomness_length(n);
    if (len > limits.max_enum_arity) {
        throw ResourceLimitError("range check needs 2^" + std::to_string(len) + " sampler calls");
    }
    for (std::uint64_t w = 0; w < (std::uint64_t{1} << len); ++w) {
        auto s = e.sample(n, BitString::from_uint(w, len));
        if (s && *s == sample) return true;
    }
    return false;
}

SamplableEnsemble first_bit_ensemble() {
    return {"first-bit",
            [](std::size_t n, const BitString& w) -> std::optional<BitString> {
                if (!w[0]) return std::nullopt;
                return BitString::parse(w.str().substr(w.size() - n));
            },
            2, 1};
}

SamplableEnsemble sparse_prefix_ensemble() {
    return {"sparse-prefix",
            [](std::size_t n, const BitString& w) -> std::optional<BitString> {
                const bool ok = w.size() == 1 ? w[0] : (w[0] && !w[1]);
                if (!ok) return std::nullopt;
                BitString s = BitString::filled(n, false);
                for (std::size_t p = 0; p < w.size(); ++p) {
                    if (w[p]) s.set(p % n, !s[p % n]);
                }
                return s;
            },
            2, 2};
}

SamplableEnsemble plugin_ensemble(const std::string& program, std::size_t c, std::size_t k) {
    return {program,
            [program](std::size_t n, const BitString& w) -> std::optional<BitString> {
                ProcessResult r;
                try {
                    r = run_process(program, {"sample", std::to_string(n)}, w.str() + "\n");
                } catch (const std::system_error& err) {
                    throw PropertyError("sampler plug-in " + program + ": " + err.what());
                }
                if (r.exit_status != 0) {
                    throw PropertyError("sampler plug-in " + program + " exited with status " +
                                        std::to_string(r.exit_status));
                }
                std::string text = r.standard_output;
                while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
                if (text == "*") return std::nullopt;
                return BitString::parse(text);
            },
            c, k};
}

SamplableEnsemble resolve_ensemble(const std::string& name, std::size_t c, std::size_t k) {
    if (name == "first-bit") return first_bit_ensemble();
    if (name == "sparse-prefix") return sparse_prefix_ensemble();
    return plugin_ensemble(name, c, k);
}

}  // namespace hitforge
