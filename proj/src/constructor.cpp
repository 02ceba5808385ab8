#include "hitforge/constructor.hpp"

#include <algorithm>
#include <map>
#include <thread>

#include "hitforge/easy_witness.hpp"
#include "hitforge/errors.hpp"
#include "hitforge/nwgen.hpp"

namespace hitforge {

std::optional<BitString> RandomizedProducer::run(std::size_t n, RandomSource& rng) const {
    std::optional<BitString> out;
    try {
        out = procedure(n, rng);
    } catch (const ProducerContractError&) {
        throw;
    } catch (const ResourceLimitError&) {
        throw;
    } catch (const ProducerError&) {
        throw;
    } catch (const std::exception& e) {
        throw ProducerError("producer " + name + " failed: " + e.what());
    }
    if (out && output_length && out->size() != output_length(n)) {
        throw ProducerContractError("producer " + name + " returned " + std::to_string(out->size()) +
                                    " bits, declared " + std::to_string(output_length(n)));
    }
    return out;
}

RandomizedProducer constant_producer(BitString value) {
    const std::size_t len = value.size();
    return {"constant:" + value.str(),
            [value](std::size_t, RandomSource&) -> std::optional<BitString> { return value; },
            [len](std::size_t) { return len; }};
}

RandomizedProducer noisy_producer(BitString value, Rational p, bool uniform_noise) {
    const std::size_t len = value.size();
    return {"noisy:" + value.str() + "@" + to_string(p),
            [value, p, uniform_noise, len](std::size_t, RandomSource& rng) -> std::optional<BitString> {
                if (rng.bernoulli(p)) return value;
                if (uniform_noise) return rng.bits(len);
                return std::nullopt;
            },
            [len](std::size_t) { return len; }};
}

RandomizedProducer hard_table_producer(std::size_t arity, std::size_t threshold, const Limits& limits) {
    if (arity > limits.max_oracle_arity) {
        throw ResourceLimitError("hard truth tables are certified only up to arity " +
                                 std::to_string(limits.max_oracle_arity));
    }
    const std::size_t len = std::size_t{1} << arity;
    // Found once: the search is deterministic.
    std::optional<BitString> found;
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << len); ++v) {
        circuits::TruthTable tt(arity, BitString::from_uint(v, len));
        if (circuits::complexity_exceeds(tt, threshold, limits)) {
            found = tt.bits();
            break;
        }
    }
    if (!found) {
        throw ResourceLimitError("no truth table of arity " + std::to_string(arity) + " needs more than " +
                                 std::to_string(threshold) + " gates");
    }
    return {"hard-tt:" + std::to_string(arity) + ">" + std::to_string(threshold),
            [found](std::size_t, RandomSource&) -> std::optional<BitString> { return found; },
            [len](std::size_t) { return len; }};
}

RandomizedProducer sampled_hard_table_producer(std::size_t arity, std::size_t threshold, std::size_t attempts,
                                               const Limits& limits) {
    if (arity > limits.max_oracle_arity) {
        throw ResourceLimitError("hard truth tables are certified only up to arity " +
                                 std::to_string(limits.max_oracle_arity));
    }
    const std::size_t len = std::size_t{1} << arity;
    return {"sampled-tt:" + std::to_string(arity) + ">" + std::to_string(threshold),
            [arity, threshold, attempts, len, limits](std::size_t, RandomSource& rng) -> std::optional<BitString> {
                for (std::size_t i = 0; i < attempts; ++i) {
                    circuits::TruthTable tt(arity, rng.bits(len));
                    if (circuits::complexity_exceeds(tt, threshold, limits)) return tt.bits();
                }
                return std::nullopt;
            },
            [len](std::size_t) { return len; }};
}

namespace {

std::size_t spec_number(const std::string& text, const std::string& spec) {
    try {
        std::size_t used = 0;
        auto v = std::stoull(text, &used);
        if (used == text.size()) return static_cast<std::size_t>(v);
    } catch (const std::logic_error&) {
    }
    throw FormatError("bad number '" + text + "' in producer specification '" + spec + "'");
}

}  // namespace

RandomizedProducer parse_producer(const std::string& spec, const Limits& limits) {
    auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
    std::vector<std::string> parts;
    for (std::size_t pos = 0; colon != std::string::npos;) {
        auto next = rest.find(':', pos);
        parts.push_back(rest.substr(pos, next == std::string::npos ? std::string::npos : next - pos));
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    auto need = [&](std::size_t count) {
        if (parts.size() != count) throw FormatError("producer specification '" + spec + "' has the wrong shape");
    };
    if (kind == "constant") {
        need(1);
        return constant_producer(BitString::parse(parts[0]));
    }
    if (kind == "noisy" || kind == "noisy-uniform") {
        need(2);
        return noisy_producer(BitString::parse(parts[0]), parse_rational(parts[1]), kind == "noisy-uniform");
    }
    if (kind == "hard-tt") {
        need(2);
        return hard_table_producer(spec_number(parts[0], spec), spec_number(parts[1], spec), limits);
    }
    if (kind == "sampled-tt") {
        need(3);
        return sampled_hard_table_producer(spec_number(parts[0], spec), spec_number(parts[1], spec),
                                           spec_number(parts[2], spec), limits);
    }
    if (kind == "purified") {
        auto second = rest.find(':');
        if (second == std::string::npos) throw FormatError("producer specification '" + spec + "' has the wrong shape");
        PurifierConfig config;
        if (auto t = spec_number(rest.substr(0, second), spec); t > 0) config.trials = t;
        return purified(parse_producer(rest.substr(second + 1), limits), config, limits);
    }
    throw FormatError("unknown producer '" + spec + "'");
}

std::optional<BitString> first_member(const HittingSet& h, const DenseProperty& q) {
    return verify_hitting(h, q).witness;
}

std::vector<std::optional<BitString>> run_trials(const RandomizedProducer& producer, std::size_t n,
                                                 std::size_t trials, RandomSource& rng, const Limits& limits) {
    std::vector<RandomSource> sources;
    sources.reserve(trials);
    for (std::size_t i = 0; i < trials; ++i) sources.push_back(rng.split());
    std::vector<std::optional<BitString>> outputs(trials);
    const std::size_t workers = std::max<std::size_t>(1, std::min(limits.threads, trials));
    if (workers == 1) {
        for (std::size_t i = 0; i < trials; ++i) outputs[i] = producer.run(n, sources[i]);
        return outputs;
    }
    std::vector<std::exception_ptr> failures(trials);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < trials; i += workers) {
                try {
                    outputs[i] = producer.run(n, sources[i]);
                } catch (...) {
                    failures[i] = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& f : failures) {
        if (f) std::rethrow_exception(f);
    }
    return outputs;
}

namespace {

// Non-bottom outputs with their counts, in lexicographic order.
std::map<BitString, std::size_t> tally(const std::vector<std::optional<BitString>>& outputs) {
    std::map<BitString, std::size_t> counts;
    for (const auto& o : outputs) {
        if (o) ++counts[*o];
    }
    return counts;
}

}  // namespace

VoteOutcome amplify_votes(const RandomizedProducer& producer, std::size_t n, std::size_t reps, RandomSource& rng,
                          const Limits& limits) {
    if (reps < 1) throw InputShapeError("amplify needs at least one repetition");
    VoteOutcome out;
    out.trial_count = reps;
    for (const auto& [value, count] : tally(run_trials(producer, n, reps, rng, limits))) {
        // Strict comparison keeps the lexicographically first on ties.
        if (count > out.winner_count) {
            out.winner_count = count;
            out.value = value;
        }
    }
    return out;
}

std::optional<BitString> amplify(const RandomizedProducer& producer, std::size_t n, std::size_t reps,
                                 RandomSource& rng, const Limits& limits) {
    return amplify_votes(producer, n, reps, rng, limits).value;
}

PurifiedOutput purify(const RandomizedProducer& producer, std::size_t n, RandomSource& rng,
                      const PurifierConfig& config, const Limits& limits) {
    if (n < 1) throw InputShapeError("purify needs n >= 1");
    const std::size_t t = config.trials.value_or(n * n);
    if (t < 1) throw InputShapeError("purify needs at least one trial");
    PurifiedOutput out;
    out.trial_count = t;
    const auto num = static_cast<std::uint64_t>(config.threshold.numerator());
    const auto den = static_cast<std::uint64_t>(config.threshold.denominator());
    for (const auto& [value, count] : tally(run_trials(producer, n, t, rng, limits))) {
        if (count > out.winner_count) out.winner_count = count;
        if (!out.value && count * den > num * t) out.value = value;
    }
    return out;
}

RandomizedProducer purified(RandomizedProducer inner, PurifierConfig config, const Limits& limits) {
    auto length = inner.output_length;
    std::string name = "purified:" + inner.name;
    return {std::move(name),
            [inner = std::move(inner), config, limits](std::size_t n, RandomSource& rng) {
                return purify(inner, n, rng, config, limits).value;
            },
            std::move(length)};
}

ConstructOutcome pseudodeterministic_construct(const RandomizedProducer& tt_producer, const DenseProperty& q,
                                               std::size_t n, const NwParams& nw, RandomSource& rng,
                                               const Limits& limits) {
    ConstructOutcome out;
    auto bits = tt_producer.run(n, rng);
    if (!bits) {
        out.diagnostic = "truth-table producer returned bottom";
        return out;
    }
    const std::size_t expected = std::size_t{1} << nw.arity;
    if (bits->size() != expected) {
        throw ProducerContractError("truth-table producer returned " + std::to_string(bits->size()) +
                                    " bits, expected " + std::to_string(expected));
    }
    circuits::TruthTable table(nw.arity, *bits);
    const std::size_t r = nw.r == 0 ? n : nw.r;
    HittingSet h = build_nw_hitting_set(table, n, r, nw.t, limits);
    out.table = table;
    out.hitting_set_size = h.size();
    out.value = first_member(h, q);
    if (!out.value) out.diagnostic = "no element of the generator's hitting set lies in " + q.name;
    return out;
}

DerandomizeOutcome derandomize_via_sampled_hardness(const DenseProperty& q, const circuits::BooleanCircuit& target,
                                                    const SampledHardnessConfig& config, RandomSource& rng,
                                                    const Limits& limits) {
    if (target.arity() > config.r) {
        throw InputShapeError("target arity " + std::to_string(target.arity()) + " exceeds generator output length " +
                              std::to_string(config.r));
    }
    if (config.sample_length < 1) throw InputShapeError("samples need at least one bit");
    DerandomizeOutcome out;
    std::optional<circuits::TruthTable> h;
    std::size_t members = 0;
    while (out.draws < config.max_draws && !h) {
        ++out.draws;
        BitString z = rng.bits(config.sample_length);
        if (!q.contains(z)) continue;
        ++members;
        auto candidate = circuits::TruthTable::zero_padded(z);
        if (config.hardness_threshold) {
            if (candidate.arity() > limits.max_oracle_arity) {
                throw ResourceLimitError("certification needs arity <= " + std::to_string(limits.max_oracle_arity));
            }
            if (!circuits::complexity_exceeds(candidate, *config.hardness_threshold, limits)) continue;
        }
        out.sample = z;
        h = candidate;
    }
    if (!h) {
        out.diagnostic = members == 0 ? "no sample in " + q.name + " within " + std::to_string(config.max_draws) + " draws"
                                      : "no sample certified harder than " +
                                            std::to_string(config.hardness_threshold.value_or(0)) + " gates within " +
                                            std::to_string(config.max_draws) + " draws";
        return out;
    }
    if (h->arity() < 1) throw InputShapeError("sampled truth table must have arity at least 1");
    NWGenerator gen(*h, build_design(config.r, h->arity(), std::min(config.t, h->arity()), limits));
    const std::size_t l = gen.seed_length();
    out.seed_length = l;
    if (l > limits.max_seed_bits || l >= 63) {
        throw ResourceLimitError("seed length " + std::to_string(l) + " exceeds the enumeration cap of " +
                                 std::to_string(limits.max_seed_bits));
    }
    const auto accepts = circuits::truth_table(target, limits);
    const std::size_t a = target.arity();
    std::uint64_t accepted = 0;
    for (std::uint64_t seed = 0; seed < (std::uint64_t{1} << l); ++seed) {
        std::size_t index = 0;
        for (std::size_t i = 0; i < a; ++i) index = (index << 1) | static_cast<std::size_t>(gen.output_bit(seed, i));
        accepted += accepts[index];
    }
    out.estimate = Rational(static_cast<std::int64_t>(accepted), std::int64_t{1} << l);
    return out;
}

std::string_view phase_name(Phase p) { return p == Phase::deterministic ? "deterministic" : "probabilistic"; }

TwoPhaseOutcome two_phase_construct(std::size_t n, const DenseProperty& q, std::size_t easy_gates,
                                    const RandomizedProducer& fallback, const NwParams& nw, RandomSource& rng,
                                    const Limits& limits) {
    TwoPhaseOutcome out;
    HittingSet easy = build_easy_hitting_set(n, easy_gates, limits);
    out.easy_set_size = easy.size();
    auto hit = verify_hitting(easy, q);
    if (hit.hit) {
        out.phase = Phase::deterministic;
        out.value = hit.witness;
        return out;
    }
    out.diagnostics.push_back("deterministic: no element of the easy hitting set (" + std::to_string(easy.size()) +
                              " strings) lies in " + q.name);
    out.phase = Phase::probabilistic;
    auto second = pseudodeterministic_construct(fallback, q, n, nw, rng, limits);
    out.nw_set_size = second.hitting_set_size;
    out.value = second.value;
    if (!out.value) out.diagnostics.push_back("probabilistic: " + second.diagnostic);
    return out;
}

}  // namespace hitforge
