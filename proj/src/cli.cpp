#include "hitforge/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hitforge/capp.hpp"
#include "hitforge/circuits.hpp"
#include "hitforge/constructor.hpp"
#include "hitforge/easy_witness.hpp"
#include "hitforge/errors.hpp"
#include "hitforge/nwgen.hpp"
#include "hitforge/properties.hpp"
#include "hitforge/sampler.hpp"

namespace hitforge {

void Report::add(const std::string& key, const std::string& value) {
    std::string clean = value;
    for (char& ch : clean) {
        if (ch == '\n' || ch == '\r') ch = ' ';
    }
    fields_.emplace_back(key, std::move(clean));
}

std::optional<std::string> Report::get(const std::string& key) const {
    for (const auto& [k, v] : fields_) {
        if (k == key) return v;
    }
    return std::nullopt;
}

std::string Report::text() const {
    std::string out;
    for (const auto& [k, v] : fields_) out += k + "=" + v + "\n";
    return out;
}

std::string Report::json() const {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [k, v] : fields_) j[k] = v;
    return j.dump(2) + "\n";
}

Report Report::parse(const std::string& text) {
    Report r;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw FormatError("report line without '=': " + line);
        r.fields_.emplace_back(line.substr(0, eq), line.substr(eq + 1));
    }
    return r;
}

namespace {

constexpr const char* kBottom = "bottom";

struct Options {
    std::size_t n = 0;
    std::optional<std::size_t> gates;
    std::uint64_t seed = 0;
    std::size_t threads = 0;
    std::string report_path;
    std::string json_path;
    std::string out_path;
    std::string property = "primes";
    std::string sample_property = "all";
    std::string scheme = "identity";
    std::string table;
    std::size_t r = 0;
    std::size_t m = 0;
    std::size_t t = 2;
    std::size_t nw_arity = 4;
    std::size_t nw_t = 2;
    std::size_t nw_r = 0;
    std::string fallback;
    std::string producer;
    std::size_t reps = 1;
    std::size_t trials = 0;
    std::string threshold = "3/5";
    std::string circuit_path;
    std::string set_path;
    bool full_cube = false;
    bool exact = false;
    std::size_t samples = 64;
    std::size_t sample_length = 16;
    std::optional<std::size_t> hardness;
    std::string ensemble;
    std::size_t c = 2;
    std::size_t k = 1;
    std::string replay_path;
};

struct Execution {
    Report report;
    int status = kExitSuccess;
    std::string stdout_text;
};

std::string digest(const std::string& data) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char ch : data) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot write '" + path + "'");
    out << content;
}

std::string value_or_bottom(const std::optional<BitString>& v) { return v ? v->str() : kBottom; }

circuits::BooleanCircuit read_circuit(const std::string& path, Report& report) {
    const std::string text = read_file(path);
    report.add("circuit_digest", digest(text));
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) return circuits::parse_circuit(line);
    }
    throw FormatError("no circuit in '" + path + "'");
}

HittingSet read_set(const std::string& path, Report& report) {
    const std::string text = read_file(path);
    report.add("set_digest", digest(text));
    return parse_hitting_set(text);
}

// The hardest level that is cheap to certify at each arity: every table of
// arity <= 2 is within one gate, arity 3 saturates at four.
std::string default_fallback(std::size_t arity) {
    const std::size_t threshold = arity <= 2 ? 0 : arity == 3 ? 3 : 4;
    return "hard-tt:" + std::to_string(arity) + ":" + std::to_string(threshold);
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
    return out;
}

class Runner {
public:
    Runner(const Options& o, bool write_files) : o_(o), write_files_(write_files), limits_(default_limits()) {
        if (o.threads > 0) limits_.threads = o.threads;
    }

    void emit(Execution& ex, const std::string& content, const std::string& summary) {
        ex.report.add("output_digest", digest(content));
        if (o_.out_path.empty()) {
            ex.stdout_text += content;
        } else {
            if (write_files_) write_file(o_.out_path, content);
            ex.stdout_text += summary + "\n";
        }
    }

    void easy_hit(Execution& ex) {
        const std::size_t gates = o_.gates ? *o_.gates : default_easy_gates(o_.n, limits_);
        ex.report.add("n", std::to_string(o_.n));
        ex.report.add("gates", std::to_string(gates));
        ex.report.add("arity", std::to_string(easy_arity(o_.n)));
        auto h = build_easy_hitting_set(o_.n, gates, limits_);
        ex.report.add("count", std::to_string(h.size()));
        emit(ex, format_hitting_set(h), "count=" + std::to_string(h.size()));
    }

    void nw_hit(Execution& ex) {
        auto tt = circuits::TruthTable::zero_padded(BitString::parse(o_.table));
        if (tt.bits().size() != o_.table.size()) throw InputShapeError("truth table length must be a power of two");
        const std::size_t r = o_.r == 0 ? o_.n : o_.r;
        const std::size_t t = std::min(o_.t, tt.arity());
        ex.report.add("n", std::to_string(o_.n));
        ex.report.add("table", o_.table);
        ex.report.add("r", std::to_string(r));
        ex.report.add("t", std::to_string(t));
        if (r < o_.n) throw InputShapeError("--r must be at least --n");
        NWGenerator gen(tt, build_design(r, tt.arity(), t, limits_));
        ex.report.add("l", std::to_string(gen.seed_length()));
        auto h = build_nw_hitting_set(gen, o_.n, limits_);
        ex.report.add("count", std::to_string(h.size()));
        emit(ex, format_hitting_set(h), "count=" + std::to_string(h.size()));
    }

    void design(Execution& ex) {
        ex.report.add("r", std::to_string(o_.r));
        ex.report.add("m", std::to_string(o_.m));
        ex.report.add("t", std::to_string(o_.t));
        auto d = build_design(o_.r, o_.m, o_.t, limits_);
        ex.report.add("l", std::to_string(d.universe_size));
        emit(ex, format_design(d), "l=" + std::to_string(d.universe_size));
    }

    void construct(Execution& ex, const DenseProperty& q) {
        const std::size_t gates = o_.gates ? *o_.gates : default_easy_gates(o_.n, limits_);
        const std::string fallback_spec = o_.fallback.empty() ? default_fallback(o_.nw_arity) : o_.fallback;
        NwParams nw{o_.nw_arity, o_.nw_r, o_.nw_t};
        ex.report.add("n", std::to_string(o_.n));
        ex.report.add("property", q.name);
        ex.report.add("gates", std::to_string(gates));
        ex.report.add("fallback", fallback_spec);
        ex.report.add("nw_arity", std::to_string(nw.arity));
        ex.report.add("nw_r", std::to_string(nw.r == 0 ? o_.n : nw.r));
        ex.report.add("nw_t", std::to_string(nw.t));
        auto fallback = parse_producer(fallback_spec, limits_);
        RandomSource rng(o_.seed);
        auto result = two_phase_construct(o_.n, q, gates, fallback, nw, rng, limits_);
        ex.report.add("phase", std::string(phase_name(result.phase)));
        ex.report.add("canonical_value", value_or_bottom(result.value));
        ex.report.add("easy_set_size", std::to_string(result.easy_set_size));
        ex.report.add("nw_set_size", std::to_string(result.nw_set_size));
        ex.report.add("diagnostics", join(result.diagnostics, "; "));
        ex.stdout_text += value_or_bottom(result.value) + "\n";
        if (!result.value) ex.status = kExitBottom;
    }

    void vote(Execution& ex, bool purifier) {
        auto producer = parse_producer(o_.producer, limits_);
        if (producer.output_length && producer.output_length(o_.n) != o_.n) {
            throw InputShapeError("producer " + producer.name + " emits " +
                                  std::to_string(producer.output_length(o_.n)) + " bits, not " + std::to_string(o_.n));
        }
        RandomSource rng(o_.seed);
        ex.report.add("producer", o_.producer);
        ex.report.add("n", std::to_string(o_.n));
        VoteOutcome v;
        if (purifier) {
            PurifierConfig config;
            if (o_.trials > 0) config.trials = o_.trials;
            config.threshold = parse_rational(o_.threshold);
            ex.report.add("threshold", to_string(config.threshold));
            v = purify(producer, o_.n, rng, config, limits_);
        } else {
            ex.report.add("reps", std::to_string(o_.reps));
            v = amplify_votes(producer, o_.n, o_.reps, rng, limits_);
        }
        ex.report.add("canonical_value", value_or_bottom(v.value));
        ex.report.add("trials", std::to_string(v.trial_count));
        ex.report.add("winner_count", std::to_string(v.winner_count));
        ex.stdout_text += value_or_bottom(v.value) + "\n";
        if (!v.value) ex.status = kExitBottom;
    }

    void derandomize(Execution& ex) {
        auto target = read_circuit(o_.circuit_path, ex.report);
        auto q = resolve_property(o_.sample_property, o_.scheme);
        SampledHardnessConfig config;
        config.sample_length = o_.sample_length;
        config.max_draws = o_.samples;
        config.hardness_threshold = o_.hardness;
        config.r = o_.r == 0 ? std::max<std::size_t>(8, target.arity()) : o_.r;
        config.t = o_.t;
        ex.report.add("property", q.name);
        ex.report.add("samples", std::to_string(config.max_draws));
        ex.report.add("sample_length", std::to_string(config.sample_length));
        ex.report.add("hardness", config.hardness_threshold ? std::to_string(*config.hardness_threshold) : "none");
        ex.report.add("r", std::to_string(config.r));
        ex.report.add("t", std::to_string(config.t));
        RandomSource rng(o_.seed);
        auto result = derandomize_via_sampled_hardness(q, target, config, rng, limits_);
        const std::string estimate = result.estimate ? to_string(*result.estimate) : kBottom;
        ex.report.add("estimate", estimate);
        ex.report.add("sample", value_or_bottom(result.sample));
        ex.report.add("draws", std::to_string(result.draws));
        ex.report.add("seed_length", std::to_string(result.seed_length));
        ex.report.add("diagnostics", result.diagnostic);
        ex.stdout_text += estimate + "\n";
        if (!result.estimate) ex.status = kExitBottom;
    }

    void capp(Execution& ex) {
        auto circuit = read_circuit(o_.circuit_path, ex.report);
        CappEstimate e;
        if (!o_.set_path.empty()) {
            e = capp_estimate(circuit, read_set(o_.set_path, ex.report), limits_);
        } else if (o_.full_cube) {
            e = capp_estimate(circuit, HittingSet::full_cube(circuit.arity()), limits_);
        } else {
            e = {exact_acceptance(circuit, limits_), CappMethod::exact, std::nullopt};
        }
        ex.report.add("method", std::string(capp_method_name(e.method)));
        ex.report.add("set_provenance", e.set_provenance ? std::string(provenance_name(*e.set_provenance)) : "none");
        ex.report.add("value", to_string(e.value));
        ex.stdout_text += to_string(e.value) + "\n";
    }

    void discrepancy_cmd(Execution& ex) {
        auto h = read_set(o_.set_path, ex.report);
        auto q = resolve_property(o_.property, o_.scheme);
        const std::size_t n = o_.n == 0 ? h.n() : o_.n;
        ex.report.add("property", q.name);
        ex.report.add("n", std::to_string(n));
        auto d = discrepancy(h, q, n, limits_);
        ex.report.add("value", to_string(d));
        ex.stdout_text += to_string(d) + "\n";
    }

    void density_cmd(Execution& ex) {
        auto q = resolve_property(o_.property, o_.scheme);
        ex.report.add("property", q.name);
        ex.report.add("n", std::to_string(o_.n));
        auto d = density(q, o_.n, limits_);
        ex.report.add("value", to_string(d));
        ex.report.add("count", std::to_string((d * Rational(std::int64_t{1} << o_.n)).numerator()));
        if (auto claim = q.claim(o_.n)) {
            ex.report.add("claimed_density", to_string(*claim));
            ex.report.add("claim_holds", d >= *claim ? "yes" : "no");
        } else {
            ex.report.add("claimed_density", "none");
        }
        ex.stdout_text += to_string(d) + "\n";
    }

    void sample_canonical(Execution& ex) {
        auto e = resolve_ensemble(o_.ensemble, o_.c, o_.k);
        CanonicalSampleConfig config;
        config.easy_gates = o_.gates.value_or(2);
        const std::string fallback_spec = o_.fallback.empty() ? default_fallback(o_.nw_arity) : o_.fallback;
        config.fallback = parse_producer(fallback_spec, limits_);
        config.nw = {o_.nw_arity, o_.nw_r, o_.nw_t};
        ex.report.add("ensemble", e.name);
        ex.report.add("n", std::to_string(o_.n));
        ex.report.add("c", std::to_string(e.c));
        ex.report.add("k", std::to_string(e.k));
        ex.report.add("gates", std::to_string(config.easy_gates));
        ex.report.add("fallback", fallback_spec);
        ex.report.add("nw_arity", std::to_string(config.nw.arity));
        ex.report.add("nw_t", std::to_string(config.nw.t));
        RandomSource rng(o_.seed);
        auto result = canonical_sample(e, o_.n, config, rng, limits_);
        std::vector<std::string> attempts;
        for (const auto& a : result.attempts) {
            std::string s = std::to_string(a.m) + ":" + (a.phase ? std::string(phase_name(*a.phase)) : "error") + ":" +
                            value_or_bottom(a.value);
            if (!a.diagnostic.empty() && !a.value) s += " (" + a.diagnostic + ")";
            attempts.push_back(s);
        }
        ex.report.add("chosen_length", result.chosen_length ? std::to_string(*result.chosen_length) : "none");
        ex.report.add("canonical_value", value_or_bottom(result.sample));
        ex.report.add("attempts", join(attempts, "; "));
        ex.stdout_text += value_or_bottom(result.sample) + "\n";
        if (!result.sample) ex.status = kExitBottom;
    }

    void verify_hit(Execution& ex) {
        auto h = read_set(o_.set_path, ex.report);
        auto q = resolve_property(o_.property, o_.scheme);
        ex.report.add("property", q.name);
        ex.report.add("n", std::to_string(h.n()));
        auto result = verify_hitting(h, q);
        ex.report.add("hit", result.hit ? "yes" : "no");
        ex.report.add("witness", value_or_bottom(result.witness));
        ex.stdout_text += (result.hit ? result.witness->str() : std::string("miss")) + "\n";
        if (!result.hit) ex.status = kExitBottom;
    }

private:
    const Options& o_;
    bool write_files_;
    Limits limits_;
};

struct Parsed {
    Options options;
    std::string command;
};

// Builds the parser; `o` receives the option values.
std::unique_ptr<CLI::App> make_app(Options& o) {
    auto app = std::make_unique<CLI::App>("Pseudodeterministic constructions at desk scale", "hitforge");
    app->require_subcommand(1);
    app->set_version_flag("--version", kToolVersion);

    auto common = [&o](CLI::App* sub) {
        sub->add_option("--seed", o.seed, "Seed of the random source");
        sub->add_option("--threads", o.threads, "Worker threads (default 1)");
        sub->add_option("--report", o.report_path, "Write the key=value report here ('-' for stdout)");
        sub->add_option("--json", o.json_path, "Write the JSON report here");
    };
    auto nw_options = [&o](CLI::App* sub) {
        sub->add_option("--fallback", o.fallback, "Truth-table producer for the second phase");
        sub->add_option("--nw-arity", o.nw_arity, "Arity of the hard truth table");
        sub->add_option("--nw-t", o.nw_t, "Maximum design intersection");
        sub->add_option("--nw-r", o.nw_r, "Generator output length (default n)");
    };

    auto* easy = app->add_subcommand("easy-hit", "Easy-witness hitting set");
    easy->add_option("--n", o.n, "String length")->required();
    easy->add_option("--gates", o.gates, "Gate bound (default: smallest covering bound)");
    easy->add_option("--out", o.out_path, "Hitting-set file to write");
    common(easy);

    auto* nw = app->add_subcommand("nw-hit", "Hitting set from the NW generator of a truth table");
    nw->add_option("--n", o.n, "String length")->required();
    nw->add_option("--table", o.table, "Hard truth table as a bit string")->required();
    nw->add_option("--r", o.r, "Generator output length (default n)");
    nw->add_option("--t", o.t, "Maximum design intersection");
    nw->add_option("--out", o.out_path, "Hitting-set file to write");
    common(nw);

    auto* design = app->add_subcommand("design", "Greedy combinatorial design");
    design->add_option("--r", o.r, "Number of sets")->required();
    design->add_option("--m", o.m, "Set size")->required();
    design->add_option("--t", o.t, "Maximum pairwise intersection");
    design->add_option("--out", o.out_path, "Design file to write");
    common(design);

    auto* prime = app->add_subcommand("construct-prime", "Two-phase construction of an n-bit prime");
    prime->add_option("--n", o.n, "Bit length")->required();
    prime->add_option("--gates", o.gates, "Easy hitting-set gate bound (default: smallest covering bound)");
    nw_options(prime);
    common(prime);

    auto* construct = app->add_subcommand("construct", "Two-phase construction for any property");
    construct->add_option("--n", o.n, "Length")->required();
    construct->add_option("--property", o.property, "primes, all, none, incompressible, or a program");
    construct->add_option("--scheme", o.scheme, "Compression scheme for incompressible");
    construct->add_option("--gates", o.gates, "Easy hitting-set gate bound (default: smallest covering bound)");
    nw_options(construct);
    common(construct);

    auto* pur = app->add_subcommand("purify", "Run a producer n^2 times and keep a >threshold majority");
    pur->add_option("--producer", o.producer, "Producer specification")->required();
    pur->add_option("--n", o.n, "Length")->required();
    pur->add_option("--trials", o.trials, "Number of runs (default n^2)");
    pur->add_option("--threshold", o.threshold, "Majority threshold (default 3/5)");
    common(pur);

    auto* amp = app->add_subcommand("amplify", "Plurality vote over repeated runs");
    amp->add_option("--producer", o.producer, "Producer specification")->required();
    amp->add_option("--n", o.n, "Length")->required();
    amp->add_option("--reps", o.reps, "Number of runs")->required();
    common(amp);

    auto* der = app->add_subcommand("derandomize", "Estimate acceptance with a generator built from a sampled table");
    der->add_option("--circuit", o.circuit_path, "Circuit file")->required();
    der->add_option("--property", o.sample_property, "Property the sample must satisfy (default all)");
    der->add_option("--scheme", o.scheme, "Compression scheme for incompressible");
    der->add_option("--samples", o.samples, "Maximum number of draws");
    der->add_option("--sample-length", o.sample_length, "Length of each sample");
    der->add_option("--hardness", o.hardness, "Certify complexity above this many gates");
    der->add_option("--r", o.r, "Generator output length (default max(8, arity))");
    der->add_option("--t", o.t, "Maximum design intersection");
    common(der);

    auto* cap = app->add_subcommand("capp", "Acceptance probability of a circuit");
    cap->add_option("--circuit", o.circuit_path, "Circuit file")->required();
    auto* set_opt = cap->add_option("--set", o.set_path, "Estimate over a hitting-set file");
    cap->add_flag("--full-cube", o.full_cube, "Estimate over all inputs")->excludes(set_opt);
    cap->add_flag("--exact", o.exact, "Exact acceptance (the default)");
    common(cap);

    auto* disc = app->add_subcommand("discrepancy", "Exact discrepancy of a hitting set for a property");
    disc->add_option("--set", o.set_path, "Hitting-set file")->required();
    disc->add_option("--property", o.property, "Property");
    disc->add_option("--scheme", o.scheme, "Compression scheme for incompressible");
    disc->add_option("--n", o.n, "Length (default: the set's)");
    common(disc);

    auto* dens = app->add_subcommand("density", "Exact density of a property");
    dens->add_option("--property", o.property, "Property");
    dens->add_option("--scheme", o.scheme, "Compression scheme for incompressible");
    dens->add_option("--n", o.n, "Length")->required();
    common(dens);

    auto* samp = app->add_subcommand("sample-canonical", "Canonical sample from a samplable ensemble");
    samp->add_option("--ensemble", o.ensemble, "first-bit, sparse-prefix, or a program")->required();
    samp->add_option("--n", o.n, "Target length")->required();
    samp->add_option("--c", o.c, "Randomness exponent of a plug-in");
    samp->add_option("--k", o.k, "Failure exponent of a plug-in");
    samp->add_option("--gates", o.gates, "Easy hitting-set gate bound (default 2)");
    nw_options(samp);
    common(samp);

    auto* ver = app->add_subcommand("verify-hit", "First element of a hitting set in a property");
    ver->add_option("--set", o.set_path, "Hitting-set file")->required();
    ver->add_option("--property", o.property, "Property");
    ver->add_option("--scheme", o.scheme, "Compression scheme for incompressible");
    common(ver);

    auto* rep = app->add_subcommand("replay", "Re-execute a report and compare");
    rep->add_option("report", o.replay_path, "Report file")->required();

    return app;
}

std::string args_json(const std::vector<std::string>& args) { return nlohmann::json(args).dump(); }

Execution execute(const std::string& command, const Options& o, const std::vector<std::string>& args,
                  bool write_files) {
    Execution ex;
    ex.report.add("tool_version", kToolVersion);
    ex.report.add("command", command);
    ex.report.add("args", args_json(args));
    ex.report.add("rng_seed", std::to_string(o.seed));
    Runner run(o, write_files);
    if (command == "easy-hit") run.easy_hit(ex);
    else if (command == "nw-hit") run.nw_hit(ex);
    else if (command == "design") run.design(ex);
    else if (command == "construct-prime") run.construct(ex, primes_property());
    else if (command == "construct") run.construct(ex, resolve_property(o.property, o.scheme));
    else if (command == "purify") run.vote(ex, true);
    else if (command == "amplify") run.vote(ex, false);
    else if (command == "derandomize") run.derandomize(ex);
    else if (command == "capp") run.capp(ex);
    else if (command == "discrepancy") run.discrepancy_cmd(ex);
    else if (command == "density") run.density_cmd(ex);
    else if (command == "sample-canonical") run.sample_canonical(ex);
    else if (command == "verify-hit") run.verify_hit(ex);
    else throw InputShapeError("unknown command " + command);
    ex.report.add("exit_status", std::to_string(ex.status));
    return ex;
}

// Parses args; throws CLI::ParseError on usage errors.
Parsed parse_args(const std::vector<std::string>& args, Options& o, std::unique_ptr<CLI::App>& app) {
    app = make_app(o);
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app->parse(std::move(reversed));
    Parsed p;
    for (auto* sub : app->get_subcommands()) p.command = sub->get_name();
    p.options = o;
    return p;
}

int status_for(const std::exception& e) {
    if (dynamic_cast<const ResourceLimitError*>(&e)) return kExitResource;
    if (dynamic_cast<const FormatError*>(&e) || dynamic_cast<const InputShapeError*>(&e)) return kExitUsage;
    return kExitFailure;
}

}  // namespace

ReplayVerdict replay_report(const std::string& report_text) {
    const Report recorded = Report::parse(report_text);
    const auto version = recorded.get("tool_version");
    if (!version) throw FormatError("report has no tool_version");
    if (*version != kToolVersion) {
        throw IncompatibleVersionError("report was produced by version " + *version + ", this is " + kToolVersion);
    }
    const auto args_text = recorded.get("args");
    if (!args_text) throw FormatError("report has no args");
    std::vector<std::string> args;
    try {
        args = nlohmann::json::parse(*args_text).get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("report args are not a JSON string list: ") + e.what());
    }
    Options o;
    std::unique_ptr<CLI::App> app;
    Parsed parsed;
    try {
        parsed = parse_args(args, o, app);
    } catch (const CLI::ParseError& e) {
        throw FormatError(std::string("recorded args do not parse: ") + e.what());
    }
    if (parsed.command == "replay") throw FormatError("a replay cannot be replayed");
    const Execution fresh = execute(parsed.command, parsed.options, args, false);

    ReplayVerdict verdict;
    const auto& a = recorded.fields();
    const auto& b = fresh.report.fields();
    for (std::size_t i = 0; i < std::max(a.size(), b.size()); ++i) {
        const std::string key_a = i < a.size() ? a[i].first : "";
        const std::string key_b = i < b.size() ? b[i].first : "";
        const std::string val_a = i < a.size() ? a[i].second : "";
        const std::string val_b = i < b.size() ? b[i].second : "";
        if (key_a != key_b || val_a != val_b) {
            verdict.identical = false;
            verdict.field = key_a.empty() ? key_b : key_a;
            verdict.recorded = i < a.size() ? key_a + "=" + val_a : "(missing)";
            verdict.replayed = i < b.size() ? key_b + "=" + val_b : "(missing)";
            break;
        }
    }
    return verdict;
}

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    std::unique_ptr<CLI::App> app;
    Parsed parsed;
    try {
        parsed = parse_args(args, o, app);
    } catch (const CLI::CallForHelp&) {
        out << app->help();
        return kExitSuccess;
    } catch (const CLI::CallForAllHelp&) {
        out << app->help("", CLI::AppFormatMode::All);
        return kExitSuccess;
    } catch (const CLI::CallForVersion&) {
        out << kToolVersion << "\n";
        return kExitSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app->help();
        return kExitUsage;
    }

    try {
        if (parsed.command == "replay") {
            auto verdict = replay_report(read_file(parsed.options.replay_path));
            if (verdict.identical) {
                out << "identical\n";
                return kExitSuccess;
            }
            out << "divergent field=" << verdict.field << "\n"
                << "  recorded: " << verdict.recorded << "\n"
                << "  replayed: " << verdict.replayed << "\n";
            return kExitBottom;
        }
        Execution ex = execute(parsed.command, parsed.options, args, true);
        out << ex.stdout_text;
        const std::string text = ex.report.text();
        if (parsed.options.report_path == "-") out << text;
        else if (!parsed.options.report_path.empty()) write_file(parsed.options.report_path, text);
        if (!parsed.options.json_path.empty()) write_file(parsed.options.json_path, ex.report.json());
        return ex.status;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return status_for(e);
    }
}

}  // namespace hitforge
