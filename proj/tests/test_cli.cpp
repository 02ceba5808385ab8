#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hitforge/capp.hpp"
#include "hitforge/cli.hpp"
#include "hitforge/constructor.hpp"
#include "hitforge/easy_witness.hpp"
#include "hitforge/errors.hpp"
#include "hitforge/nwgen.hpp"
#include "hitforge/process.hpp"
#include "oracles.hpp"

using namespace hitforge;
namespace fs = std::filesystem;

namespace {

struct Run {
    int status;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int status = run_command(args, out, err);
    return {status, out.str(), err.str()};
}

class TempDir {
public:
    TempDir() {
        static int counter = 0;
        path_ = fs::temp_directory_path() / ("hitforge_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    fs::path path_;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& content) { std::ofstream(path) << content; }

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

const std::string kAnd2 = "k=2;g=AND(0,1);out=4\n";

}  // namespace

TEST_CASE("easy-hit writes a parseable set and a report") {
    TempDir dir;
    auto r = run({"easy-hit", "--n", "8", "--gates", "6", "--out", dir.file("h.txt"), "--report", dir.file("r.txt")});
    CHECK(r.status == kExitSuccess);
    const auto h = parse_hitting_set(slurp(dir.file("h.txt")));
    CHECK(h.n() == 8);
    CHECK(h.provenance() == Provenance::easy);
    CHECK(h.elements() == build_easy_hitting_set(8, 6).elements());
    const auto report = Report::parse(slurp(dir.file("r.txt")));
    CHECK(report.get("command") == "easy-hit");
    CHECK(report.get("count") == std::to_string(h.size()));
    CHECK(report.get("exit_status") == "0");
}

TEST_CASE("easy-hit to stdout at n = 2 without gates") {
    auto r = run({"easy-hit", "--n", "2", "--gates", "0"});
    CHECK(r.status == kExitSuccess);
    const auto h = parse_hitting_set(r.out);
    std::vector<std::string> xs;
    for (const auto& x : h.elements()) xs.push_back(x.str());
    CHECK(xs == std::vector<std::string>{"00", "01", "11"});
}

TEST_CASE("construct-prime at n = 8 matches the sieve's least 8-bit prime") {
    auto r = run({"construct-prime", "--n", "8", "--gates", "4", "--seed", "3"});
    CHECK(r.status == kExitSuccess);
    CHECK(first_line(r.out) == BitString::from_uint(oracle::least_prime_with_bit_length(oracle::sieve(256), 8), 8).str());
    CHECK(first_line(r.out) == "10000011");
}

TEST_CASE("construct-prime equals the library call") {
    for (std::size_t n : {5, 9, 11}) {
        const std::size_t gates = default_easy_gates(n);
        RandomSource rng(0);
        const auto lib = two_phase_construct(n, primes_property(), gates, hard_table_producer(4, 4), {4, 0, 2}, rng);
        auto r = run({"construct-prime", "--n", std::to_string(n), "--report", "-"});
        REQUIRE(lib.value);
        CHECK(first_line(r.out) == lib.value->str());
        CHECK(r.out.find("gates=" + std::to_string(gates) + "\n") != std::string::npos);
    }
}

TEST_CASE("construct with an empty property is bottom with exit 1") {
    auto r = run({"construct", "--n", "4", "--property", "none", "--gates", "1", "--report", "-"});
    CHECK(r.status == kExitBottom);
    CHECK(first_line(r.out) == "bottom");
    CHECK(r.out.find("phase=probabilistic") != std::string::npos);
}

TEST_CASE("capp on the two-input AND") {
    TempDir dir;
    spit(dir.file("c.txt"), kAnd2);
    auto full = run({"capp", "--circuit", dir.file("c.txt"), "--full-cube", "--report", "-"});
    CHECK(full.status == kExitSuccess);
    CHECK(first_line(full.out) == "1/4");
    CHECK(full.out.find("method=set-based") != std::string::npos);
    auto exact = run({"capp", "--circuit", dir.file("c.txt"), "--exact"});
    CHECK(first_line(exact.out) == "1/4");
    run({"easy-hit", "--n", "2", "--gates", "1", "--out", dir.file("h.txt")});
    auto set = run({"capp", "--circuit", dir.file("c.txt"), "--set", dir.file("h.txt")});
    const auto lib = capp_estimate(circuits::parse_circuit("k=2;g=AND(0,1);out=4"), build_easy_hitting_set(2, 1));
    CHECK(first_line(set.out) == to_string(lib.value));
}

TEST_CASE("density and discrepancy") {
    auto d = run({"density", "--property", "primes", "--n", "8", "--report", "-"});
    CHECK(first_line(d.out) == "23/256");
    CHECK(d.out.find("count=23\n") != std::string::npos);
    CHECK(d.out.find("claim_holds=yes") != std::string::npos);

    TempDir dir;
    spit(dir.file("h.txt"), format_hitting_set(HittingSet(4, {BitString::parse("1111")}, Provenance::file)));
    auto disc = run({"discrepancy", "--set", dir.file("h.txt"), "--property", "primes"});
    CHECK(disc.status == kExitSuccess);
    CHECK(first_line(disc.out) == "1/8");  // two 4-bit primes, 11 and 13
}

TEST_CASE("verify-hit reports the witness or a miss") {
    TempDir dir;
    spit(dir.file("h.txt"), format_hitting_set(HittingSet(4, {BitString::parse("1111"), BitString::parse("1011")},
                                                          Provenance::file)));
    auto hit = run({"verify-hit", "--set", dir.file("h.txt"), "--property", "primes"});
    CHECK(hit.status == kExitSuccess);
    CHECK(first_line(hit.out) == "1011");
    auto miss = run({"verify-hit", "--set", dir.file("h.txt"), "--property", "none"});
    CHECK(miss.status == kExitBottom);
    CHECK(first_line(miss.out) == "miss");
}

TEST_CASE("design matches the library") {
    auto r = run({"design", "--r", "4", "--m", "2", "--t", "1"});
    CHECK(r.status == kExitSuccess);
    const auto d = parse_design(r.out);
    CHECK(d == build_design(4, 2, 1));
    CHECK(d.universe_size == 4);
}

TEST_CASE("nw-hit matches the library") {
    auto r = run({"nw-hit", "--n", "4", "--table", "0110", "--t", "1"});
    CHECK(r.status == kExitSuccess);
    const auto h = parse_hitting_set(r.out);
    const auto lib = build_nw_hitting_set(circuits::TruthTable(2, BitString::parse("0110")), 4, 4, 1);
    CHECK(h.elements() == lib.elements());
    CHECK(h.provenance() == Provenance::nw);
}

TEST_CASE("purify and amplify") {
    auto p = run({"purify", "--producer", "constant:1011", "--n", "4", "--seed", "1"});
    CHECK(p.status == kExitSuccess);
    CHECK(first_line(p.out) == "1011");
    auto a = run({"amplify", "--producer", "noisy:1011:9/10", "--n", "4", "--reps", "31", "--seed", "2"});
    CHECK(first_line(a.out) == "1011");
    auto bad = run({"purify", "--producer", "constant:1011", "--n", "3"});
    CHECK(bad.status == kExitUsage);
}

TEST_CASE("sample-canonical runs both ensembles") {
    auto fb = run({"sample-canonical", "--ensemble", "first-bit", "--n", "3", "--report", "-"});
    CHECK(fb.status == kExitSuccess);
    CHECK(fb.out.find("chosen_length=9") != std::string::npos);
    auto sp = run({"sample-canonical", "--ensemble", "sparse-prefix", "--n", "2", "--gates", "0", "--fallback",
                   "purified:400:noisy:0110100110010110:2/3", "--seed", "4"});
    CHECK(sp.status == kExitSuccess);
    CHECK(first_line(sp.out).size() == 2);
}

TEST_CASE("derandomize recovers the acceptance of a constant circuit") {
    TempDir dir;
    spit(dir.file("c.txt"), "k=3;g=XOR(0,4);g=XOR(5,0);out=6\n");  // (not x1) xor x1
    auto r = run({"derandomize", "--circuit", dir.file("c.txt"), "--seed", "1"});
    CHECK(r.status == kExitSuccess);
    CHECK(first_line(r.out) == "1/1");
}

TEST_CASE("usage errors exit 2") {
    CHECK(run({"no-such-command"}).status == kExitUsage);
    CHECK(run({}).status == kExitUsage);
    CHECK(run({"easy-hit"}).status == kExitUsage);
    CHECK(run({"easy-hit", "--n", "abc"}).status == kExitUsage);
    TempDir dir;
    spit(dir.file("bad.txt"), "k=2;g=FROB(0,1);out=4\n");
    CHECK(run({"capp", "--circuit", dir.file("bad.txt")}).status == kExitUsage);
    CHECK(run({"capp", "--circuit", dir.file("missing.txt")}).status == kExitUsage);
}

TEST_CASE("resource limits exit 3") {
    CHECK(run({"density", "--property", "all", "--n", "40"}).status == kExitResource);
    CHECK(run({"easy-hit", "--n", "40", "--gates", "9"}).status == kExitResource);
}

TEST_CASE("help and version exit 0") {
    CHECK(run({"--help"}).status == kExitSuccess);
    auto v = run({"--version"});
    CHECK(v.status == kExitSuccess);
    CHECK(first_line(v.out) == kToolVersion);
}

TEST_CASE("report header fields come first and in order") {
    auto r = run({"density", "--n", "5", "--seed", "9", "--report", "-"});
    const auto report = Report::parse(r.out.substr(r.out.find('\n') + 1));
    const auto& f = report.fields();
    REQUIRE(f.size() > 5);
    CHECK(f[0].first == "tool_version");
    CHECK(f[1].first == "command");
    CHECK(f[2].first == "args");
    CHECK(f[3].first == "rng_seed");
    CHECK(f[3].second == "9");
    CHECK(f.back().first == "exit_status");
}

TEST_CASE("JSON report carries the same fields in the same order") {
    TempDir dir;
    run({"construct-prime", "--n", "6", "--report", dir.file("r.txt"), "--json", dir.file("r.json")});
    const auto text = Report::parse(slurp(dir.file("r.txt")));
    const auto j = nlohmann::ordered_json::parse(slurp(dir.file("r.json")));
    std::size_t i = 0;
    REQUIRE(j.size() == text.fields().size());
    for (auto it = j.begin(); it != j.end(); ++it, ++i) {
        CHECK(it.key() == text.fields()[i].first);
        CHECK(it.value().get<std::string>() == text.fields()[i].second);
    }
}

TEST_CASE("replay of an unedited report is identical") {
    TempDir dir;
    spit(dir.file("c.txt"), kAnd2);
    const std::vector<std::vector<std::string>> commands = {
        {"construct-prime", "--n", "8", "--seed", "5"},
        {"easy-hit", "--n", "6", "--out", dir.file("h.txt")},
        {"capp", "--circuit", dir.file("c.txt"), "--full-cube"},
        {"purify", "--producer", "noisy:10110:2/3", "--n", "5", "--seed", "11"},
        {"sample-canonical", "--ensemble", "first-bit", "--n", "2"},
        {"density", "--property", "primes", "--n", "10"},
    };
    int k = 0;
    for (auto args : commands) {
        const std::string path = dir.file("r" + std::to_string(k++) + ".txt");
        args.insert(args.end(), {"--report", path});
        run(args);
        const auto verdict = replay_report(slurp(path));
        CHECK_MESSAGE(verdict.identical, args[0] << " diverged at " << verdict.field);
        auto r = run({"replay", path});
        CHECK(r.status == kExitSuccess);
        CHECK(first_line(r.out) == "identical");
    }
}

TEST_CASE("replay flags an edited field") {
    TempDir dir;
    run({"construct-prime", "--n", "8", "--seed", "5", "--report", dir.file("r.txt")});
    std::string text = slurp(dir.file("r.txt"));
    const auto pos = text.find("rng_seed=5");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 10, "rng_seed=6");
    spit(dir.file("edited.txt"), text);
    const auto verdict = replay_report(text);
    CHECK_FALSE(verdict.identical);
    CHECK(verdict.field == "rng_seed");
    auto r = run({"replay", dir.file("edited.txt")});
    CHECK(r.status == kExitBottom);
    CHECK(first_line(r.out) == "divergent field=rng_seed");

    std::string value_edit = slurp(dir.file("r.txt"));
    const auto v = value_edit.find("canonical_value=10000011");
    REQUIRE(v != std::string::npos);
    value_edit.replace(v, 24, "canonical_value=10000101");
    CHECK(replay_report(value_edit).field == "canonical_value");
}

TEST_CASE("replay refuses reports from another version") {
    TempDir dir;
    run({"density", "--n", "4", "--report", dir.file("r.txt")});
    std::string text = slurp(dir.file("r.txt"));
    text.replace(text.find(kToolVersion), std::string(kToolVersion).size(), "9.9.9");
    CHECK_THROWS_AS(replay_report(text), IncompatibleVersionError);
    spit(dir.file("old.txt"), text);
    CHECK(run({"replay", dir.file("old.txt")}).status == kExitFailure);
    CHECK_THROWS_AS(replay_report("garbage"), FormatError);
}

TEST_CASE("the installed binary agrees with run_command") {
    const auto bin = run_process(HITFORGE_CLI_PATH, {"construct-prime", "--n", "8", "--gates", "4"}, "");
    CHECK(bin.exit_status == 0);
    CHECK(first_line(bin.standard_output) == "10000011");
    const auto usage = run_process(HITFORGE_CLI_PATH, {"frobnicate"}, "");
    CHECK(usage.exit_status == kExitUsage);
    const auto resource = run_process(HITFORGE_CLI_PATH, {"density", "--n", "40", "--property", "all"}, "");
    CHECK(resource.exit_status == kExitResource);
}

TEST_CASE("plug-in property through the CLI") {
    const std::string plugin = std::string(HITFORGE_TEST_DATA) + "/odd_parity.sh";
    auto r = run({"density", "--property", plugin, "--n", "6"});
    CHECK(r.status == kExitSuccess);
    CHECK(first_line(r.out) == "1/2");
    auto broken = run({"density", "--property", std::string(HITFORGE_TEST_DATA) + "/exit_three.sh", "--n", "3"});
    CHECK(broken.status == kExitFailure);
}
