#include "hitforge/properties.hpp"

#include <array>
#include <sstream>
#include <system_error>
#include <thread>
#include <unordered_map>

#include "hitforge/errors.hpp"
#include "hitforge/process.hpp"

namespace hitforge {

namespace {

constexpr std::size_t kBatchChunk = 4096;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    std::uint64_t result = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1U) result = mul_mod(result, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return result;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

std::string join_lines(const std::vector<BitString>& xs) {
    std::string text;
    for (const auto& x : xs) {
        text += x.str();
        text += '\n';
    }
    return text;
}

ProcessResult run_plugin(const std::string& program, const std::vector<std::string>& args,
                         const std::string& input) {
    try {
        return run_process(program, args, input);
    } catch (const std::system_error& e) {
        throw PropertyError("plug-in " + program + ": " + e.what());
    }
}

}  // namespace

bool DenseProperty::contains(const BitString& x) const {
    try {
        return membership(x);
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw PropertyError("property " + name + " failed on " + x.str() + ": " + e.what());
    }
}

std::vector<bool> DenseProperty::contains_all(const std::vector<BitString>& xs) const {
    if (batch_membership) {
        std::vector<bool> out;
        try {
            out = batch_membership(xs);
        } catch (const Error&) {
            throw;
        } catch (const std::exception& e) {
            throw PropertyError("property " + name + " failed: " + e.what());
        }
        if (out.size() != xs.size()) throw PropertyError("property " + name + " returned the wrong number of answers");
        return out;
    }
    std::vector<bool> out;
    out.reserve(xs.size());
    for (const auto& x : xs) out.push_back(contains(x));
    return out;
}

bool is_prime_u64(std::uint64_t value) {
    if (value < 2) return false;
    static constexpr std::array<std::uint64_t, 12> kWitnesses = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (auto p : kWitnesses) {
        if (value % p == 0) return value == p;
    }
    std::uint64_t d = value - 1;
    unsigned s = 0;
    while ((d & 1U) == 0) {
        d >>= 1;
        ++s;
    }
    for (auto a : kWitnesses) {
        std::uint64_t x = pow_mod(a, d, value);
        if (x == 1 || x == value - 1) continue;
        bool composite = true;
        for (unsigned i = 1; i < s; ++i) {
            x = mul_mod(x, x, value);
            if (x == value - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

bool primes_membership(const BitString& x) {
    if (x.size() > 64) throw ResourceLimitError("primality is supported up to 64 bits");
    if (x.empty() || !x[0]) return false;
    return is_prime_u64(x.to_uint());
}

DenseProperty primes_property() {
    DenseProperty q;
    q.name = "primes";
    q.membership = primes_membership;
    q.claimed_density = [](std::size_t n) -> std::optional<Rational> {
        if (n == 0) return std::nullopt;
        return Rational(1, static_cast<std::int64_t>(2 * n));
    };
    return q;
}

DenseProperty all_strings_property() {
    DenseProperty q;
    q.name = "all";
    q.membership = [](const BitString&) { return true; };
    q.claimed_density = [](std::size_t) -> std::optional<Rational> { return Rational(1); };
    return q;
}

DenseProperty empty_property() {
    DenseProperty q;
    q.name = "none";
    q.membership = [](const BitString&) { return false; };
    q.claimed_density = [](std::size_t) -> std::optional<Rational> { return Rational(0); };
    return q;
}

BitString CompressionScheme::apply(const BitString& x) const {
    BitString y = map(x);
    if (y.size() > x.size()) {
        throw SchemeContractError("scheme " + name + " lengthened " + x.str() + " to " + y.str());
    }
    return y;
}

std::vector<BitString> CompressionScheme::apply_all(const std::vector<BitString>& xs) const {
    if (!batch_map) {
        std::vector<BitString> out;
        out.reserve(xs.size());
        for (const auto& x : xs) out.push_back(apply(x));
        return out;
    }
    auto out = batch_map(xs);
    if (out.size() != xs.size()) throw SchemeContractError("scheme " + name + " returned the wrong number of images");
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (out[i].size() > xs[i].size()) {
            throw SchemeContractError("scheme " + name + " lengthened " + xs[i].str() + " to " + out[i].str());
        }
    }
    return out;
}

CompressionScheme identity_scheme() {
    return {"identity", [](const BitString& x) { return x; }, {}};
}

CompressionScheme trailing_zeros_scheme() {
    return {"trailing-zeros",
            [](const BitString& x) {
                const std::size_t n = x.size();
                if (n >= 2 && !x[n - 1] && !x[n - 2]) return x.prefix(n - 1);
                return x;
            },
            {}};
}

CompressionScheme leading_zeros_scheme() {
    return {"leading-zeros",
            [](const BitString& x) {
                if (x.size() >= 3 && !x[0] && !x[1] && !x[2]) return BitString::parse(x.str().substr(2));
                return x;
            },
            {}};
}

bool incompressible_membership(const BitString& x, const CompressionScheme& f) {
    return f.apply(x).size() + 1 >= x.size();
}

DenseProperty incompressible_property(CompressionScheme f) {
    DenseProperty q;
    q.name = "incompressible:" + f.name;
    q.membership = [f](const BitString& x) { return incompressible_membership(x, f); };
    if (f.batch_map) {
        q.batch_membership = [f](const std::vector<BitString>& xs) {
            auto images = f.apply_all(xs);
            std::vector<bool> out(xs.size());
            for (std::size_t i = 0; i < xs.size(); ++i) out[i] = images[i].size() + 1 >= xs[i].size();
            return out;
        };
    }
    q.claimed_density = [](std::size_t) -> std::optional<Rational> { return Rational(1, 2); };
    return q;
}

std::optional<std::pair<BitString, BitString>> find_collision(const CompressionScheme& f, std::size_t n,
                                                              const Limits& limits) {
    if (n > limits.max_enum_arity) {
        throw ResourceLimitError("collision search at length " + std::to_string(n) + " exceeds the cap of " +
                                 std::to_string(limits.max_enum_arity));
    }
    std::unordered_map<BitString, BitString, BitStringHash> seen;
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t start = 0; start < total; start += kBatchChunk) {
        std::vector<BitString> xs;
        for (std::uint64_t j = start; j < total && j < start + kBatchChunk; ++j) xs.push_back(BitString::from_uint(j, n));
        auto images = f.apply_all(xs);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            auto [it, fresh] = seen.emplace(images[i], xs[i]);
            if (!fresh) return std::make_pair(it->second, xs[i]);
        }
    }
    return std::nullopt;
}

Rational density(const DenseProperty& q, std::size_t n, const Limits& limits) {
    if (n > limits.max_enum_arity) {
        throw ResourceLimitError("density at length " + std::to_string(n) + " exceeds the enumeration cap of " +
                                 std::to_string(limits.max_enum_arity));
    }
    const std::uint64_t total = std::uint64_t{1} << n;
    std::uint64_t count = 0;
    if (q.batch_membership) {
        for (std::uint64_t start = 0; start < total; start += kBatchChunk) {
            std::vector<BitString> xs;
            for (std::uint64_t j = start; j < total && j < start + kBatchChunk; ++j) {
                xs.push_back(BitString::from_uint(j, n));
            }
            for (bool b : q.contains_all(xs)) count += b;
        }
    } else {
        const std::size_t workers = std::max<std::size_t>(1, std::min<std::uint64_t>(limits.threads, total));
        std::vector<std::uint64_t> counts(workers, 0);
        std::vector<std::exception_ptr> failures(workers);
        auto work = [&](std::size_t w) {
            try {
                for (std::uint64_t j = w; j < total; j += workers) counts[w] += q.contains(BitString::from_uint(j, n));
            } catch (...) {
                failures[w] = std::current_exception();
            }
        };
        if (workers == 1) {
            work(0);
        } else {
            std::vector<std::thread> pool;
            for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
            for (auto& t : pool) t.join();
        }
        for (auto& f : failures) {
            if (f) std::rethrow_exception(f);
        }
        for (auto c : counts) count += c;
    }
    return Rational(static_cast<std::int64_t>(count), static_cast<std::int64_t>(total));
}

DenseProperty plugin_property(const std::string& program) {
    DenseProperty q;
    q.name = program;
    q.membership = [program](const BitString& x) {
        auto r = run_plugin(program, {}, x.str() + "\n");
        if (r.exit_status == 0) return true;
        if (r.exit_status == 1) return false;
        throw PropertyError("plug-in " + program + " exited with status " + std::to_string(r.exit_status) +
                            " on " + x.str());
    };
    q.batch_membership = [program](const std::vector<BitString>& xs) {
        auto r = run_plugin(program, {"--batch"}, join_lines(xs));
        if (r.exit_status != 0) {
            throw PropertyError("plug-in " + program + " --batch exited with status " + std::to_string(r.exit_status));
        }
        auto lines = split_lines(r.standard_output);
        if (lines.size() != xs.size()) throw PropertyError("plug-in " + program + " answered the wrong number of lines");
        std::vector<bool> out;
        for (const auto& line : lines) {
            if (line != "0" && line != "1") throw PropertyError("plug-in " + program + " printed '" + line + "'");
            out.push_back(line == "1");
        }
        return out;
    };
    return q;
}

CompressionScheme plugin_scheme(const std::string& program) {
    CompressionScheme f;
    f.name = program;
    f.map = [program](const BitString& x) {
        auto r = run_plugin(program, {}, x.str() + "\n");
        if (r.exit_status != 0) {
            throw PropertyError("scheme plug-in " + program + " exited with status " + std::to_string(r.exit_status));
        }
        auto lines = split_lines(r.standard_output);
        return BitString::parse(lines.empty() ? "" : lines.front());
    };
    f.batch_map = [program](const std::vector<BitString>& xs) {
        auto r = run_plugin(program, {"--batch"}, join_lines(xs));
        if (r.exit_status != 0) {
            throw PropertyError("scheme plug-in " + program + " --batch exited with status " +
                                std::to_string(r.exit_status));
        }
        auto lines = split_lines(r.standard_output);
        if (lines.size() != xs.size()) throw PropertyError("scheme plug-in " + program + " answered the wrong number of lines");
        std::vector<BitString> out;
        for (const auto& line : lines) out.push_back(BitString::parse(line));
        return out;
    };
    return f;
}

CompressionScheme resolve_scheme(const std::string& name) {
    if (name == "identity") return identity_scheme();
    if (name == "trailing-zeros") return trailing_zeros_scheme();
    if (name == "leading-zeros") return leading_zeros_scheme();
    return plugin_scheme(name);
}

DenseProperty resolve_property(const std::string& name, const std::string& scheme) {
    if (name == "primes") return primes_property();
    if (name == "all") return all_strings_property();
    if (name == "none") return empty_property();
    if (name == "incompressible") return incompressible_property(resolve_scheme(scheme));
    return plugin_property(name);
}

}  // namespace hitforge
