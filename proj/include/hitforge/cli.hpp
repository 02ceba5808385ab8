#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hitforge {

inline constexpr const char* kToolVersion = "0.1.0";

/// Exit statuses of run_command.
enum ExitStatus : int {
    kExitSuccess = 0,
    kExitBottom = 1,  // bottom, miss, or a divergent replay
    kExitUsage = 2,   // bad arguments or malformed input files
    kExitResource = 3,
    kExitFailure = 4,  // any other error
};

/// An ordered list of key=value fields.
class Report {
public:
    void add(const std::string& key, const std::string& value);
    const std::vector<std::pair<std::string, std::string>>& fields() const noexcept { return fields_; }
    std::optional<std::string> get(const std::string& key) const;

    /// One `key=value` line per field.
    std::string text() const;
    /// The same fields as a JSON object, in the same order.
    std::string json() const;
    static Report parse(const std::string& text);

private:
    std::vector<std::pair<std::string, std::string>> fields_;
};

struct ReplayVerdict {
    bool identical = true;
    std::string field;  // first differing field when divergent
    std::string recorded;
    std::string replayed;
};

/// Re-executes the command recorded in a report without writing any files
/// and compares the fresh report field by field. Throws
/// IncompatibleVersionError when the report came from another version.
ReplayVerdict replay_report(const std::string& report_text);

/// Runs one subcommand; `args` excludes the program name.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hitforge
