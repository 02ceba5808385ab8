#pragma once

#include <string>
#include <vector>

namespace hitforge {

struct ProcessResult {
    int exit_status = -1;  // -1 when the child did not exit normally
    std::string standard_output;
};

/// Runs `program` with `args`, feeding `input` on standard input and
/// collecting standard output. Standard error is inherited. Throws
/// std::system_error when the program cannot be started.
ProcessResult run_process(const std::string& program, const std::vector<std::string>& args,
                          const std::string& input);

}  // namespace hitforge
