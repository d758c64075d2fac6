#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dimers/config.hpp"

namespace dimers {

struct CommandOptions {
    std::string out_dir;  // empty: use the config's output directory
    std::optional<std::uint64_t> seed;
    bool require_periodic = false;
};

struct CommandResult {
    int exit_code = 0;  // 0 ok, 2 validation, 3 numeric, 4 io
    std::string message;
    std::string summary_json;
    std::vector<std::string> files;
};

const std::vector<std::string>& command_names();

// Runs one command end to end; errors are folded into exit_code and the summary.
CommandResult run_command(const std::string& name, const RunConfig& cfg, const CommandOptions& opts);

// printf("%.17g")
std::string format_real(double x);

}  // namespace dimers
