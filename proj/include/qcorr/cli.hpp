#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

namespace qcorr::cli {

using nlohmann::json;

enum ExitCode : int {
    ok = 0,
    failure = 1,        // selftest group failed, scan anomaly, bound violated
    invalid_input = 2,  // malformed file, CPTP validation failure, bad flags
    not_found = 3,      // witness search found no violation within budget
};

struct RunConfig {
    std::string command;
    int dim = 0;
    std::optional<std::uint64_t> seed;
    double tol = 1e-7;
    int budget = 20000;
    int samples = 200;
    std::string in;
    std::string channel;
    std::string out;
    std::string format = "json";
    bool require_mixing = false;
    bool constructors_only = false;

    // make-channel / make-state parameters
    std::string kind;
    double p = 1.0;
    std::string gamma = "unitary";
    double angle = 0.7853981633974483;
    int env = 0;
};

struct CommandResult {
    int exit_code = ok;
    json report;
};

/// Throws InvalidInput on out-of-range flags.
void validate(const RunConfig& cfg);

CommandResult cmd_classify(const RunConfig& cfg);
CommandResult cmd_witness(const RunConfig& cfg);
CommandResult cmd_verify_witness(const RunConfig& cfg);
CommandResult cmd_msf(const RunConfig& cfg);
CommandResult cmd_scan(const RunConfig& cfg);
CommandResult cmd_selftest(const RunConfig& cfg);
CommandResult cmd_make_channel(const RunConfig& cfg);
CommandResult cmd_make_state(const RunConfig& cfg);

/// Dispatches on cfg.command, mapping InvalidInput and JSON errors to exit
/// code 2 with an "error" report.
CommandResult run_command(const RunConfig& cfg);

std::string render_text(const json& report);

/// Full front end: parses argv, runs, writes the report to --out or stdout.
int main(int argc, char** argv);

inline constexpr const char* version = "0.1.0";

} // namespace qcorr::cli
