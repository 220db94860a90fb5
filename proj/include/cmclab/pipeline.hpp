#pragma once

// One command per stage plus the full pipeline. Every command writes its
// artifacts under the output directory together with manifest.json, which
// lists each file with its SHA-256 and the results of the checks run.

#include "cmclab/config.hpp"
#include "cmclab/sequence.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace cmclab {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct StageRecord {
    std::string name;
    std::vector<std::string> files; // relative to the output directory
};

struct CommandResult {
    std::string command;
    std::vector<StageRecord> stages;
    std::vector<CheckResult> checks;
    Json summary;

    bool all_pass() const;
};

CommandResult cmd_dh_curve(const RunConfig& config);
CommandResult cmd_catenoid(const RunConfig& config);
CommandResult cmd_strips(const RunConfig& config);
CommandResult cmd_gamma(const RunConfig& config);
CommandResult cmd_solve(const RunConfig& config); // the single problem n = n_max
CommandResult cmd_pipeline(const RunConfig& config);
// Re-hashes the files listed in an existing manifest and re-reads its checks.
CommandResult cmd_check(const std::filesystem::path& out_dir);

Json to_json(const SolveReport& r);
Json versions();

// Exit status: 0 success, 2 config error, 3 numeric or other failure,
// 4 a check failed.
int exit_status(const CommandResult& r);
int exit_status(const std::exception& e);

} // namespace cmclab
