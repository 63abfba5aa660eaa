#ifndef DEPHASE_CORE_RUN_HPP
#define DEPHASE_CORE_RUN_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dephase::run {

struct Artifact {
    std::string name;  // file name the CLI writes, e.g. "report.json"
    std::string text;
};

struct RunResult {
    int status = 0;  // 0 ok, otherwise an ErrorCode value
    std::string message;
    std::vector<Artifact> artifacts;
    std::vector<std::string> summary;  // one human-readable line per check
};

// Executes one CLI command against a JSON config document. Schema violations
// return bad_config; domain errors return their code. Where the command
// contract requires it (decompose with infeasible weights), artifacts are
// still produced alongside the error status.
RunResult execute(const std::string& command, const std::string& config_json,
                  std::optional<std::uint64_t> seed_override);

// Maps a status to the documented CLI exit code.
int exit_code(int status);

}  // namespace dephase::run

#endif
