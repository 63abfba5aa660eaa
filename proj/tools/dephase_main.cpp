// dephase command-line front end. All computation goes through the C API in
// dephase/dephase.h; this binary only reads the config, writes the artifact
// files and maps statuses to exit codes.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <string>

#include "dephase/dephase.h"

namespace {

int fail(const std::string& what) {
    std::cerr << "error: " << what << "\n";
    const char* detail = dephase_last_error_message();
    if (detail != nullptr && detail[0] != '\0') {
        std::cerr << "  " << detail << "\n";
    }
    return 1;
}

std::optional<std::string> read_config(const std::string& path) {
    if (path == "-") {
        return std::string(std::istreambuf_iterator<char>(std::cin),
                           std::istreambuf_iterator<char>());
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

int run_command(const std::string& command, const std::string& config_path,
                const std::string& out_dir, const std::optional<std::uint64_t>& seed) {
    const auto config = read_config(config_path);
    if (!config) {
        std::cerr << "error: cannot read config file '" << config_path << "'\n";
        return 2;
    }

    const std::uint64_t seed_value = seed.value_or(0);
    dephase_report* report = nullptr;
    const dephase_status status =
        dephase_run(command.c_str(), config->c_str(), seed ? &seed_value : nullptr, &report);

    if (report == nullptr) {
        return fail("command produced no report");
    }

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        dephase_report_free(report);
        std::cerr << "error: cannot create output directory '" << out_dir << "'\n";
        return 1;
    }

    for (size_t i = 0; i < dephase_report_artifact_count(report); ++i) {
        const std::filesystem::path path =
            std::filesystem::path(out_dir) / dephase_report_artifact_name(report, i);
        std::ofstream out(path, std::ios::binary);
        if (!out) {
            dephase_report_free(report);
            std::cerr << "error: cannot write '" << path.string() << "'\n";
            return 1;
        }
        out << dephase_report_artifact_text(report, i);
        std::cout << "wrote " << path.string() << "\n";
    }
    for (size_t i = 0; i < dephase_report_summary_count(report); ++i) {
        std::cout << dephase_report_summary_line(report, i) << "\n";
    }

    if (status != DEPHASE_OK) {
        const char* message = dephase_report_message(report);
        std::cerr << "error: " << (message != nullptr ? message : "command failed") << "\n";
    }
    const int exit_code = dephase_status_exit_code(status);
    dephase_report_free(report);
    return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dephasing-channel decompositions, Fock-space oracle and "
                 "restoration protocol"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"coefficients", "Tabulate l1, l2, l3 and gamma over a time grid"},
        {"decompose", "Build RU sign-pattern decompositions and check feasibility"},
        {"fock", "Trace-norm table of the Fock-basis Kraus family plus oracle check"},
        {"basis", "Solve the measurement basis connecting the RU set to the Fock family"},
        {"restore", "Run the measurement + unitary-restoration protocol"},
    };
    for (const auto& [name, description] : commands) {
        CLI::App* sub = app.add_subcommand(name, description);
        sub->add_option("--config", config_path, "JSON config path ('-' for stdin)")
            ->required();
        sub->add_option("--out", out_dir, "Output directory (default '.')");
        sub->add_option("--seed", seed, "Override the config seed");
    }

    CLI11_PARSE(app, argc, argv);

    for (const auto& [name, description] : commands) {
        if (app.get_subcommand(name)->parsed()) {
            return run_command(name, config_path, out_dir, seed);
        }
    }
    std::cerr << "error: no subcommand\n";
    return 1;
}
