#include "gwave/runner.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;

int main(int argc, char** argv) {
    CLI::App app{"gwave: pointwise microlocal regularity analysis for generalized-function "
                 "representatives"};
    app.require_subcommand(1);

    std::string scenario_path, out_dir = "out";
    int threads = 1, eps_floor_k = 0;

    auto add_common = [&](CLI::App* cmd, bool needs_scenario) {
        auto* opt = cmd->add_option("--scenario", scenario_path, "scenario file");
        if (needs_scenario) opt->required();
        cmd->add_option("--out", out_dir, "output directory (default: out)");
        cmd->add_option("--threads", threads, "worker threads for scan rows");
        cmd->add_option("--eps-floor", eps_floor_k,
                        "override the spectral eps floor exponent (eps_floor = base^-K)");
    };

    for (const char* name : {"classify", "wavefront", "singsupp", "consistency"})
        add_common(app.add_subcommand(name), true);
    add_common(app.add_subcommand("selftest", "run the built-in invariant suite"), false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    std::string command = app.get_subcommands().front()->get_name();
    try {
        gwave::Scenario scenario;
        if (!scenario_path.empty()) scenario = gwave::load_scenario(scenario_path);

        gwave::RunnerOptions opts;
        opts.threads = threads;
        opts.eps_floor_k = eps_floor_k;
        gwave::RunOutputs out = gwave::run_command(scenario, command, opts);

        fs::create_directories(out_dir);
        for (const auto& [rel, content] : out.files) {
            fs::path p = fs::path(out_dir) / rel;
            fs::create_directories(p.parent_path());
            std::ofstream f(p);
            if (!f) throw gwave::Error(gwave::ErrorKind::IoError, "cannot write " + p.string());
            f << content;
        }

        if (command == "selftest") {
            for (const auto& line : out.report["selftest"]["checks"])
                std::cout << line.get<std::string>() << "\n";
            std::cout << out.report["selftest"]["passed"] << "/" << out.report["selftest"]["total"]
                      << " checks passed\n";
        } else if (out.report.contains("wavefront")) {
            for (const auto& row : out.report["wavefront"]["rows"])
                std::cout << row["point"].get<std::string>() << " x "
                          << row["direction"].get<std::string>() << " -> "
                          << row["verdict"].get<std::string>() << "\n";
        } else if (out.report.contains("consistency")) {
            std::cout << "classical: "
                      << out.report["consistency"]["classical"]["verdict"].get<std::string>()
                      << ", consistent: "
                      << (out.report["consistency"]["consistent"].get<bool>() ? "true" : "false")
                      << "\n";
        } else if (out.report.contains("singular_support")) {
            for (const auto& row : out.report["singular_support"]["rows"])
                std::cout << row["point"].get<std::string>() << " -> "
                          << (row["agree"].get<bool>() ? "agree" : "DISAGREE") << "\n";
        }
        std::cout << "report written to " << (fs::path(out_dir) / (scenario.out_json.empty()
                                                                       ? command + ".json"
                                                                       : scenario.out_json))
                          .string()
                  << " (exit " << out.exit_code << ")\n";
        return out.exit_code;
    } catch (const gwave::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
