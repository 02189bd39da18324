// tripod_sim: steady-state spectra, maps and dressed-state reports for the
// four-level tripod system.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tripod/tripod.hpp"

namespace {

const char* kExitCodes = R"(exit codes:
  0 success           2 usage            3 InvalidParams      4 SingularSystem
  5 StepTooLarge      6 DegenerateFields 7 NoFeatures         8 UnknownPreset
  9 ParseError/UnknownKey/DuplicateKey  10 IoError           11 PreconditionError)";

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Tripod-atom analog of plasmon-induced switching"};
    app.footer(kExitCodes);

    std::string command;
    std::string preset_name;
    std::string config_path;
    std::string out_path;
    std::string svg_path;
    std::vector<std::string> sets;
    bool quiet = false;

    std::string command_help = "one of:";
    for (const auto& c : tripod::commands())
        command_help += " " + c;
    app.add_option("command", command, command_help)->required();
    app.add_option("--preset", preset_name, "named scenario (see list-presets)");
    app.add_option("--config", config_path, "key = value configuration file");
    app.add_option("--out", out_path, "output file; stdout when omitted (decompose: file stem)");
    app.add_option("--svg", svg_path, "also write a minimal SVG plot");
    app.add_option("--set", sets, "override one key, key=value (repeatable)")->allow_extra_args(false);
    app.add_flag("-q,--quiet", quiet, "suppress the run summary on stderr");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : tripod::exit_code::kUsage;
    }

    const auto& cmds = tripod::commands();
    if (std::find(cmds.begin(), cmds.end(), command) == cmds.end()) {
        std::cerr << "Usage: unknown command '" << command << "'\n";
        return tripod::exit_code::kUsage;
    }

    try {
        tripod::Config explicit_keys;
        if (!config_path.empty())
            explicit_keys = tripod::load_config(config_path);
        for (const auto& s : sets) {
            auto [key, value] = tripod::parse_override(s);
            explicit_keys.set(key, std::move(value));
        }
        if (!preset_name.empty())
            explicit_keys.set("preset", preset_name);

        tripod::CliOptions opt;
        if (!out_path.empty())
            opt.out = out_path;
        if (!svg_path.empty())
            opt.svg = svg_path;

        const auto report = tripod::run(command, explicit_keys, opt, std::cout);
        std::cout.flush();
        for (const auto& w : report.warnings)
            std::cerr << "warning: " << w << "\n";
        if (!quiet && command != "list-presets") {
            std::cerr << "scenario: " << report.scenario << "\n";
            for (const auto& o : report.outputs)
                std::cerr << "wrote: " << o << "\n";
            std::cerr << "residual_max: " << report.residual_max << "\n";
            std::cerr << "wall_time_s: " << report.wall_time << "\n";
        }
        return tripod::exit_code::kSuccess;
    } catch (const tripod::Error& e) {
        std::cerr << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "InternalError: " << e.what() << "\n";
        return 1;
    }
}
