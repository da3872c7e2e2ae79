#include <filesystem>
#include <iostream>

#include "commands.hpp"
#include "common.hpp"
#include "webeco/error.hpp"

namespace fs = std::filesystem;
using namespace webeco::cli;

int main(int argc, char** argv) {
    CLI::App app{"webeco: hyperlink graphs, popularity series and causality tests for web ecosystems"};
    app.config_formatter(std::make_shared<JsonConfig>());
    app.set_config("--config", "", "JSON configuration; command-line flags take precedence");
    app.require_subcommand(1, 1);
    app.fallthrough();

    Globals globals;
    app.add_option("--seed", globals.seed, "Seed for every random choice")->capture_default_str();
    app.add_option("--jobs", globals.jobs, "Worker threads (0 = all cores); outputs do not depend on it")
        ->capture_default_str();
    app.add_option("--manifest", globals.manifest,
                   "Where to write run_manifest.json (default: beside the first output)");

    std::vector<Command> commands = make_commands(app, globals);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "usage error: " << e.what() << "\n\n" << app.help();
        return 1;
    }
    globals.seed_given = app.get_option("--seed")->count() > 0;
    globals.jobs_given = app.get_option("--jobs")->count() > 0;

    for (auto& cmd : commands) {
        if (!cmd.app->parsed()) continue;
        try {
            OutputSet outputs;
            Manifest manifest;
            manifest.command = cmd.app->get_name();
            const std::string summary = cmd.run(outputs, manifest);
            manifest.seed = manifest.seed == 0 ? globals.seed : manifest.seed;
            for (const CLI::Option* opt : cmd.app->get_options()) {
                const std::string name = opt->get_single_name();
                if (name.empty() || name == "help") continue;
                std::vector<std::string> values = opt->results();
                if (values.empty() && !opt->get_default_str().empty()) values = {opt->get_default_str()};
                if (values.empty()) continue;
                if (cmd.output_options.contains(name)) {
                    for (auto& v : values) v = fs::path(v).filename().string();
                }
                manifest.settings[name] = values.size() == 1 ? nlohmann::ordered_json(values[0])
                                                             : nlohmann::ordered_json(values);
            }
            if (!outputs.paths().empty()) {
                const fs::path where = globals.manifest.empty()
                                           ? outputs.paths().front().parent_path() / "run_manifest.json"
                                           : fs::path(globals.manifest);
                outputs.flush();
                const auto doc = manifest.to_json(outputs.paths());
                outputs.open(where) << doc.dump(2) << '\n';
            }
            outputs.commit();
            std::cout << cmd.app->get_name() << ": " << summary << '\n';
            return 0;
        } catch (const CLI::Error& e) {
            std::cerr << "error: " << e.what() << '\n';
            return 1;
        } catch (const UsageError& e) {
            std::cerr << "usage error: " << e.what() << "\n\n" << cmd.app->help();
            return 1;
        } catch (const DataError& e) {
            std::cerr << "data error: " << e.what() << '\n';
            return 2;
        } catch (const webeco::Error& e) {
            std::cerr << "data error: " << e.what() << '\n';
            return 2;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << '\n';
            return 2;
        }
    }
    return 1;
}
