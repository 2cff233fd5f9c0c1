#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "thzturb/errors.hpp"
#include "thzturb/scenario.hpp"
#include "thzturb/version.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool is_computation(const std::string& name) {
    for (const auto& c : thzturb::scenario::computation_names())
        if (c == name) return true;
    return false;
}

void print_errors(const std::vector<thzturb::scenario::ConfigError>& errors) {
    for (const auto& e : errors) {
        std::cerr << "error: ";
        if (e.line > 0) std::cerr << "line " << e.line << ": ";
        std::cerr << e.key << ": " << e.message << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "thz-turb: atmospheric-turbulence channel computations for THz UAV MIMO links"};
    app.set_version_flag("--version", thzturb::version);

    std::string target;
    std::string config_path;
    std::string out_path;
    std::string format;
    std::string presets_dir;
    std::uint64_t seed = 0;
    bool seed_given = false;

    std::string computations;
    for (const auto& c : thzturb::scenario::computation_names()) computations += c + " | ";
    app.add_option("target", target,
                   "computation (" + computations +
                       "validate) or a figure preset name (fig4, fig5a, ..., fig9b)")
        ->required();
    app.add_option("--config", config_path, "scenario config file");
    app.add_option("--out", out_path, "output path (overrides config)");
    app.add_option("--format", format, "csv or json (overrides config)")
        ->check(CLI::IsMember({"csv", "json"}));
    auto* seed_opt = app.add_option("--seed", seed, "seed (overrides config)");
    app.add_option("--presets-dir", presets_dir,
                   "directory with figure presets (default: $THZ_TURB_PRESETS or ./presets)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::CallForVersion&) {
        std::cout << thzturb::version << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    seed_given = seed_opt->count() > 0;

    try {
        std::optional<std::string> computation_override;
        std::string text;
        if (target == "validate" || is_computation(target)) {
            if (config_path.empty()) {
                std::cerr << "error: '" << target << "' requires --config\n";
                return 1;
            }
            if (target != "validate") computation_override = target;
            text = read_file(config_path);
        } else {
            // figure preset
            std::string dir = presets_dir;
            if (dir.empty()) {
                if (const char* env = std::getenv("THZ_TURB_PRESETS")) dir = env;
            }
            if (dir.empty()) dir = "presets";
            text = read_file(dir + "/" + target + ".cfg");
        }

        auto result = thzturb::scenario::validate_config(text, computation_override);
        if (!result.ok()) {
            print_errors(result.errors);
            return 1;
        }
        thzturb::scenario::ScenarioConfig config = *std::move(result.config);
        if (target == "validate") {
            std::cout << config.canonical_text();
            return 0;
        }
        if (seed_given) config.seed = seed;
        if (!out_path.empty()) config.output.path = out_path;
        if (format == "csv") config.output.format = thzturb::scenario::OutputSpec::Format::csv;
        if (format == "json") config.output.format = thzturb::scenario::OutputSpec::Format::json;

        const auto table = thzturb::scenario::run_scenario(config);
        if (config.output.path)
            thzturb::scenario::emit(table, config.output.format, *config.output.path);
        else
            thzturb::scenario::emit(table, config.output.format, std::cout);
        return 0;
    } catch (const thzturb::numerical_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
