// lsm: command-line front end for latent source time series classification.
//
//   lsm <command> [--config FILE] [--<key> VALUE ...]
//
// Every configuration key (see `lsm --help`) can be given in the config file
// or as a flag; flags win. Exit codes: 0 success, 1 validation, 2 I/O,
// 3 numeric precondition.

#include <functional>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "lsm/cli/commands.hpp"

namespace {

using lsm::cli::RunConfig;
using Command = std::function<void(const RunConfig&, std::ostream&)>;

int run(int argc, char** argv) {
    CLI::App app{"Latent source time series classification"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    app.add_option("--config", config_path, "flat key = value configuration file");

    std::map<std::string, std::string> overrides;
    for (const auto& f : lsm::cli::schema()) {
        app.add_option_function<std::string>(
               "--" + f.key, [&overrides, key = f.key](const std::string& v) { overrides[key] = v; },
               f.help + " [default: " + (f.default_value.empty() ? "none" : f.default_value) + "]")
            ->group("Configuration");
    }

    const std::map<std::string, std::pair<std::string, Command>> commands = {
        {"generate", {"sample latent sources, training and test sets", lsm::cli::cmd_generate}},
        {"classify", {"classify series against training data or true sources", lsm::cli::cmd_classify}},
        {"preprocess", {"run the rate pipeline on raw counts", lsm::cli::cmd_preprocess}},
        {"gap", {"gap of a training set (and source separation)", lsm::cli::cmd_gap}},
        {"bounds", {"misclassification bounds and side conditions", lsm::cli::cmd_bounds}},
        {"experiment", {"synthetic error curves versus T and beta", lsm::cli::cmd_experiment}},
        {"detect", {"online trend detection and ROC sweep", lsm::cli::cmd_detect}},
    };
    for (const auto& [name, entry] : commands) app.add_subcommand(name, entry.first);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? lsm::cli::kOk : lsm::cli::kValidation;
    }

    try {
        RunConfig cfg = config_path.empty() ? RunConfig{} : RunConfig::load(config_path);
        for (const auto& [k, v] : overrides) cfg.set(k, v, "--" + k);
        for (const auto& [name, entry] : commands) {
            if (app.got_subcommand(name)) entry.second(cfg, std::cout);
        }
    } catch (const lsm::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return lsm::cli::kValidation;
    } catch (const lsm::ParamError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return lsm::cli::kValidation;
    } catch (const lsm::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return lsm::cli::kIo;
    } catch (const lsm::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return lsm::cli::kNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return lsm::cli::kIo;
    }
    return lsm::cli::kOk;
}

} // namespace

int main(int argc, char** argv) { return run(argc, argv); }
