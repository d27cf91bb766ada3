// main.cpp -- fbmlab experiment harness.
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "config.hpp"
#include "experiments.hpp"

int main(int argc, char** argv) {
    CLI::App app{"fbmlab: fractional-Brownian SDE laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    std::string axis;
    std::string values_csv;

    auto* run = app.add_subcommand("run", "run one experiment from a config file");
    run->add_option("--config", config_path, "flat key = value config file");
    run->add_option("--set", overrides, "override config entries (key=value, later wins)");

    auto* sweep = app.add_subcommand("sweep", "run an experiment across an axis of values");
    sweep->add_option("--config", config_path, "flat key = value config file");
    sweep->add_option("--set", overrides, "override config entries (key=value, later wins)");
    sweep->add_option("--axis", axis, "numeric config key to sweep")->required();
    sweep->add_option("--values", values_csv, "comma-separated values")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        const auto cfg = fbmlab::cli::load_config(config_path, overrides);
        if (run->parsed()) {
            return fbmlab::cli::run_experiment(cfg, /*write_artifacts=*/true).exit_code;
        }
        std::vector<std::string> values;
        std::stringstream ss(values_csv);
        std::string item;
        while (std::getline(ss, item, ',')) values.push_back(item);
        return fbmlab::cli::run_sweep(cfg, axis, values);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
