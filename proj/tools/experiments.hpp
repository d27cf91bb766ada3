// experiments.hpp -- experiment dispatch and CSV emission.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "config.hpp"

namespace fbmlab::cli {

struct Summary {
    std::vector<std::pair<std::string, std::string>> fields;   // fixed order
    int exit_code = 0;   // 0 = holds / within noise, 2 = violated
};

std::string format_value(double v);

// Runs one experiment; writes per-path/per-cell CSVs plus <experiment>_summary.csv
// into cfg.output_dir() when write_artifacts is set, and prints a summary line.
Summary run_experiment(const ExperimentConfig& cfg, bool write_artifacts);

// One summary row per axis value; row seeds are cfg.seed + row index.
int run_sweep(const ExperimentConfig& cfg, const std::string& axis,
              const std::vector<std::string>& values);

} // namespace fbmlab::cli
