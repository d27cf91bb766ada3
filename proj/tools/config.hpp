// config.hpp -- flat key=value experiment configuration.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fbmlab/harnack.hpp"

namespace fbmlab::cli {

struct ExperimentConfig {
    std::string experiment;
    double H = 0.3;
    double T = 1.0;
    double x = 0.0;
    double y = 1.0;
    double p = 2.0;
    std::string drift = "linear";
    double drift_a = -1.0;
    double drift_c = 0.0;
    std::string f = "one_plus_half_sin";
    int n_steps = 128;
    std::int64_t n_paths = 10000;
    std::uint64_t seed = 1;
    std::string constant_variant = "thm31";
    double eps = 0.05;
    std::string output;       // output directory; env FBMLAB_OUTDIR else "."
    int threads = 0;          // 0 = hardware concurrency

    void set(const std::string& key, const std::string& value);

    DriftSpec drift_spec() const { return DriftSpec::parse(drift, drift_a, drift_c); }
    TestFunction test_function() const { return TestFunction::parse(f); }
    HarnackQuery query() const;
    ConstantVariant variant() const;
    std::string output_dir() const;
};

ExperimentConfig load_config(const std::string& path,
                             const std::vector<std::string>& overrides);

} // namespace fbmlab::cli
