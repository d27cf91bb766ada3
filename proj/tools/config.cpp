// config.cpp
#include "config.hpp"

#include <cstdlib>
#include <fstream>
#include <stdexcept>

namespace fbmlab::cli {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (...) {
        throw std::invalid_argument("config: key '" + key + "' expects a number, got '" + v + "'");
    }
}

std::int64_t to_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const long long i = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return i;
    } catch (...) {
        throw std::invalid_argument("config: key '" + key + "' expects an integer, got '" + v + "'");
    }
}

} // namespace

void ExperimentConfig::set(const std::string& key, const std::string& value) {
    if (key == "experiment") experiment = value;
    else if (key == "H") H = to_double(key, value);
    else if (key == "T") T = to_double(key, value);
    else if (key == "x") x = to_double(key, value);
    else if (key == "y") y = to_double(key, value);
    else if (key == "p") p = to_double(key, value);
    else if (key == "drift") drift = value;
    else if (key == "drift_a") drift_a = to_double(key, value);
    else if (key == "drift_c") drift_c = to_double(key, value);
    else if (key == "f") f = value;
    else if (key == "n_steps") n_steps = static_cast<int>(to_int(key, value));
    else if (key == "n_paths") n_paths = to_int(key, value);
    else if (key == "seed") seed = static_cast<std::uint64_t>(to_int(key, value));
    else if (key == "constant_variant") constant_variant = value;
    else if (key == "eps") eps = to_double(key, value);
    else if (key == "output") output = value;
    else if (key == "threads") threads = static_cast<int>(to_int(key, value));
    else throw std::invalid_argument("config: unknown key '" + key + "'");
}

HarnackQuery ExperimentConfig::query() const {
    HarnackQuery q;
    q.x = x;
    q.y = y;
    q.p = p;
    q.T = T;
    q.drift = drift_spec();
    q.H = H;
    q.n_steps = n_steps;
    q.n_paths = n_paths;
    q.seed = seed;
    q.coupling = (constant_variant == "rem31") ? CouplingVariant::rem31
                                               : CouplingVariant::thm31;
    return q;
}

ConstantVariant ExperimentConfig::variant() const {
    if (constant_variant == "thm31") return ConstantVariant::thm31;
    if (constant_variant == "rem31") return ConstantVariant::rem31;
    if (constant_variant == "cor41") return ConstantVariant::cor41;
    throw std::invalid_argument("config: unknown constant_variant '" + constant_variant + "'");
}

std::string ExperimentConfig::output_dir() const {
    if (!output.empty()) return output;
    if (const char* env = std::getenv("FBMLAB_OUTDIR")) return env;
    return ".";
}

ExperimentConfig load_config(const std::string& path,
                             const std::vector<std::string>& overrides) {
    ExperimentConfig cfg;
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                            " is not 'key = value'");
            cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        }
    }
    for (const auto& ov : overrides) {
        const auto eq = ov.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("--set expects key=value, got '" + ov + "'");
        cfg.set(trim(ov.substr(0, eq)), trim(ov.substr(eq + 1)));
    }
    if (cfg.experiment.empty())
        throw std::invalid_argument("config: key 'experiment' is required");
    return cfg;
}

} // namespace fbmlab::cli
