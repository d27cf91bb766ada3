// experiments.cpp
#include "experiments.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <stdexcept>

#include "fbmlab/bismut.hpp"
#include "fbmlab/fbm.hpp"
#include "fbmlab/fraccalc.hpp"
#include "fbmlab/girsanov.hpp"
#include "fbmlab/harnack.hpp"
#include "fbmlab/mc.hpp"
#include "fbmlab/parallel.hpp"

namespace fbmlab::cli {

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::string fmt_i(std::int64_t v) { return std::to_string(v); }

std::ofstream open_csv(const std::string& dir, const std::string& name) {
    const std::string path = dir + "/" + name;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
    return out;
}

void write_summary_csv(const ExperimentConfig& cfg, const Summary& s) {
    auto out = open_csv(cfg.output_dir(), cfg.experiment + "_summary.csv");
    for (std::size_t i = 0; i < s.fields.size(); ++i)
        out << s.fields[i].first << (i + 1 < s.fields.size() ? "," : "\n");
    for (std::size_t i = 0; i < s.fields.size(); ++i)
        out << s.fields[i].second << (i + 1 < s.fields.size() ? "," : "\n");
}

void push(Summary& s, const std::string& k, double v) {
    s.fields.emplace_back(k, format_value(v));
}
void push(Summary& s, const std::string& k, const std::string& v) {
    s.fields.emplace_back(k, v);
}
void push(Summary& s, const std::string& k, std::int64_t v) {
    s.fields.emplace_back(k, fmt_i(v));
}

void push_query_keys(Summary& s, const ExperimentConfig& cfg) {
    push(s, "experiment", cfg.experiment);
    push(s, "H", cfg.H);
    push(s, "T", cfg.T);
    push(s, "n_steps", static_cast<std::int64_t>(cfg.n_steps));
    push(s, "n_paths", cfg.n_paths);
    push(s, "seed", static_cast<std::int64_t>(cfg.seed));
}

// ---------------------------------------------------------------- constants

Summary exp_constants(const ExperimentConfig& cfg) {
    const double K = std::abs(cfg.drift_a);
    Summary s;
    push(s, "experiment", cfg.experiment);
    push(s, "T", cfg.T);
    push(s, "K", K);
    push(s, "H", cfg.H);
    push(s, "C", constant_C(cfg.T, K, cfg.H));
    push(s, "Ctilde", constant_Ctilde(cfg.T, K, cfg.H));
    push(s, "C4", constant_C4(cfg.T, K, cfg.H));
    return s;
}

// --------------------------------------------------------------- covariance

struct CovOutcome {
    double max_err = 0.0;
    double max_tol = 0.0;
    bool ok = true;
};

CovOutcome covariance_pass(const ExperimentConfig& cfg, bool use_cholesky,
                           double allowance, std::ofstream* pairs_csv) {
    const TimeGrid grid(cfg.T, cfg.n_steps);
    const HurstParam H(cfg.H);
    const int n = cfg.n_steps;
    const int npairs = (n + 1) * (n + 2) / 2;
    (void)volterra_scheme(H, grid);

    auto pair_index = [&](int i, int j) {   // j <= i
        return i * (i + 1) / 2 + j;
    };
    const auto stats = mc_accumulate(cfg.n_paths, npairs, [&](std::int64_t p, double* out) {
        const FbmPath path = use_cholesky
                                 ? cholesky_sample(H, grid, cfg.seed, p)
                                 : synthesize(H, grid, WienerIncrements::sample(cfg.seed, p, grid));
        for (int i = 0; i <= n; ++i)
            for (int j = 0; j <= i; ++j)
                out[pair_index(i, j)] = path.values[i] * path.values[j];
    });

    CovOutcome res;
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= i; ++j) {
            const double exact = fbm_covariance(H, grid.node(i), grid.node(j));
            const double rii = fbm_covariance(H, grid.node(i), grid.node(i));
            const double rjj = fbm_covariance(H, grid.node(j), grid.node(j));
            const double se =
                std::sqrt((rii * rjj + exact * exact) / static_cast<double>(cfg.n_paths));
            const double emp = stats.comp[pair_index(i, j)].mean;
            const double err = std::abs(emp - exact);
            const double tol = 5.0 * se + allowance;
            res.max_err = std::max(res.max_err, err);
            res.max_tol = std::max(res.max_tol, tol);
            if (err > tol) res.ok = false;
            if (pairs_csv)
                *pairs_csv << (use_cholesky ? "cholesky," : "volterra,") << i << ',' << j << ','
                           << format_value(emp) << ',' << format_value(exact) << ','
                           << format_value(se) << ',' << format_value(err) << ','
                           << format_value(tol) << '\n';
        }
    }
    return res;
}

Summary exp_covariance(const ExperimentConfig& cfg, bool write_artifacts) {
    std::ofstream pairs;
    std::ofstream* pcsv = nullptr;
    if (write_artifacts) {
        pairs = open_csv(cfg.output_dir(), "covariance_pairs.csv");
        pairs << "sampler,i,j,empirical,exact,se,abs_err,tol\n";
        pcsv = &pairs;
    }
    const auto volterra = covariance_pass(cfg, false, 0.02, pcsv);
    const auto chol = covariance_pass(cfg, true, 0.0, pcsv);

    Summary s;
    push_query_keys(s, cfg);
    push(s, "volterra_max_err", volterra.max_err);
    push(s, "volterra_allowance", 0.02);
    push(s, "cholesky_max_err", chol.max_err);
    push(s, "verdict", std::string(volterra.ok && chol.ok ? "holds" : "violated"));
    s.exit_code = (volterra.ok && chol.ok) ? 0 : 2;
    return s;
}

// ----------------------------------------------------------------- isometry

Summary exp_isometry(const ExperimentConfig& cfg, bool write_artifacts) {
    const TimeGrid grid(cfg.T, cfg.n_steps);
    const HurstParam H(cfg.H);
    const int n = cfg.n_steps;
    const std::vector<std::pair<int, int>> pairs = {
        {n, n / 2}, {n / 2, n / 4}, {3 * n / 4, n / 4}, {n, n / 4}, {7 * n / 8, 3 * n / 8}};

    std::ofstream csv;
    if (write_artifacts) {
        csv = open_csv(cfg.output_dir(), "isometry_pairs.csv");
        csv << "i,j,inner,exact,rel_err\n";
    }
    auto indicator_image = [&](int idx) {
        std::vector<double> cells(n, 0.0);
        for (int k = 0; k < idx; ++k) cells[k] = 1.0;
        return kstar_apply(H, grid, cells);
    };

    double worst = 0.0;
    for (const auto& [i, j] : pairs) {
        const auto fi = indicator_image(i);
        const auto fj = indicator_image(j);
        const double inner = indicator_inner_product(H, grid, fi, fj, i, j);
        const double exact = fbm_covariance(H, grid.node(i), grid.node(j));
        const double rel = std::abs(inner - exact) / std::abs(exact);
        worst = std::max(worst, rel);
        if (write_artifacts)
            csv << i << ',' << j << ',' << format_value(inner) << ',' << format_value(exact)
                << ',' << format_value(rel) << '\n';
    }

    Summary s;
    push_query_keys(s, cfg);
    push(s, "max_rel_err", worst);
    push(s, "tolerance", 1e-3);
    push(s, "verdict", std::string(worst <= 1e-3 ? "holds" : "violated"));
    s.exit_code = worst <= 1e-3 ? 0 : 2;
    return s;
}

// --------------------------------------------------- girsanov and coupling

std::vector<PathFunctionals> collect_paths(const HarnackQuery& q) {
    (void)volterra_scheme(q.hurst(), q.grid());
    if (q.x != q.y && q.H < 0.5) (void)kh_inverse_operator(q.hurst(), q.grid());
    std::vector<PathFunctionals> rows(q.n_paths);
    mc_accumulate(q.n_paths, 1, [&](std::int64_t p, double* out) {
        rows[p] = sample_path_functionals(q, p);
        out[0] = 0.0;
    });
    return rows;
}

Summary exp_girsanov(const ExperimentConfig& cfg, bool write_artifacts) {
    const HarnackQuery q = cfg.query();
    q.validate();
    const auto rows = collect_paths(q);

    KahanSum sr, srr, sr2, sr22;
    std::int64_t novikov_ok = 0;
    double min_margin = std::numeric_limits<double>::infinity();
    for (const auto& r : rows) {
        sr.add(r.r_t);
        srr.add(r.r_t * r.r_t);
        sr2.add(r.r_t * r.r_t);
        sr22.add(r.r_t * r.r_t * r.r_t * r.r_t);
        if (r.novikov_margin >= -1e-12) ++novikov_ok;
        min_margin = std::min(min_margin, r.novikov_margin);
    }
    const MeanSE mean_r = mean_se(sr, srr, q.n_paths);
    const MeanSE mean_r2 = mean_se(sr2, sr22, q.n_paths);
    const double dist = std::abs(q.x - q.y);
    const double c = constant_for(q.coupling == CouplingVariant::rem31
                                      ? ConstantVariant::rem31
                                      : ConstantVariant::thm31,
                                  q.T, q.drift, q.H);
    const double r2_bound = std::exp(2.0 * c * dist * dist);

    if (write_artifacts) {
        auto csv = open_csv(cfg.output_dir(), "girsanov_paths.csv");
        csv << "path,r_t,m_t,qv,novikov_margin,tau_index\n";
        for (std::int64_t p = 0; p < q.n_paths; ++p) {
            const auto& r = rows[p];
            csv << p << ',' << format_value(r.r_t) << ',' << format_value(r.m_t) << ','
                << format_value(r.qv) << ',' << format_value(r.novikov_margin) << ','
                << r.tau_index << '\n';
        }
    }

    const bool mean_ok = std::abs(mean_r.mean - 1.0) <= 4.0 * mean_r.se;
    const bool novikov_all = novikov_ok == q.n_paths;
    const bool moment_ok =
        mean_r2.mean <= r2_bound * (1.0 + 4.0 * mean_r2.se / std::max(mean_r2.mean, 1e-300));
    const bool ok = mean_ok && novikov_all && moment_ok;

    Summary s;
    push_query_keys(s, cfg);
    push(s, "x", q.x);
    push(s, "y", q.y);
    push(s, "constant", c);
    push(s, "mean_r", mean_r.mean);
    push(s, "mean_r_se", mean_r.se);
    push(s, "mean_r2", mean_r2.mean);
    push(s, "r2_bound", r2_bound);
    push(s, "novikov_fraction",
         static_cast<double>(novikov_ok) / static_cast<double>(q.n_paths));
    push(s, "min_novikov_margin", min_margin);
    push(s, "verdict", std::string(ok ? "holds" : "violated"));
    s.exit_code = ok ? 0 : 2;
    return s;
}

Summary exp_coupling(const ExperimentConfig& cfg, bool write_artifacts) {
    const HarnackQuery q = cfg.query();
    q.validate();
    const auto rows = collect_paths(q);

    const auto eta = eta_schedule(q.coupling, q.drift.lipschitz(), q.grid(),
                                  std::abs(q.x - q.y));
    const double eta_max = *std::max_element(eta.begin(), eta.end());
    const double gap_tol = 5.0 * q.grid().dt() * eta_max;

    int max_tau = 0;
    double max_gap = 0.0;
    std::int64_t coupled = 0;
    for (const auto& r : rows) {
        max_tau = std::max(max_tau, r.tau_index);
        max_gap = std::max(max_gap, r.gap_at_detection);
        if (r.tau_index <= q.n_steps) ++coupled;
    }
    if (write_artifacts) {
        auto csv = open_csv(cfg.output_dir(), "coupling_paths.csv");
        csv << "path,tau_index,gap_at_detection\n";
        for (std::int64_t p = 0; p < q.n_paths; ++p)
            csv << p << ',' << rows[p].tau_index << ','
                << format_value(rows[p].gap_at_detection) << '\n';
    }

    const bool all_coupled = coupled == q.n_paths && max_tau < q.n_steps;
    const bool gap_ok = max_gap <= gap_tol;
    Summary s;
    push_query_keys(s, cfg);
    push(s, "x", q.x);
    push(s, "y", q.y);
    push(s, "max_tau_index", static_cast<std::int64_t>(max_tau));
    push(s, "coupled_fraction",
         static_cast<double>(coupled) / static_cast<double>(q.n_paths));
    push(s, "max_gap_at_detection", max_gap);
    push(s, "gap_tolerance", gap_tol);
    push(s, "verdict", std::string(all_coupled && gap_ok ? "holds" : "violated"));
    s.exit_code = (all_coupled && gap_ok) ? 0 : 2;
    return s;
}

// ------------------------------------------------------- inequality checks

void push_report(Summary& s, const HarnackReport& r) {
    push(s, "lhs", r.lhs);
    push(s, "lhs_se", r.lhs_se);
    push(s, "rhs", r.rhs);
    push(s, "rhs_se", r.rhs_se);
    push(s, "constant", r.constant_used);
    push(s, "direct_y", r.direct_y);
    push(s, "direct_y_se", r.direct_y_se);
    push(s, "shifted_y", r.shifted_y);
    push(s, "shifted_y_se", r.shifted_y_se);
    push(s, "transfer_gap", r.transfer_gap);
    push(s, "transfer_se", r.transfer_se);
    push(s, "mean_r", r.mean_r);
    push(s, "mean_r_se", r.mean_r_se);
    push(s, "verdict", to_string(r.verdict));
}

Summary exp_harnack(const ExperimentConfig& cfg) {
    const HarnackQuery q = cfg.query();
    const HarnackReport r = check_harnack(cfg.test_function(), q, cfg.variant());
    Summary s;
    push_query_keys(s, cfg);
    push(s, "x", q.x);
    push(s, "y", q.y);
    push(s, "p", q.p);
    push(s, "f", cfg.f);
    push(s, "drift", cfg.drift);
    push(s, "constant_variant", cfg.constant_variant);
    push_report(s, r);
    s.exit_code = r.verdict == Verdict::violated ? 2 : 0;
    return s;
}

Summary exp_log_harnack(const ExperimentConfig& cfg) {
    const HarnackQuery q = cfg.query();
    const HarnackReport r = check_log_harnack(cfg.test_function(), q);
    Summary s;
    push_query_keys(s, cfg);
    push(s, "x", q.x);
    push(s, "y", q.y);
    push(s, "f", cfg.f);
    push(s, "drift", cfg.drift);
    push_report(s, r);
    s.exit_code = r.verdict == Verdict::violated ? 2 : 0;
    return s;
}

Summary exp_strong_feller(const ExperimentConfig& cfg) {
    const HarnackQuery q = cfg.query();
    const HarnackReport r = strong_feller_gap(cfg.test_function(), q);
    Summary s;
    push_query_keys(s, cfg);
    push(s, "x", q.x);
    push(s, "y", q.y);
    push(s, "f", cfg.f);
    push(s, "drift", cfg.drift);
    push_report(s, r);
    push(s, "e_abs_one_minus_r", r.extra_lhs);
    push(s, "modulus_bound", r.extra_rhs);
    s.exit_code = r.verdict == Verdict::violated ? 2 : 0;
    return s;
}

// ---------------------------------------------------------------- derivative

Summary exp_derivative(const ExperimentConfig& cfg) {
    const HarnackQuery q = cfg.query();
    q.validate();
    const TimeGrid grid = q.grid();
    const HurstParam H = q.hurst();
    const TestFunction f = cfg.test_function();
    (void)volterra_scheme(H, grid);
    if (!H.is_brownian()) (void)kh_inverse_operator(H, grid);

    const double c4 = constant_C4(q.T, std::max(q.drift.deriv_bound(), 1e-300), q.H);
    const double qv_bound = c4 * q.y * q.y;

    enum { kFN, kN, kQvMargin, kFd, kCount };
    const auto stats = mc_accumulate(q.n_paths, kCount, [&](std::int64_t p, double* out) {
        const auto w = WienerIncrements::sample(q.seed, p, grid);
        const auto noise = synthesize(H, grid, w);
        const auto path = euler_solve(q.x, q.drift, noise);
        const auto nt = H.is_brownian() ? nt_weight_bm(path, w, q.drift, q.y)
                                        : nt_weight(path, w, q.drift, q.y, H);
        out[kFN] = f(path.x.back()) * nt.value;
        out[kN] = nt.value;
        out[kQvMargin] = qv_bound - nt.qv;
        const auto up = euler_solve(q.x + cfg.eps * q.y, q.drift, noise);
        const auto dn = euler_solve(q.x - cfg.eps * q.y, q.drift, noise);
        out[kFd] = (f(up.x.back()) - f(dn.x.back())) / (2.0 * cfg.eps);
    });

    const MeanSE bismut = stats.comp[kFN];
    const MeanSE fd = stats.comp[kFd];
    const MeanSE nt_mean = stats.comp[kN];
    const double diff = std::abs(bismut.mean - fd.mean);
    const double tol = std::max(0.05 * std::abs(fd.mean),
                                4.0 * std::hypot(bismut.se, fd.se));
    const bool match_ok = diff <= tol;
    const bool mean_zero_ok = std::abs(nt_mean.mean) <= 4.0 * nt_mean.se;
    const bool qv_ok = stats.min[kQvMargin] >= -1e-12 * qv_bound;
    const bool ok = match_ok && mean_zero_ok && qv_ok;

    Summary s;
    push_query_keys(s, cfg);
    push(s, "x", q.x);
    push(s, "y", q.y);
    push(s, "f", cfg.f);
    push(s, "eps", cfg.eps);
    push(s, "bismut", bismut.mean);
    push(s, "bismut_se", bismut.se);
    push(s, "fd", fd.mean);
    push(s, "fd_se", fd.se);
    push(s, "abs_diff", diff);
    push(s, "tolerance", tol);
    push(s, "mean_nt", nt_mean.mean);
    push(s, "mean_nt_se", nt_mean.se);
    push(s, "min_qv_margin", stats.min[kQvMargin]);
    push(s, "qv_bound", qv_bound);
    push(s, "verdict", std::string(ok ? "holds" : "violated"));
    s.exit_code = ok ? 0 : 2;
    return s;
}

} // namespace

Summary run_experiment(const ExperimentConfig& cfg, bool write_artifacts) {
    set_worker_threads(cfg.threads);
    Summary s;
    if (cfg.experiment == "constants")
        s = exp_constants(cfg);
    else if (cfg.experiment == "covariance")
        s = exp_covariance(cfg, write_artifacts);
    else if (cfg.experiment == "isometry")
        s = exp_isometry(cfg, write_artifacts);
    else if (cfg.experiment == "girsanov")
        s = exp_girsanov(cfg, write_artifacts);
    else if (cfg.experiment == "coupling")
        s = exp_coupling(cfg, write_artifacts);
    else if (cfg.experiment == "harnack")
        s = exp_harnack(cfg);
    else if (cfg.experiment == "log_harnack")
        s = exp_log_harnack(cfg);
    else if (cfg.experiment == "strong_feller")
        s = exp_strong_feller(cfg);
    else if (cfg.experiment == "derivative")
        s = exp_derivative(cfg);
    else
        throw std::invalid_argument("config: unknown experiment '" + cfg.experiment + "'");

    if (write_artifacts) write_summary_csv(cfg, s);
    for (std::size_t i = 0; i < s.fields.size(); ++i)
        std::cout << s.fields[i].first << '=' << s.fields[i].second
                  << (i + 1 < s.fields.size() ? " " : "\n");
    return s;
}

int run_sweep(const ExperimentConfig& cfg, const std::string& axis,
              const std::vector<std::string>& values) {
    static const std::vector<std::string> numeric_axes = {
        "H", "T", "x", "y", "p", "drift_a", "drift_c", "n_steps", "n_paths", "seed", "eps"};
    if (std::find(numeric_axes.begin(), numeric_axes.end(), axis) == numeric_axes.end())
        throw std::invalid_argument("sweep: axis '" + axis + "' is not a numeric config field");
    if (values.empty()) throw std::invalid_argument("sweep: no values given");

    auto csv = open_csv(cfg.output_dir(), cfg.experiment + "_sweep.csv");
    int exit_code = 0;
    bool header_written = false;
    for (std::size_t row = 0; row < values.size(); ++row) {
        ExperimentConfig rc = cfg;
        rc.set(axis, values[row]);
        if (axis != "seed") rc.seed = cfg.seed + row;
        const Summary s = run_experiment(rc, /*write_artifacts=*/false);
        if (!header_written) {
            csv << "axis,axis_value";
            for (const auto& [k, v] : s.fields) csv << ',' << k;
            csv << '\n';
            header_written = true;
        }
        csv << axis << ',' << values[row];
        for (const auto& [k, v] : s.fields) csv << ',' << v;
        csv << '\n';
        exit_code = std::max(exit_code, s.exit_code);
    }
    return exit_code;
}

} // namespace fbmlab::cli
