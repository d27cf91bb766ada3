// bismut.cpp
#include "fbmlab/bismut.hpp"

#include <cmath>
#include <stdexcept>

#include "fbmlab/fraccalc.hpp"
#include "fbmlab/mc.hpp"

namespace fbmlab {

NtWeight nt_weight(const SolutionPath& path, const WienerIncrements& w,
                   const DriftSpec& drift, double y, HurstParam H) {
    if (!(H.value < 0.5)) throw std::domain_error("nt_weight: requires H < 1/2");
    const TimeGrid& grid = path.grid;
    if (!(w.grid == grid)) throw std::invalid_argument("nt_weight: grid mismatch");
    const int n = grid.steps;
    const double T = grid.horizon;
    const double dt = grid.dt();

    std::vector<double> psi(n);
    for (int j = 0; j < n; ++j)
        psi[j] = 1.0 + drift.d2b(grid.node(j), path.x[j]) * (T - grid.node(j));

    const auto inner = kh_inverse_operator(H, grid)->apply(psi);
    NtWeight out;
    double acc = 0.0, qv = 0.0;
    const double scale = y / T;
    for (int i = 0; i < n; ++i) {   // i = 0 term vanishes (inner[0] = 0)
        acc += inner[i] * w.dw[i];
        qv += inner[i] * inner[i] * dt;
    }
    out.value = scale * acc;
    out.qv = scale * scale * qv;
    if (!std::isfinite(out.value)) throw std::runtime_error("nt_weight: non-finite weight");
    return out;
}

NtWeight nt_weight_bm(const SolutionPath& path, const WienerIncrements& w,
                      const DriftSpec& drift, double y) {
    const TimeGrid& grid = path.grid;
    if (!(w.grid == grid)) throw std::invalid_argument("nt_weight_bm: grid mismatch");
    const int n = grid.steps;
    const double T = grid.horizon;
    const double dt = grid.dt();
    NtWeight out;
    double acc = 0.0, qv = 0.0;
    const double scale = y / T;
    for (int i = 0; i < n; ++i) {
        const double s = grid.node(i);
        const double v = 1.0 + (T - s) * drift.d2b(s, path.x[i]);
        acc += v * w.dw[i];
        qv += v * v * dt;
    }
    out.value = scale * acc;
    out.qv = scale * scale * qv;
    return out;
}

DerivativeEstimate estimate_derivative(const std::function<double(double)>& f,
                                       double x, double y, const HarnackQuery& q) {
    const TimeGrid grid = q.grid();
    const HurstParam H = q.hurst();
    (void)volterra_scheme(H, grid);
    if (!H.is_brownian()) (void)kh_inverse_operator(H, grid);

    const auto stats = mc_accumulate(q.n_paths, 1, [&](std::int64_t p, double* out) {
        const auto w = WienerIncrements::sample(q.seed, p, grid);
        const auto noise = synthesize(H, grid, w);
        const auto path = euler_solve(x, q.drift, noise);
        const auto nt = H.is_brownian() ? nt_weight_bm(path, w, q.drift, y)
                                        : nt_weight(path, w, q.drift, y, H);
        out[0] = f(path.x.back()) * nt.value;
    });
    DerivativeEstimate est;
    est.value = stats.comp[0].mean;
    est.se = stats.comp[0].se;
    est.x = x;
    est.y = y;
    est.n_paths = q.n_paths;
    return est;
}

DerivativeEstimate fd_derivative(const std::function<double(double)>& f,
                                 double x, double y, double eps,
                                 const HarnackQuery& q) {
    if (!(eps > 0.0)) throw std::domain_error("fd_derivative: requires eps > 0");
    if (eps < 1e-8)
        throw std::invalid_argument("fd_derivative: eps below floating-point floor");
    const TimeGrid grid = q.grid();
    const HurstParam H = q.hurst();
    (void)volterra_scheme(H, grid);

    const auto stats = mc_accumulate(q.n_paths, 1, [&](std::int64_t p, double* out) {
        const auto w = WienerIncrements::sample(q.seed, p, grid);
        const auto noise = synthesize(H, grid, w);
        const auto up = euler_solve(x + eps * y, q.drift, noise);
        const auto dn = euler_solve(x - eps * y, q.drift, noise);
        out[0] = (f(up.x.back()) - f(dn.x.back())) / (2.0 * eps);
    });
    DerivativeEstimate est;
    est.value = stats.comp[0].mean;
    est.se = stats.comp[0].se;
    est.x = x;
    est.y = y;
    est.n_paths = q.n_paths;
    return est;
}

} // namespace fbmlab
