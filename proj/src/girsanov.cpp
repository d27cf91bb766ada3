// girsanov.cpp
#include "fbmlab/girsanov.hpp"

#include <cmath>
#include <stdexcept>

#include "fbmlab/fraccalc.hpp"

namespace fbmlab {

std::vector<double> girsanov_integrand(HurstParam H, const TimeGrid& grid,
                                       std::span<const double> u_cells) {
    if (H.is_brownian()) {
        // K_{1/2} is the identity on drifts: g = u at the left nodes.
        const int n = grid.steps;
        if (static_cast<int>(u_cells.size()) != n)
            throw std::invalid_argument("girsanov_integrand: expects one value per cell");
        std::vector<double> g(n + 1, 0.0);
        for (int i = 0; i < n; ++i) g[i] = u_cells[i];
        g[n] = u_cells[n - 1];
        return g;
    }
    return kh_inverse_ac(H, grid, u_cells);
}

GirsanovWeight girsanov_weight(std::span<const double> g_nodes,
                               const WienerIncrements& w) {
    const int n = w.grid.steps;
    if (static_cast<int>(g_nodes.size()) != n + 1)
        throw std::invalid_argument("girsanov_weight: expects node samples of g");
    const double dt = w.grid.dt();
    GirsanovWeight out;
    double m = 0.0, qv = 0.0;
    for (int j = 0; j < n; ++j) {
        m -= g_nodes[j] * w.dw[j];
        qv += g_nodes[j] * g_nodes[j] * dt;
    }
    out.m_t = m;
    out.qv = qv;
    out.r_t = std::exp(m - 0.5 * qv);
    if (!std::isfinite(out.r_t))
        throw std::runtime_error("girsanov_weight: non-finite density");
    return out;
}

NovikovCheck novikov_check(std::span<const double> g_nodes, const TimeGrid& grid,
                           double C, double dist) {
    if (C < 0.0) throw std::domain_error("novikov_check: requires C >= 0");
    const int n = grid.steps;
    if (static_cast<int>(g_nodes.size()) != n + 1)
        throw std::invalid_argument("novikov_check: expects node samples of g");
    const double dt = grid.dt();
    double qv = 0.0;
    for (int j = 0; j < n; ++j) qv += g_nodes[j] * g_nodes[j] * dt;
    NovikovCheck out;
    out.half_qv = 0.5 * qv;
    out.bound = C * dist * dist;
    out.margin = out.bound - out.half_qv;
    out.holds = out.half_qv <= out.bound * (1.0 + 1e-12) + 1e-300;
    return out;
}

} // namespace fbmlab
