// sde.cpp
#include "fbmlab/sde.hpp"

#include <cmath>
#include <stdexcept>

namespace fbmlab {

double DriftSpec::b(double /*t*/, double x) const {
    switch (family) {
        case Family::linear: return a * x + c;
        case Family::sine: return a * std::sin(x) + c;
        case Family::tanh: return a * std::tanh(x) + c;
    }
    return 0.0;
}

double DriftSpec::d2b(double /*t*/, double x) const {
    switch (family) {
        case Family::linear: return a;
        case Family::sine: return a * std::cos(x);
        case Family::tanh: {
            const double ch = std::cosh(x);
            return a / (ch * ch);
        }
    }
    return 0.0;
}

DriftSpec DriftSpec::parse(const std::string& family, double a, double c) {
    DriftSpec d;
    d.a = a;
    d.c = c;
    if (family == "linear")
        d.family = Family::linear;
    else if (family == "sine")
        d.family = Family::sine;
    else if (family == "tanh")
        d.family = Family::tanh;
    else
        throw std::invalid_argument("DriftSpec: unknown family '" + family + "'");
    return d;
}

std::string DriftSpec::family_name() const {
    switch (family) {
        case Family::linear: return "linear";
        case Family::sine: return "sine";
        case Family::tanh: return "tanh";
    }
    return "?";
}

SolutionPath euler_solve(double x0, const DriftSpec& drift, const FbmPath& noise) {
    const TimeGrid& grid = noise.grid;
    const int n = grid.steps;
    const double dt = grid.dt();
    SolutionPath path{grid, x0, std::vector<double>(n + 1, 0.0)};
    path.x[0] = x0;
    for (int i = 0; i < n; ++i) {
        const double xi = path.x[i];
        const double xn =
            xi + drift.b(grid.node(i), xi) * dt + (noise.values[i + 1] - noise.values[i]);
        if (!std::isfinite(xn)) throw numerical_error("euler_solve: state diverged", i);
        path.x[i + 1] = xn;
    }
    return path;
}

std::vector<double> eta_schedule(CouplingVariant variant, double K, const TimeGrid& grid,
                                 double dist) {
    if (!(K > 0.0)) throw std::domain_error("eta_schedule: requires K > 0");
    if (dist < 0.0) throw std::domain_error("eta_schedule: requires dist >= 0");
    const double T = grid.horizon;
    std::vector<double> eta(grid.steps + 1, 0.0);
    if (variant == CouplingVariant::thm31) {
        const double norm = 2.0 * K * dist / (1.0 - std::exp(-2.0 * K * T));
        for (int i = 0; i <= grid.steps; ++i)
            eta[i] = norm * std::exp(-K * grid.node(i));
    } else {
        const double value = K * dist / (1.0 - std::exp(-K * T));
        for (int i = 0; i <= grid.steps; ++i) eta[i] = value;
    }
    return eta;
}

namespace {
double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }
}

CoupledPaths coupled_solve(double x0, double y0, const DriftSpec& drift,
                           const FbmPath& noise, CouplingVariant variant,
                           double coupling_tol) {
    if (!(drift.lipschitz() > 0.0))
        throw std::domain_error("coupled_solve: requires drift with K > 0");
    const TimeGrid& grid = noise.grid;
    const int n = grid.steps;
    const double dt = grid.dt();
    if (coupling_tol < 0.0) coupling_tol = 1e-9 * (1.0 + std::abs(x0 - y0));

    CoupledPaths out;
    out.x = SolutionPath{grid, x0, std::vector<double>(n + 1, 0.0)};
    out.y = SolutionPath{grid, y0, std::vector<double>(n + 1, 0.0)};
    out.u_cells.assign(n, 0.0);
    out.x.x[0] = x0;
    out.y.x[0] = y0;

    const auto eta = eta_schedule(variant, drift.lipschitz(), grid, std::abs(x0 - y0));
    const double init_sign = sign_of(x0 - y0);

    bool coupled = (init_sign == 0.0) || std::abs(x0 - y0) <= coupling_tol;
    if (coupled) {
        out.y.x[0] = x0;
        out.tau_index = 0;
        out.gap_at_detection = std::abs(x0 - y0);
    }

    for (int i = 0; i < n; ++i) {
        const double t = grid.node(i);
        const double db = noise.values[i + 1] - noise.values[i];
        const double xi = out.x.x[i];
        const double xn = xi + drift.b(t, xi) * dt + db;
        if (!std::isfinite(xn)) throw numerical_error("coupled_solve: X diverged", i);
        out.x.x[i + 1] = xn;

        if (coupled) {
            out.y.x[i + 1] = xn;
            continue;
        }
        const double yi = out.y.x[i];
        const double u = eta[i] * sign_of(xi - yi);
        out.u_cells[i] = u;
        const double yn = yi + (drift.b(t, yi) + u) * dt + db;
        if (!std::isfinite(yn)) throw numerical_error("coupled_solve: Y diverged", i);
        const double gap = xn - yn;
        if (sign_of(gap) != init_sign || std::abs(gap) <= coupling_tol) {
            coupled = true;
            out.tau_index = i + 1;
            out.gap_at_detection = std::abs(gap);
            out.y.x[i + 1] = xn;   // identified: the continuous solutions coincide
        } else {
            out.y.x[i + 1] = yn;
        }
    }
    if (!coupled) {
        out.tau_index = n + 1;   // did not couple within the horizon
        out.gap_at_detection = std::abs(out.x.x[n] - out.y.x[n]);
    }
    return out;
}

} // namespace fbmlab
