// sde.hpp -- Euler scheme for dX = b(t,X)dt + dB^H and the coupled system
// dY = b(t,Y)dt + dB^H + u dt with the explicit coupling drift.
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "fbmlab/fbm.hpp"
#include "fbmlab/grid.hpp"

namespace fbmlab {

// Built-in parametric drift family; K (Lipschitz) and Kbar (derivative bound)
// both equal |a| for every member.
struct DriftSpec {
    enum class Family { linear, sine, tanh };
    Family family = Family::linear;
    double a = 0.0;
    double c = 0.0;

    double b(double t, double x) const;
    double d2b(double t, double x) const;   // derivative in the space variable
    double lipschitz() const { return std::abs(a); }
    double deriv_bound() const { return std::abs(a); }

    static DriftSpec parse(const std::string& family, double a, double c);
    std::string family_name() const;
};

struct SolutionPath {
    TimeGrid grid;
    double x0 = 0.0;
    std::vector<double> x;   // n+1 values, x[0] = x0
};

// thrown when a state blows up; carries the offending step
class numerical_error : public std::runtime_error {
public:
    numerical_error(const std::string& what, int step)
        : std::runtime_error(what + " at step " + std::to_string(step)), step_(step) {}
    int step() const { return step_; }

private:
    int step_;
};

SolutionPath euler_solve(double x0, const DriftSpec& drift, const FbmPath& noise);

enum class CouplingVariant { thm31, rem31 };

// Deterministic coupling rate at the grid nodes:
//   thm31:  eta(t) = 2K e^{-Kt} |x-y| / (1 - e^{-2KT})
//   rem31:  eta(t) = K |x-y| / (1 - e^{-KT})          (constant)
// Both satisfy int_0^T e^{-Kt} eta(t) dt = |x-y|.
std::vector<double> eta_schedule(CouplingVariant variant, double K, const TimeGrid& grid,
                                 double dist);

struct CoupledPaths {
    SolutionPath x;
    SolutionPath y;
    int tau_index = 0;                 // first grid index with X = Y
    std::vector<double> u_cells;       // applied coupling drift, per cell
    double gap_at_detection = 0.0;     // |X - Y| at tau_index before identification
};

// X stepped from x0, Y stepped from y0 with the extra drift
// u_i = eta(t_i) sign(X_i - Y_i) while uncoupled. Coupling is declared at the
// first index where the signed gap vanishes, crosses zero, or falls below
// coupling_tol; from there on Y is identified with X and u = 0.
// coupling_tol < 0 selects the default 1e-9 (1 + |x0-y0|).
CoupledPaths coupled_solve(double x0, double y0, const DriftSpec& drift,
                           const FbmPath& noise, CouplingVariant variant,
                           double coupling_tol = -1.0);

} // namespace fbmlab
