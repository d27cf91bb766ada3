// bismut.hpp -- the derivative weight N_T and Monte Carlo derivative estimators.
#pragma once

#include <functional>

#include "fbmlab/harnack.hpp"
#include "fbmlab/sde.hpp"

namespace fbmlab {

struct NtWeight {
    double value = 0.0;   // N_T
    double qv = 0.0;      // <N>_T = int (y/T)^2 khinv(psi)(s)^2 ds
};

// N_T = (1/(Gamma(1/2-H) T)) int_0^T s^{H-1/2}
//         [ int_0^s r^{1/2-H} (s-r)^{-1/2-H} (1 + d2b(r,X_r)(T-r)) dr ] y dW_s.
// The inner integral is K_H^{-1} applied to psi(r) = 1 + d2b(r,X_r)(T-r), so
// N_T = (y/T) sum_i khinv(psi)(s_i) dW_i with the i = 0 term vanishing.
NtWeight nt_weight(const SolutionPath& path, const WienerIncrements& w,
                   const DriftSpec& drift, double y, HurstParam H);

// Brownian specialization (Remark-level closed form):
//   N_T = (y/T) sum_i (1 + (T - s_i) d2b(s_i, X_i)) dW_i.
NtWeight nt_weight_bm(const SolutionPath& path, const WienerIncrements& w,
                      const DriftSpec& drift, double y);

struct DerivativeEstimate {
    double value = 0.0;
    double se = 0.0;
    double x = 0.0;
    double y = 0.0;
    std::int64_t n_paths = 0;
};

// D_y P_T f(x) = E[f(X_T^x) N_T].
DerivativeEstimate estimate_derivative(const std::function<double(double)>& f,
                                       double x, double y, const HarnackQuery& q);

// Central difference (P_T f(x + eps y) - P_T f(x - eps y)) / (2 eps) with
// common random numbers; SE from the paired per-path differences.
DerivativeEstimate fd_derivative(const std::function<double(double)>& f,
                                 double x, double y, double eps,
                                 const HarnackQuery& q);

} // namespace fbmlab
