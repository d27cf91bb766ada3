// girsanov.hpp -- change-of-measure weight R_T from the coupling drift.
#pragma once

#include <span>
#include <vector>

#include "fbmlab/fbm.hpp"
#include "fbmlab/grid.hpp"

namespace fbmlab {

struct GirsanovWeight {
    double m_t = 0.0;   // stochastic integral -int g dW
    double qv = 0.0;    // int_0^T g^2 ds
    double r_t = 1.0;   // exp(m_t - qv/2)
};

// g(s_i) = (K_H^{-1} int_0^. u_r dr)(s_i); delegates to the fractional-calculus
// operator. u given per cell, g returned per node with g[0] = 0.
std::vector<double> girsanov_integrand(HurstParam H, const TimeGrid& grid,
                                       std::span<const double> u_cells);

// Left-point Ito sum against the Wiener increments:
//   M_T = -sum_j g(s_j) dW_j,  qv = sum_j g(s_j)^2 dt,  R_T = exp(M_T - qv/2).
GirsanovWeight girsanov_weight(std::span<const double> g_nodes,
                               const WienerIncrements& w);

struct NovikovCheck {
    bool holds = false;
    double half_qv = 0.0;
    double bound = 0.0;     // C |x-y|^2
    double margin = 0.0;    // bound - half_qv
};

// Pathwise Novikov-type bound: (1/2) int g^2 <= C |x-y|^2.
NovikovCheck novikov_check(std::span<const double> g_nodes, const TimeGrid& grid,
                           double C, double dist);

} // namespace fbmlab
