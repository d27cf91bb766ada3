// fraccalc.hpp -- Riemann-Liouville integrals and the K_H / K_H^{-1} operators
// (absolutely continuous branch, H < 1/2) on sampled paths.
#pragma once

#include <memory>
#include <span>
#include <vector>

#include "fbmlab/grid.hpp"

namespace fbmlab {

// Values attached either to grid nodes (n+1 entries) or cell midpoints (n).
struct SampledPath {
    enum class Tag { nodes, mids };
    TimeGrid grid;
    Tag tag = Tag::nodes;
    std::vector<double> values;
};

// (I^alpha_{0+} f)(p) = Gamma(alpha)^{-1} int_0^p (p-r)^{alpha-1} f(r) dr,
// product integration against the piecewise-constant sample of f; evaluated at
// the same points the input is sampled on. Requires 0 < alpha < 1.
SampledPath rl_integral(double alpha, const SampledPath& f);

// (K_H^{-1} int_0^. u)(s) = Gamma(1/2-H)^{-1} s^{H-1/2}
//                            int_0^s r^{1/2-H} u(r) (s-r)^{-H-1/2} dr
// with u piecewise constant on grid cells. The double-power weight is
// integrated exactly per cell; node 0 returns 0 (the s^{1/2-H} limit).
// Moments are cached per (H, grid) since estimators apply this per path.
class KhInverse {
public:
    KhInverse(HurstParam H, const TimeGrid& grid);

    // u_cells: n per-cell values; returns n+1 node values, [0] = 0.
    std::vector<double> apply(std::span<const double> u_cells) const;

    HurstParam hurst() const { return H_; }
    const TimeGrid& grid() const { return grid_; }

private:
    HurstParam H_;
    TimeGrid grid_;
    double inv_gamma_;
    std::vector<double> scale_;     // s_i^{H-1/2} / Gamma(1/2-H)
    std::vector<double> moments_;   // packed lower-triangular rows
    std::vector<std::size_t> row_off_;
};

std::shared_ptr<const KhInverse> kh_inverse_operator(HurstParam H, const TimeGrid& grid);

std::vector<double> kh_inverse_ac(HurstParam H, const TimeGrid& grid,
                                  std::span<const double> u_cells);

// (K_H f)(t_i) = int_0^{t_i} K_H(t_i, s) f(s) ds from midpoint samples of f,
// using cell-averaged kernel integrals. Returns n+1 node values.
std::vector<double> kh_apply(HurstParam H, const TimeGrid& grid,
                             std::span<const double> f_mids);

} // namespace fbmlab
