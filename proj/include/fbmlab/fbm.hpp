// fbm.hpp -- Volterra kernel evaluation and fBm path synthesis.
#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "fbmlab/grid.hpp"
#include "fbmlab/specialfn.hpp"

namespace fbmlab {

// R_H(t,s) = (t^{2H} + s^{2H} - |t-s|^{2H}) / 2, for t, s >= 0.
double fbm_covariance(HurstParam H, double t, double s);

// Normalization c_H making int_0^{t ^ s} K(t,r)K(s,r) dr = R_H(t,s) for the
// standard covariance above; equals 1 at H = 1/2.
double fbm_kernel_prefactor(HurstParam H);

// K_H(t,s) = c_H (t-s)^{H-1/2} 2F1(H-1/2, 1/2-H; H+1/2; 1 - t/s), 0 < s < t.
double fbm_kernel(HurstParam H, double t, double s, const AccuracyBudget& budget = {});

// dK_H/dt (t,s) = c_H (H-1/2) (s/t)^{1/2-H} (t-s)^{H-3/2}.
double fbm_kernel_dt(HurstParam H, double t, double s);

// int_a^b K_H(t, s) ds with singularity-aware quadrature (a may be 0, b may be t).
double fbm_kernel_cell_integral(HurstParam H, double t, double a, double b);

// Driving Gaussian coordinates of one path: the Wiener increments dW (variance
// dt each) plus the auxiliary normals consumed by the hybrid synthesis below.
// Fully determined by (seed, path_index); bit-identical across schedulings.
struct WienerIncrements {
    std::uint64_t seed = 0;
    std::uint64_t path_index = 0;
    TimeGrid grid;
    std::vector<double> dw;    // n entries, N(0, dt)
    std::vector<double> aux;   // n * (band + 1) entries, N(0, 1)

    static WienerIncrements sample(std::uint64_t seed, std::uint64_t path_index,
                                   const TimeGrid& grid);
    static WienerIncrements zero(const TimeGrid& grid);

    // this := a * this + other, componentwise over all Gaussian coordinates.
    void axpy(double a, const WienerIncrements& other);
};

struct FbmPath {
    HurstParam H;
    TimeGrid grid;
    std::vector<double> values;   // n + 1 entries, values[0] = 0
};

// Hybrid Volterra discretization of B^H_t = int_0^t K_H(t,s) dW_s.
//
// Within each cell the Wiener integrals of the `band` nearest kernel rows are
// represented exactly (joint Gaussian with the cell's increment, local Gram
// factorized once); cell 0 additionally carries the shared singular profile
// s^{H-1/2} onto which all later rows are projected. Every remaining (row,
// cell) pair uses the cell-averaged kernel weight. At H = 1/2 the scheme
// reduces to values[i] = sum of dW exactly.
class VolterraScheme {
public:
    VolterraScheme(HurstParam H, const TimeGrid& grid, int band = 2);

    FbmPath synthesize(const WienerIncrements& w) const;

    HurstParam hurst() const { return H_; }
    const TimeGrid& grid() const { return grid_; }
    int band() const { return band_; }

private:
    HurstParam H_;
    TimeGrid grid_;
    int band_;
    // far-field averages, row i covers cells [1, i - band - 1]
    std::vector<double> far_;          // packed rows
    std::vector<std::size_t> far_off_; // row offsets into far_
    // per-cell Cholesky factor of the local feature Gram, row-major dim_j^2
    std::vector<std::vector<double>> cell_chol_;
    std::vector<int> cell_dim_;
    // cell-0 projection coefficients of far rows onto {1, s^{H-1/2}}
    std::vector<double> proj_a_, proj_b_;
};

// Shared scheme cache (estimators reuse weights across paths and threads).
std::shared_ptr<const VolterraScheme> volterra_scheme(HurstParam H, const TimeGrid& grid);

FbmPath synthesize(HurstParam H, const TimeGrid& grid, const WienerIncrements& w);

// Exact-in-distribution sampler: dense Cholesky of the increment covariance.
// One retry with diagonal jitter 1e-12 * max diagonal, then failure.
FbmPath cholesky_sample(HurstParam H, const TimeGrid& grid, std::uint64_t seed,
                        std::uint64_t path_index);

// (K_H^* phi)(s) = K_H(T,s) phi(s) + int_s^T (phi(r) - phi(s)) dK_H/dr (r,s) dr
// for phi piecewise constant on the grid cells, evaluated at cell midpoints.
// The tail integral telescopes into exact kernel differences.
std::vector<double> kstar_apply(HurstParam H, const TimeGrid& grid,
                                std::span<const double> phi_cells);

// L2[0,T] inner product of two midpoint-sampled images of indicator functions
// under K_H^*, reconstructed by product integration against the weight
// r^{2H-1} (s-r)^{H-1/2} (t-r)^{H-1/2} with a fitted singular head at r = 0.
// node_i / node_j are the indicator endpoints' grid indices.
double indicator_inner_product(HurstParam H, const TimeGrid& grid,
                               std::span<const double> f_mids,
                               std::span<const double> g_mids,
                               int node_i, int node_j);

} // namespace fbmlab
