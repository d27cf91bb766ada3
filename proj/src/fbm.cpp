// fbm.cpp
#include "fbmlab/fbm.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <tuple>

#include "fbmlab/quadrature.hpp"
#include "fbmlab/rng.hpp"

namespace fbmlab {

namespace {

double sqr(double v) { return v * v; }

// Per-H constants are needed millions of times inside the cell quadratures.
struct KernelConsts {
    double h = -1.0;
    double prefactor = 1.0;
    double connection_coeff = 0.0;   // Gamma(H+1/2)Gamma(1-2H)/Gamma(1/2-H)
};

const KernelConsts& kernel_consts(double h) {
    thread_local KernelConsts memo;
    if (memo.h != h) {
        memo.h = h;
        memo.prefactor =
            (h == 0.5) ? 1.0
                       : std::sqrt(2.0 * h *
                                   std::exp(log_gamma(1.5 - h) - log_gamma(h + 0.5) -
                                            log_gamma(2.0 - 2.0 * h)));
        memo.connection_coeff =
            (h == 0.5) ? 0.0
                       : std::exp(log_gamma(h + 0.5) + log_gamma(1.0 - 2.0 * h) -
                                  log_gamma(0.5 - h));
    }
    return memo;
}

// F(H-1/2, 1/2-H; H+1/2; z) for z <= 0. The Pfaff series stalls as z -> -inf
// (transformed argument -> 1), so large |z| goes through the z -> 1/z
// connection formula, whose first term closes and whose second carries the
// exact coefficient 1/2 for this parameter family.
double kernel_hyp_factor(double H, double z, const AccuracyBudget& budget) {
    const double a = H - 0.5, b = 0.5 - H, c = H + 0.5;
    if (z > -1.5) return gauss_2f1(a, b, c, z, budget);
    const double coeff1 = kernel_consts(H).connection_coeff;
    const double tail = gauss_2f1(0.5 - H, 1.0 - 2.0 * H, 2.0 - 2.0 * H, 1.0 / z, budget);
    return coeff1 * std::pow(-z, 0.5 - H) + 0.5 * std::pow(-z, H - 0.5) * tail;
}

void check_kernel_args(double t, double s) {
    if (!(s > 0.0) || !(s < t))
        throw std::domain_error("fbm_kernel: requires 0 < s < t");
}

// Cholesky with optional tolerance for semidefinite Grams (zero pivots become
// zero columns). Returns false on a nonpositive pivot in strict mode.
bool cholesky_in_place(std::vector<double>& m, int n, bool allow_semidefinite) {
    for (int r = 0; r < n; ++r) {
        const double gdiag = m[r * n + r];
        double d = gdiag;
        for (int k = 0; k < r; ++k) d -= sqr(m[r * n + k]);
        double lrr;
        if (allow_semidefinite) {
            lrr = (d > 1e-13 * std::max(gdiag, 1e-300)) ? std::sqrt(d) : 0.0;
        } else {
            if (!(d > 0.0)) return false;
            lrr = std::sqrt(d);
        }
        m[r * n + r] = lrr;
        for (int i = r + 1; i < n; ++i) {
            double v = m[i * n + r];
            for (int k = 0; k < r; ++k) v -= m[i * n + k] * m[r * n + k];
            m[i * n + r] = (lrr > 0.0) ? v / lrr : 0.0;
        }
        for (int j = r + 1; j < n; ++j) m[r * n + j] = 0.0;
    }
    return true;
}

} // namespace

double fbm_covariance(HurstParam H, double t, double s) {
    if (t < 0.0 || s < 0.0) throw std::domain_error("fbm_covariance: requires t, s >= 0");
    const double h2 = 2.0 * H.value;
    return 0.5 * (std::pow(t, h2) + std::pow(s, h2) - std::pow(std::abs(t - s), h2));
}

double fbm_kernel_prefactor(HurstParam H) { return kernel_consts(H.value).prefactor; }

double fbm_kernel(HurstParam H, double t, double s, const AccuracyBudget& budget) {
    check_kernel_args(t, s);
    if (H.is_brownian()) return 1.0;
    const double h = H.value;
    return fbm_kernel_prefactor(H) * std::pow(t - s, h - 0.5) *
           kernel_hyp_factor(h, 1.0 - t / s, budget);
}

double fbm_kernel_dt(HurstParam H, double t, double s) {
    check_kernel_args(t, s);
    if (H.is_brownian()) return 0.0;
    const double h = H.value;
    return fbm_kernel_prefactor(H) * (h - 0.5) * std::pow(s / t, 0.5 - h) *
           std::pow(t - s, h - 1.5);
}

double fbm_kernel_cell_integral(HurstParam H, double t, double a, double b) {
    if (!(a >= 0.0) || !(b > a) || !(b <= t))
        throw std::domain_error("fbm_kernel_cell_integral: requires 0 <= a < b <= t");
    if (H.is_brownian()) return b - a;
    const double h = H.value;
    const double alpha = (a == 0.0) ? h - 0.5 : 0.0;
    const double beta = (b == t) ? h - 0.5 : 0.0;
    return quad::integrate_power_edges([&](double s) { return fbm_kernel(H, t, s); },
                                       a, b, alpha, beta);
}

namespace {

// int_a^b K(t1,s) K(t2,s) ds
double cell_integral_kk(HurstParam H, double t1, double t2, double a, double b) {
    if (H.is_brownian()) return b - a;
    const double h = H.value;
    const double tm = std::min(t1, t2);
    const double alpha = (a == 0.0) ? 2.0 * h - 1.0 : 0.0;
    double beta = 0.0;
    if (b == tm) beta = (t1 == t2) ? 2.0 * h - 1.0 : h - 0.5;
    return quad::integrate_power_edges(
        [&](double s) { return fbm_kernel(H, t1, s) * fbm_kernel(H, t2, s); },
        a, b, alpha, beta);
}

// int_a^b K(t,s) s^{H-1/2} ds (cell-0 profile moment)
double cell_integral_kprof(HurstParam H, double t, double a, double b) {
    const double h = H.value;
    if (H.is_brownian())
        return (std::pow(b, h + 0.5) - std::pow(a, h + 0.5)) / (h + 0.5);
    const double alpha = (a == 0.0) ? 2.0 * h - 1.0 : 0.0;
    const double beta = (b == t) ? h - 0.5 : 0.0;
    return quad::integrate_power_edges(
        [&](double s) { return fbm_kernel(H, t, s) * std::pow(s, h - 0.5); },
        a, b, alpha, beta);
}

} // namespace

WienerIncrements WienerIncrements::sample(std::uint64_t seed, std::uint64_t path_index,
                                          const TimeGrid& grid) {
    WienerIncrements w{seed, path_index, grid, {}, {}};
    const int n = grid.steps;
    const int aux_per_cell = 3;   // band (2) + cell-0 profile slot
    const double sd = std::sqrt(grid.dt());
    w.dw.resize(n);
    w.aux.resize(static_cast<std::size_t>(n) * aux_per_cell);
    for (int j = 0; j < n; ++j)
        w.dw[j] = sd * normal_draw(seed, path_index, Stream::wiener, j);
    for (std::size_t k = 0; k < w.aux.size(); ++k)
        w.aux[k] = normal_draw(seed, path_index, Stream::band, k);
    return w;
}

WienerIncrements WienerIncrements::zero(const TimeGrid& grid) {
    WienerIncrements w{0, 0, grid, {}, {}};
    w.dw.assign(grid.steps, 0.0);
    w.aux.assign(static_cast<std::size_t>(grid.steps) * 3, 0.0);
    return w;
}

void WienerIncrements::axpy(double a, const WienerIncrements& other) {
    if (!(grid == other.grid))
        throw std::invalid_argument("WienerIncrements::axpy: grid mismatch");
    for (std::size_t k = 0; k < dw.size(); ++k) dw[k] = a * dw[k] + other.dw[k];
    for (std::size_t k = 0; k < aux.size(); ++k) aux[k] = a * aux[k] + other.aux[k];
}

VolterraScheme::VolterraScheme(HurstParam H, const TimeGrid& grid, int band)
    : H_(H), grid_(grid), band_(band) {
    const int n = grid.steps;
    const double dt = grid.dt();
    const double h = H.value;

    far_off_.assign(n + 2, 0);
    for (int i = 0; i <= n; ++i) {
        const int count = std::max(0, i - band_ - 1);   // far cells j in [1, i-band-1]
        far_off_[i + 1] = far_off_[i] + count;
    }
    far_.assign(far_off_[n + 1], 0.0);
    proj_a_.assign(n + 1, 0.0);
    proj_b_.assign(n + 1, 0.0);
    cell_dim_.assign(n, 0);
    cell_chol_.assign(n, {});

    if (H.is_brownian()) {
        // K == 1: far weights 1, all in-cell features equal dW, projection (1, 0).
        std::fill(far_.begin(), far_.end(), 1.0);
        for (int i = band_ + 1; i <= n; ++i) proj_a_[i] = 1.0;
        const double sd = std::sqrt(dt);
        for (int j = 0; j < n; ++j) {
            const int m = std::min(band_, n - j);
            const int dim = 1 + m + (j == 0 ? 1 : 0);
            cell_dim_[j] = dim;
            auto& L = cell_chol_[j];
            L.assign(static_cast<std::size_t>(dim) * dim, 0.0);
            for (int r = 0; r < dim; ++r) L[r * dim] = sd;
        }
        return;
    }

    // far-field cell averages
    for (int i = band_ + 2; i <= n; ++i) {
        const double ti = grid.node(i);
        double* row = far_.data() + far_off_[i];
        for (int j = 1; j <= i - band_ - 1; ++j)
            row[j - 1] = fbm_kernel_cell_integral(H, ti, grid.node(j), grid.node(j + 1)) / dt;
    }

    // cell-0 projection onto {1, s^{H-1/2}}
    const double m1 = std::pow(dt, h + 0.5) / (h + 0.5);
    const double m2 = std::pow(dt, 2.0 * h) / (2.0 * h);
    const double det = dt * m2 - m1 * m1;
    for (int i = band_ + 1; i <= n; ++i) {
        const double ti = grid.node(i);
        const double r0 = fbm_kernel_cell_integral(H, ti, 0.0, dt);
        const double r1 = cell_integral_kprof(H, ti, 0.0, dt);
        proj_a_[i] = (m2 * r0 - m1 * r1) / det;
        proj_b_[i] = (dt * r1 - m1 * r0) / det;
    }

    // per-cell joint Gram of [1, (profile), K_{j+1}, ..., K_{j+m}]
    for (int j = 0; j < n; ++j) {
        const double a = grid.node(j), b = grid.node(j + 1);
        const int m = std::min(band_, n - j);
        const bool prof = (j == 0);
        const int dim = 1 + (prof ? 1 : 0) + m;
        cell_dim_[j] = dim;
        std::vector<double> G(static_cast<std::size_t>(dim) * dim, 0.0);
        const int kbase = prof ? 2 : 1;

        G[0] = dt;
        if (prof) {
            G[0 * dim + 1] = G[1 * dim + 0] = m1;
            G[1 * dim + 1] = m2;
        }
        for (int k = 1; k <= m; ++k) {
            const double tk = grid.node(j + k);
            const int rk = kbase + k - 1;
            const double ik = fbm_kernel_cell_integral(H, tk, a, b);
            G[0 * dim + rk] = G[rk * dim + 0] = ik;
            if (prof) {
                const double pk = cell_integral_kprof(H, tk, a, b);
                G[1 * dim + rk] = G[rk * dim + 1] = pk;
            }
            for (int l = 1; l <= k; ++l) {
                const int rl = kbase + l - 1;
                const double v = cell_integral_kk(H, tk, grid.node(j + l), a, b);
                G[rk * dim + rl] = G[rl * dim + rk] = v;
            }
        }
        if (!cholesky_in_place(G, dim, /*allow_semidefinite=*/true))
            throw std::runtime_error("VolterraScheme: local Gram not positive semidefinite");
        cell_chol_[j] = std::move(G);
    }
}

FbmPath VolterraScheme::synthesize(const WienerIncrements& w) const {
    const int n = grid_.steps;
    if (!(w.grid == grid_) || static_cast<int>(w.dw.size()) != n ||
        w.aux.size() != static_cast<std::size_t>(n) * 3)
        throw std::invalid_argument("synthesize: grid/increment size mismatch");

    FbmPath path{H_, grid_, std::vector<double>(n + 1, 0.0)};
    if (H_.is_brownian()) {
        double run = 0.0;
        for (int i = 1; i <= n; ++i) {
            run += w.dw[i - 1];
            path.values[i] = run;
        }
        return path;
    }

    const double inv_sd = 1.0 / std::sqrt(grid_.dt());

    // local features per cell: feat[j][r] = sum_l L[r][l] z_l, z_0 = dW_j / sqrt(dt)
    std::vector<double> feats;
    std::vector<std::size_t> feat_off(n + 1, 0);
    for (int j = 0; j < n; ++j) feat_off[j + 1] = feat_off[j] + cell_dim_[j];
    feats.assign(feat_off[n], 0.0);
    std::vector<double> z;
    for (int j = 0; j < n; ++j) {
        const int dim = cell_dim_[j];
        const auto& L = cell_chol_[j];
        z.assign(dim, 0.0);
        z[0] = w.dw[j] * inv_sd;
        for (int l = 1; l < dim; ++l) z[l] = w.aux[static_cast<std::size_t>(j) * 3 + (l - 1)];
        double* f = feats.data() + feat_off[j];
        for (int r = 0; r < dim; ++r) {
            double acc = 0.0;
            for (int l = 0; l <= r; ++l) acc += L[static_cast<std::size_t>(r) * dim + l] * z[l];
            f[r] = acc;
        }
    }

    for (int i = 1; i <= n; ++i) {
        double acc = 0.0;
        // in-band cells: exact Wiener integrals of the singular rows
        for (int k = 1; k <= std::min(band_, i); ++k) {
            const int j = i - k;
            const int kbase = (j == 0) ? 2 : 1;
            acc += feats[feat_off[j] + kbase + k - 1];
        }
        // cell 0 via singular-profile projection
        if (i > band_) acc += proj_a_[i] * w.dw[0] + proj_b_[i] * feats[feat_off[0] + 1];
        // far field
        const double* row = far_.data() + far_off_[i];
        const int count = static_cast<int>(far_off_[i + 1] - far_off_[i]);
        for (int j = 1; j <= count; ++j) acc += row[j - 1] * w.dw[j];
        path.values[i] = acc;
    }
    return path;
}

namespace {

using SchemeKey = std::tuple<std::uint64_t, std::uint64_t, int, int>;

SchemeKey scheme_key(HurstParam H, const TimeGrid& grid, int band) {
    std::uint64_t hb, tb;
    static_assert(sizeof(double) == sizeof(std::uint64_t));
    std::memcpy(&hb, &H.value, sizeof(hb));
    std::memcpy(&tb, &grid.horizon, sizeof(tb));
    return {hb, tb, grid.steps, band};
}

} // namespace

std::shared_ptr<const VolterraScheme> volterra_scheme(HurstParam H, const TimeGrid& grid) {
    static std::mutex mu;
    static std::map<SchemeKey, std::shared_ptr<const VolterraScheme>> cache;
    const auto key = scheme_key(H, grid, 2);
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    auto scheme = std::make_shared<const VolterraScheme>(H, grid, 2);
    std::lock_guard<std::mutex> lock(mu);
    auto [it, inserted] = cache.emplace(key, std::move(scheme));
    return it->second;
}

FbmPath synthesize(HurstParam H, const TimeGrid& grid, const WienerIncrements& w) {
    return volterra_scheme(H, grid)->synthesize(w);
}

namespace {

std::shared_ptr<const std::vector<double>> increment_cholesky(HurstParam H,
                                                              const TimeGrid& grid) {
    static std::mutex mu;
    static std::map<SchemeKey, std::shared_ptr<const std::vector<double>>> cache;
    const auto key = scheme_key(H, grid, -1);
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    const int n = grid.steps;
    std::vector<double> cov(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double a0 = grid.node(i), a1 = grid.node(i + 1);
            const double b0 = grid.node(j), b1 = grid.node(j + 1);
            cov[static_cast<std::size_t>(i) * n + j] =
                fbm_covariance(H, a1, b1) - fbm_covariance(H, a1, b0) -
                fbm_covariance(H, a0, b1) + fbm_covariance(H, a0, b0);
        }
    std::vector<double> fac = cov;
    if (!cholesky_in_place(fac, n, /*allow_semidefinite=*/false)) {
        double max_diag = 0.0;
        for (int i = 0; i < n; ++i)
            max_diag = std::max(max_diag, cov[static_cast<std::size_t>(i) * n + i]);
        fac = cov;
        for (int i = 0; i < n; ++i) fac[static_cast<std::size_t>(i) * n + i] += 1e-12 * max_diag;
        if (!cholesky_in_place(fac, n, /*allow_semidefinite=*/false))
            throw std::runtime_error("cholesky_sample: increment covariance not positive definite");
    }
    auto out = std::make_shared<const std::vector<double>>(std::move(fac));
    std::lock_guard<std::mutex> lock(mu);
    auto [it, inserted] = cache.emplace(key, std::move(out));
    return it->second;
}

} // namespace

FbmPath cholesky_sample(HurstParam H, const TimeGrid& grid, std::uint64_t seed,
                        std::uint64_t path_index) {
    const int n = grid.steps;
    const auto fac = increment_cholesky(H, grid);
    std::vector<double> z(n);
    for (int k = 0; k < n; ++k) z[k] = normal_draw(seed, path_index, Stream::cholesky, k);
    FbmPath path{H, grid, std::vector<double>(n + 1, 0.0)};
    double run = 0.0;
    const double* L = fac->data();
    for (int i = 0; i < n; ++i) {
        double inc = 0.0;
        for (int k = 0; k <= i; ++k) inc += L[static_cast<std::size_t>(i) * n + k] * z[k];
        run += inc;
        path.values[i + 1] = run;
    }
    return path;
}

std::vector<double> kstar_apply(HurstParam H, const TimeGrid& grid,
                                std::span<const double> phi_cells) {
    const int n = grid.steps;
    if (static_cast<int>(phi_cells.size()) != n)
        throw std::invalid_argument("kstar_apply: expects one value per grid cell");
    const double T = grid.horizon;
    std::vector<double> out(n, 0.0);
    for (int k = 0; k < n; ++k) {
        const double s = grid.mid(k);
        // On (s, t_{k+1}) the step function equals phi(s), so the tail integral
        // starts at the next node and telescopes into kernel differences.
        double acc = fbm_kernel(H, T, s) * phi_cells[k];
        double k_prev = fbm_kernel(H, grid.node(k + 1), s);
        for (int m = k + 1; m < n; ++m) {
            const double k_next = fbm_kernel(H, grid.node(m + 1), s);
            acc += (phi_cells[m] - phi_cells[k]) * (k_next - k_prev);
            k_prev = k_next;
        }
        out[k] = acc;
    }
    return out;
}

double indicator_inner_product(HurstParam H, const TimeGrid& grid,
                               std::span<const double> f_mids,
                               std::span<const double> g_mids,
                               int node_i, int node_j) {
    const int n = grid.steps;
    if (static_cast<int>(f_mids.size()) != n || static_cast<int>(g_mids.size()) != n)
        throw std::invalid_argument("indicator_inner_product: expects midpoint samples");
    if (node_i < 1 || node_j < 1 || node_i > n || node_j > n)
        throw std::invalid_argument("indicator_inner_product: node indices out of range");

    const double h = H.value;
    const double dt = grid.dt();
    const int kmax = std::min(node_i, node_j);
    const double st = grid.node(kmax);
    const double tt = grid.node(std::max(node_i, node_j));
    const double alpha = 2.0 * h - 1.0;
    const double beta = (node_i == node_j) ? 2.0 * h - 1.0 : h - 0.5;

    auto weight = [&](double r) {
        double w = std::pow(r, alpha) * std::pow(st - r, beta);
        if (node_i != node_j) w *= std::pow(tt - r, h - 0.5);
        return w;
    };
    auto weight_moment = [&](double a, double b, double extra_pow, int order,
                             double mid) {
        const double ea = (a == 0.0) ? alpha + extra_pow : 0.0;
        const double eb = (b == st) ? beta : 0.0;
        return quad::integrate_power_edges(
            [&](double r) {
                double v = weight(r) * ((extra_pow != 0.0) ? std::pow(r, extra_pow) : 1.0);
                for (int o = 0; o < order; ++o) v *= (r - mid);
                return v;
            },
            a, b, ea, eb);
    };

    std::vector<double> F(kmax);
    for (int k = 0; k < kmax; ++k) {
        const double r = grid.mid(k);
        F[k] = f_mids[k] * g_mids[k] / weight(r);
    }

    double total = 0.0;
    int k0 = 0;
    // singular head: fit F ~ a + b r^{1-2H} (the kernel's subleading small-r term)
    const int mh = std::min(4, kmax / 2);
    if (mh >= 2 && 1.0 - 2.0 * h > 1e-9) {
        double s11 = 0, s12 = 0, s22 = 0, r1 = 0, r2 = 0;
        for (int k = 0; k < mh; ++k) {
            const double p = std::pow(grid.mid(k), 1.0 - 2.0 * h);
            s11 += 1.0;
            s12 += p;
            s22 += p * p;
            r1 += F[k];
            r2 += F[k] * p;
        }
        const double det = s11 * s22 - s12 * s12;
        const double ca = (s22 * r1 - s12 * r2) / det;
        const double cb = (s11 * r2 - s12 * r1) / det;
        total += ca * weight_moment(0.0, mh * dt, 0.0, 0, 0.0) +
                 cb * weight_moment(0.0, mh * dt, 1.0 - 2.0 * h, 0, 0.0);
        k0 = mh;
    }
    for (int k = k0; k < kmax; ++k) {
        const double a = grid.node(k), b = grid.node(k + 1);
        const double mid = grid.mid(k);
        total += F[k] * weight_moment(a, b, 0.0, 0, mid);
        double dF = 0.0;
        if (k0 < k && k < kmax - 1)
            dF = (F[k + 1] - F[k - 1]) / (2.0 * dt);
        else if (k == k0 && kmax > k0 + 1)
            dF = (F[k + 1] - F[k]) / dt;
        else if (k == kmax - 1 && kmax > k0 + 1)
            dF = (F[k] - F[k - 1]) / dt;
        if (dF != 0.0) total += dF * weight_moment(a, b, 0.0, 1, mid);
    }
    return total;
}

} // namespace fbmlab
