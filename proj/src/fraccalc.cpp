// fraccalc.cpp
#include "fbmlab/fraccalc.hpp"

#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>

#include "fbmlab/fbm.hpp"
#include "fbmlab/quadrature.hpp"
#include "fbmlab/specialfn.hpp"

namespace fbmlab {

SampledPath rl_integral(double alpha, const SampledPath& f) {
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw std::domain_error("rl_integral: requires 0 < alpha < 1");
    const int n = f.grid.steps;
    const bool mids = f.tag == SampledPath::Tag::mids;
    if (static_cast<int>(f.values.size()) != (mids ? n : n + 1))
        throw std::invalid_argument("rl_integral: sample size does not match grid");

    SampledPath out{f.grid, f.tag, std::vector<double>(f.values.size(), 0.0)};
    const double inv_gamma_a1 = std::exp(-log_gamma(alpha + 1.0));

    // Cell moments int_{cell ^ [0,p]} (p-r)^{alpha-1} dr = [(p-a)^a - (p-b)^a]/a
    // are exact; f enters as its per-cell sample (midpoint value, or the left
    // node value when sampled on nodes).
    auto eval_at = [&](double p) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j) {
            const double a = f.grid.node(j);
            if (a >= p) break;
            const double b = std::min(f.grid.node(j + 1), p);
            const double fj = mids ? f.values[j] : f.values[j];
            const double w = std::pow(p - a, alpha) - std::pow(p - b, alpha);
            acc += fj * w;
        }
        return acc * inv_gamma_a1;   // 1/(Gamma(alpha) alpha) = 1/Gamma(alpha+1)
    };

    if (mids) {
        for (int i = 0; i < n; ++i) out.values[i] = eval_at(f.grid.mid(i));
    } else {
        for (int i = 1; i <= n; ++i) out.values[i] = eval_at(f.grid.node(i));
    }
    return out;
}

KhInverse::KhInverse(HurstParam H, const TimeGrid& grid) : H_(H), grid_(grid) {
    if (!(H.value < 0.5)) throw std::domain_error("KhInverse: requires H < 1/2");
    const int n = grid.steps;
    const double h = H.value;
    inv_gamma_ = std::exp(-log_gamma(0.5 - h));

    scale_.assign(n + 1, 0.0);
    for (int i = 1; i <= n; ++i) scale_[i] = inv_gamma_ * std::pow(grid.node(i), h - 0.5);

    row_off_.assign(n + 2, 0);
    for (int i = 0; i <= n; ++i) row_off_[i + 1] = row_off_[i] + (i > 0 ? i : 0);
    moments_.assign(row_off_[n + 1], 0.0);
    for (int i = 1; i <= n; ++i) {
        const double s = grid.node(i);
        double* row = moments_.data() + row_off_[i];
        for (int j = 0; j < i; ++j) {
            const double a = grid.node(j), b = grid.node(j + 1);
            const double ea = (j == 0) ? 0.5 - h : 0.0;
            const double eb = (j == i - 1) ? -h - 0.5 : 0.0;
            row[j] = quad::integrate_power_edges(
                [&](double r) {
                    return std::pow(r, 0.5 - h) * std::pow(s - r, -h - 0.5);
                },
                a, b, ea, eb);
        }
    }
}

std::vector<double> KhInverse::apply(std::span<const double> u_cells) const {
    const int n = grid_.steps;
    if (static_cast<int>(u_cells.size()) != n)
        throw std::invalid_argument("KhInverse::apply: expects one value per cell");
    std::vector<double> g(n + 1, 0.0);
    for (int i = 1; i <= n; ++i) {
        const double* row = moments_.data() + row_off_[i];
        double acc = 0.0;
        for (int j = 0; j < i; ++j) acc += row[j] * u_cells[j];
        g[i] = scale_[i] * acc;
    }
    return g;
}

std::shared_ptr<const KhInverse> kh_inverse_operator(HurstParam H, const TimeGrid& grid) {
    static std::mutex mu;
    static std::map<std::tuple<std::uint64_t, std::uint64_t, int>,
                    std::shared_ptr<const KhInverse>>
        cache;
    std::uint64_t hb, tb;
    std::memcpy(&hb, &H.value, sizeof(hb));
    std::memcpy(&tb, &grid.horizon, sizeof(tb));
    const auto key = std::make_tuple(hb, tb, grid.steps);
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    auto op = std::make_shared<const KhInverse>(H, grid);
    std::lock_guard<std::mutex> lock(mu);
    auto [it, inserted] = cache.emplace(key, std::move(op));
    return it->second;
}

std::vector<double> kh_inverse_ac(HurstParam H, const TimeGrid& grid,
                                  std::span<const double> u_cells) {
    return kh_inverse_operator(H, grid)->apply(u_cells);
}

std::vector<double> kh_apply(HurstParam H, const TimeGrid& grid,
                             std::span<const double> f_mids) {
    if (!(H.value < 0.5) && !H.is_brownian())
        throw std::domain_error("kh_apply: requires H <= 1/2");
    const int n = grid.steps;
    if (static_cast<int>(f_mids.size()) != n)
        throw std::invalid_argument("kh_apply: expects midpoint samples");
    std::vector<double> out(n + 1, 0.0);
    for (int i = 1; i <= n; ++i) {
        const double t = grid.node(i);
        double acc = 0.0;
        for (int j = 0; j < i; ++j)
            acc += f_mids[j] * fbm_kernel_cell_integral(H, t, grid.node(j), grid.node(j + 1));
        out[i] = acc;
    }
    return out;
}

} // namespace fbmlab
