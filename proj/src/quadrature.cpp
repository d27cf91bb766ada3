// quadrature.cpp
#include "fbmlab/quadrature.hpp"

#include <stdexcept>

namespace fbmlab::quad {

GaussLegendre::GaussLegendre(int n) : x(n), w(n) {
    // Newton iteration on P_n; nodes symmetric about 0.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double xi = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = xi;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2 * k - 1) * xi * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (xi * p1 - p0) / (xi * xi - 1.0);
            const double dx = p1 / dp;
            xi -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        x[i] = -xi;
        x[n - 1 - i] = xi;
        w[i] = w[n - 1 - i] = 2.0 / ((1.0 - xi * xi) * dp * dp);
    }
}

const GaussLegendre& gl32() {
    static const GaussLegendre rule(32);
    return rule;
}

namespace {

// Panelled GL with the left-edge substitution u = (x-a)^(1+alpha):
//   int_a^b f dx = int_0^{(b-a)^(1+alpha)} f(a + u^(1/(1+alpha)))
//                  * (x-a)^(-alpha) / (1+alpha) du
// For strongly singular exponents the substitution maps quadrature nodes to
// edge distances far below the representability of a +/- dx; the transformed
// integrand is smooth in dx there, so clamping to the floor loses nothing.
double edge_floor(double a, double b) {
    return 1e-13 * std::max({std::abs(a), std::abs(b), b - a});
}

double left_sub(const std::function<double(double)>& f, double a, double b,
                double alpha, int panels) {
    const double p = 1.0 + alpha;
    const double umax = std::pow(b - a, p);
    const double floor_dx = edge_floor(a, b);
    double acc = 0.0;
    for (int k = 0; k < panels; ++k) {
        const double u0 = umax * k / panels, u1 = umax * (k + 1) / panels;
        acc += gauss_legendre(
            [&](double u) {
                double dx = std::pow(u, 1.0 / p);
                if (a != 0.0 && a + dx <= a) dx = floor_dx;
                return f(a + dx) * std::pow(dx, -alpha) / p;
            },
            u0, u1);
    }
    return acc;
}

double right_sub(const std::function<double(double)>& f, double a, double b,
                 double beta, int panels) {
    const double p = 1.0 + beta;
    const double vmax = std::pow(b - a, p);
    const double floor_dx = edge_floor(a, b);
    double acc = 0.0;
    for (int k = 0; k < panels; ++k) {
        const double v0 = vmax * k / panels, v1 = vmax * (k + 1) / panels;
        acc += gauss_legendre(
            [&](double v) {
                double dx = std::pow(v, 1.0 / p);
                if (b - dx >= b) dx = floor_dx;
                return f(b - dx) * std::pow(dx, -beta) / p;
            },
            v0, v1);
    }
    return acc;
}

double plain(const std::function<double(double)>& f, double a, double b, int panels) {
    double acc = 0.0;
    for (int k = 0; k < panels; ++k)
        acc += gauss_legendre(f, a + (b - a) * k / panels, a + (b - a) * (k + 1) / panels);
    return acc;
}

} // namespace

double integrate_power_edges(const std::function<double(double)>& f,
                             double a, double b, double alpha, double beta,
                             int panels) {
    if (!(alpha > -1.0) || !(beta > -1.0))
        throw std::domain_error("integrate_power_edges: exponents must exceed -1");
    if (!(b > a)) return 0.0;
    const bool sa = alpha != 0.0, sb = beta != 0.0;
    if (sa && sb) {
        const double m = 0.5 * (a + b);
        return left_sub(f, a, m, alpha, panels) + right_sub(f, m, b, beta, panels);
    }
    if (sa) return left_sub(f, a, b, alpha, panels);
    if (sb) return right_sub(f, a, b, beta, panels);
    return plain(f, a, b, panels);
}

} // namespace fbmlab::quad
