// quadrature.hpp -- Gauss-Legendre panels with power-law endpoint substitutions.
#pragma once

#include <cmath>
#include <functional>
#include <vector>

namespace fbmlab::quad {

struct GaussLegendre {
    std::vector<double> x;   // nodes on (-1, 1)
    std::vector<double> w;
    explicit GaussLegendre(int n);
};

const GaussLegendre& gl32();

template <class F>
double gauss_legendre(F&& f, double a, double b, const GaussLegendre& rule = gl32()) {
    if (!(b > a)) return 0.0;
    const double h = 0.5 * (b - a), m = 0.5 * (a + b);
    double acc = 0.0;
    for (std::size_t k = 0; k < rule.x.size(); ++k) acc += rule.w[k] * f(m + h * rule.x[k]);
    return h * acc;
}

// Integrate f over [a,b] where f behaves like (x-a)^alpha * smooth near a and
// (b-x)^beta * smooth near b, with alpha, beta > -1. Exponent 0 means the
// corresponding endpoint is regular. The substitutions u = (x-a)^(1+alpha),
// v = (b-x)^(1+beta) turn the integrable singularities into smooth integrands;
// f itself is only evaluated strictly inside (a,b).
double integrate_power_edges(const std::function<double(double)>& f,
                             double a, double b, double alpha, double beta,
                             int panels = 2);

} // namespace fbmlab::quad
