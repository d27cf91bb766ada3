// grid.hpp -- time discretization and the Hurst parameter.
#pragma once

#include <cstdint>
#include <stdexcept>

namespace fbmlab {

// H in (0, 1/2]; H = 1/2 is admitted only for the Brownian specialization.
struct HurstParam {
    double value;

    explicit HurstParam(double h) : value(h) {
        if (!(h > 0.0) || !(h <= 0.5))
            throw std::domain_error("HurstParam: requires 0 < H <= 1/2");
    }
    bool is_brownian() const { return value == 0.5; }
};

// Uniform grid t_i = i T / n on [0, T].
struct TimeGrid {
    double horizon = 1.0;
    int steps = 2;

    TimeGrid() = default;
    TimeGrid(double T, int n) : horizon(T), steps(n) {
        if (!(T > 0.0)) throw std::domain_error("TimeGrid: requires T > 0");
        if (n < 2) throw std::domain_error("TimeGrid: requires n >= 2");
    }
    double dt() const { return horizon / steps; }
    double node(int i) const { return horizon * i / steps; }
    double mid(int i) const { return horizon * (i + 0.5) / steps; }
    bool operator==(const TimeGrid& o) const {
        return horizon == o.horizon && steps == o.steps;
    }
};

} // namespace fbmlab
