// stats.hpp -- compensated accumulation and mean/SE reduction.
#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace fbmlab {

// Neumaier-compensated sum; merging partials in a fixed order keeps results
// independent of how the work was scheduled.
struct KahanSum {
    double s = 0.0;
    double c = 0.0;

    void add(double v) {
        const double t = s + v;
        if (std::abs(s) >= std::abs(v))
            c += (s - t) + v;
        else
            c += (v - t) + s;
        s = t;
    }
    void merge(const KahanSum& o) {
        add(o.s);
        add(o.c);
    }
    double value() const { return s + c; }
};

struct MeanSE {
    double mean = 0.0;
    double se = 0.0;
    std::int64_t n = 0;
};

// Mean and standard error from compensated sums of x and x^2.
inline MeanSE mean_se(const KahanSum& sx, const KahanSum& sxx, std::int64_t n) {
    MeanSE r;
    r.n = n;
    if (n <= 0) return r;
    r.mean = sx.value() / static_cast<double>(n);
    if (n > 1) {
        const double var =
            (sxx.value() - static_cast<double>(n) * r.mean * r.mean) / (n - 1.0);
        r.se = std::sqrt(std::max(var, 0.0) / static_cast<double>(n));
    }
    return r;
}

} // namespace fbmlab
