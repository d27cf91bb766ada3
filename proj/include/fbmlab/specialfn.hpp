// specialfn.hpp -- log-Gamma, Beta, and Gauss 2F1 on nonpositive arguments.
#pragma once

#include <stdexcept>
#include <string>

namespace fbmlab {

// Series budget for hypergeometric evaluation.
struct AccuracyBudget {
    double rel_tol = 1e-14;
    int max_terms = 20000;
};

// Thrown when the 2F1 series fails to meet rel_tol within max_terms.
// Carries the partial sum accumulated so far.
class accuracy_error : public std::runtime_error {
public:
    accuracy_error(const std::string& what, double partial)
        : std::runtime_error(what), partial_sum_(partial) {}
    double partial_sum() const noexcept { return partial_sum_; }

private:
    double partial_sum_;
};

// ln Gamma(x) for x > 0. Lanczos rational approximation (g = 7, n = 9)
// with the reflection formula below x = 0.5.
double log_gamma(double x);

// Euler Beta, B(a,b) = exp(lgamma(a) + lgamma(b) - lgamma(a+b)), a, b > 0.
double beta(double a, double b);

// Gauss hypergeometric 2F1(a, b; c; z) for c > 0 and z <= 0.
// Pfaff transformation maps z <= 0 to w = z/(z-1) in [0,1); the transformed
// power series is summed under the budget.
double gauss_2f1(double a, double b, double c, double z,
                 const AccuracyBudget& budget = {});

} // namespace fbmlab
