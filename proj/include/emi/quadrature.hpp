#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace emi::quad {

// Evaluates `dim` real components at n nodes. out is component-major: out[c * n + i].
using BatchIntegrand = std::function<void(const double* x, std::size_t n, double* out)>;

struct Options {
    double rel_tol = 1e-8;
    double abs_tol = 1e-16;
    int max_subdivisions = 200;
};

struct Result {
    std::vector<double> value;
    std::vector<double> error;
    int intervals = 0;
    int evaluations = 0;
    bool converged = false;
};

// Globally adaptive 7-15 Gauss-Kronrod on [a, b] for a vector integrand. Every component
// must satisfy error <= max(abs_tol, rel_tol |value|). On exhaustion the best estimate is
// returned with converged = false.
Result gauss_kronrod(const BatchIntegrand& f, std::size_t dim, double a, double b, const Options& opt);

}  // namespace emi::quad
