#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace emi::opt {

using Objective = std::function<double(const std::vector<double>&)>;

// Box constraints. Empty vectors mean unconstrained (BFGS only).
struct Box {
    std::vector<double> lo;
    std::vector<double> hi;
    bool bounded() const noexcept { return !lo.empty(); }
};

struct BfgsOptions {
    int max_iterations = 500;
    double step_tol = 1e-14;  // relative step in the working variables
    double ftol = 1e-14;      // relative objective decrease per iteration
    double gtol = 0.0;        // absolute, infinity norm; 0 disables
    double fd_rel_step = 1e-6;
    double fd_abs_step = 1e-9;
};

struct AnnealOptions {
    double t0 = 1e6;
    double cooling = 0.1;
    double tol = 1e-9;
    int moves_per_temperature = 500;
    int min_temperatures = 8;
    int max_temperatures = 40;
    double initial_radius = 0.5;  // fraction of the (log) box width
    double energy_scale = 1.0;    // Metropolis test uses energy_scale * delta / T
    std::uint64_t seed = 1;
};

struct Outcome {
    std::vector<double> x;
    double f = 0.0;
    int iterations = 0;
    long evaluations = 0;
    bool converged = false;
};

// Quasi-Newton BFGS with central-difference gradients. With a bounded box the search runs
// in q where x = exp(log lo + (log hi - log lo) s(q)), s the logistic function, so iterates
// always stay strictly inside the box; lo must then be > 0.
Outcome minimize_bfgs(const Objective& f, const std::vector<double>& x0, const Box& box, const BfgsOptions& opt);

// Simulated annealing in log-box coordinates: Metropolis acceptance, geometric cooling,
// uniform moves of radius ~ sqrt(T / t0), reflected at the box faces.
Outcome minimize_sa(const Objective& f, const Box& box, const AnnealOptions& opt);

}  // namespace emi::opt
