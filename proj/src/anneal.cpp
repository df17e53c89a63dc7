#include <cmath>
#include <random>

#include "emi/error.hpp"
#include "emi/optimize.hpp"

namespace emi::opt {

namespace {

// Portable uniform [0, 1) from the top 53 bits.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double reflect(double u) {
    // fold onto [0, 1]
    u = std::fmod(std::abs(u), 2.0);
    return u > 1.0 ? 2.0 - u : u;
}

}  // namespace

Outcome minimize_sa(const Objective& f, const Box& box, const AnnealOptions& opt) {
    const std::size_t n = box.lo.size();
    if (n == 0 || box.hi.size() != n) throw ValidationError("annealing needs a bounded box");
    if (!(opt.t0 > 0.0) || !(opt.cooling > 0.0 && opt.cooling < 1.0) || !(opt.tol > 0.0) || !(opt.energy_scale > 0.0)) {
        throw ValidationError("annealing needs t0 > 0, cooling in (0, 1), tol > 0 and energy_scale > 0");
    }
    if (opt.moves_per_temperature < 1 || opt.min_temperatures < 1 || opt.max_temperatures < opt.min_temperatures) {
        throw ValidationError("annealing move and stage counts are inconsistent");
    }
    bool logscale = true;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(box.hi[i] > box.lo[i])) throw ValidationError("annealing box needs lo < hi");
        if (!(box.lo[i] > 0.0)) logscale = false;
    }
    auto to_x = [&](const std::vector<double>& u) {
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = logscale ? std::exp(std::log(box.lo[i]) + u[i] * std::log(box.hi[i] / box.lo[i]))
                            : box.lo[i] + u[i] * (box.hi[i] - box.lo[i]);
        }
        return x;
    };

    std::mt19937_64 rng(opt.seed);
    Outcome out;
    long evals = 0;
    auto value = [&](const std::vector<double>& u) {
        ++evals;
        const double v = f(to_x(u));
        return std::isnan(v) ? HUGE_VAL : v;
    };

    std::vector<double> cur(n);
    for (auto& v : cur) v = unit(rng);
    double f_cur = value(cur);
    std::vector<double> best = cur;
    double f_best = f_cur;
    std::vector<double> cand(n);

    double t = opt.t0;
    int stage = 0;
    for (; stage < opt.max_temperatures; ++stage) {
        const double radius = opt.initial_radius * std::sqrt(t / opt.t0);
        const double f_stage = f_best;
        for (int m = 0; m < opt.moves_per_temperature; ++m) {
            for (std::size_t i = 0; i < n; ++i) cand[i] = reflect(cur[i] + radius * (2.0 * unit(rng) - 1.0));
            const double f_cand = value(cand);
            const double delta = f_cand - f_cur;
            if (delta <= 0.0 || unit(rng) < std::exp(-opt.energy_scale * delta / t)) {
                cur = cand;
                f_cur = f_cand;
                if (f_cur < f_best) {
                    best = cur;
                    f_best = f_cur;
                }
            }
        }
        // continue the next temperature from the best point seen
        cur = best;
        f_cur = f_best;
        if (stage + 1 >= opt.min_temperatures && f_stage - f_best < opt.tol) {
            out.converged = true;
            ++stage;
            break;
        }
        t *= opt.cooling;
    }
    out.x = to_x(best);
    out.f = f_best;
    out.iterations = stage;
    out.evaluations = evals;
    return out;
}

}  // namespace emi::opt
