#include <algorithm>
#include <cmath>
#include <limits>

#include "emi/error.hpp"
#include "emi/optimize.hpp"

namespace emi::opt {

namespace {

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm_inf(const Vec& a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

double logistic(double q) { return 1.0 / (1.0 + std::exp(-q)); }

class Problem {
public:
    Problem(const Objective& f, const Box& box) : f_(f), box_(box) {
        if (box.bounded()) {
            for (std::size_t i = 0; i < box.lo.size(); ++i) {
                if (!(box.lo[i] > 0.0) || !(box.hi[i] > box.lo[i])) {
                    throw ValidationError("BFGS box needs 0 < lo < hi in every coordinate");
                }
                log_lo_.push_back(std::log(box.lo[i]));
                log_span_.push_back(std::log(box.hi[i]) - std::log(box.lo[i]));
            }
        }
    }

    Vec to_x(const Vec& q) const {
        if (!box_.bounded()) return q;
        Vec x(q.size());
        for (std::size_t i = 0; i < q.size(); ++i) {
            x[i] = std::clamp(std::exp(log_lo_[i] + log_span_[i] * logistic(q[i])), box_.lo[i], box_.hi[i]);
        }
        return x;
    }

    Vec to_q(const Vec& x) const {
        if (!box_.bounded()) return x;
        constexpr double edge = 1e-9;
        Vec q(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (!(x[i] >= box_.lo[i] && x[i] <= box_.hi[i])) throw ValidationError("BFGS start point outside the box");
            const double t = std::clamp((std::log(x[i]) - log_lo_[i]) / log_span_[i], edge, 1.0 - edge);
            q[i] = std::log(t / (1.0 - t));
        }
        return q;
    }

    double value(const Vec& q) {
        ++evaluations;
        const double v = f_(to_x(q));
        if (std::isnan(v)) throw NumericalError("objective returned NaN");
        return v;
    }

    Vec gradient(const Vec& q, const BfgsOptions& opt) {
        Vec g(q.size());
        Vec w = q;
        for (std::size_t i = 0; i < q.size(); ++i) {
            const double h = std::max(opt.fd_rel_step * std::abs(q[i]), opt.fd_abs_step);
            w[i] = q[i] + h;
            const double fp = value(w);
            w[i] = q[i] - h;
            const double fm = value(w);
            w[i] = q[i];
            g[i] = (fp - fm) / (2.0 * h);
        }
        return g;
    }

    long evaluations = 0;

private:
    const Objective& f_;
    const Box& box_;
    Vec log_lo_;
    Vec log_span_;
};

struct LinePoint {
    double alpha;
    double f;
    Vec g;
    bool ok;
};

double interpolate(double a_lo, double f_lo, double d_lo, double a_hi, double f_hi) {
    // minimiser of the quadratic through (a_lo, f_lo, d_lo) and (a_hi, f_hi)
    const double da = a_hi - a_lo;
    const double denom = 2.0 * (f_hi - f_lo - d_lo * da);
    double a = denom > 0.0 ? a_lo - d_lo * da * da / denom : 0.5 * (a_lo + a_hi);
    const double lo = std::min(a_lo, a_hi);
    const double hi = std::max(a_lo, a_hi);
    const double margin = 0.1 * (hi - lo);
    if (!(a > lo + margin && a < hi - margin)) a = 0.5 * (a_lo + a_hi);
    return a;
}

// Strong Wolfe line search, bracketing then zoom.
LinePoint line_search(Problem& p, const Vec& q, double f0, const Vec& g0, const Vec& d, double alpha0,
                      const BfgsOptions& opt) {
    constexpr double c1 = 1e-4;
    constexpr double c2 = 0.9;
    const double d0 = dot(g0, d);
    Vec trial(q.size());
    auto eval = [&](double a, bool with_grad, LinePoint& lp) {
        for (std::size_t i = 0; i < q.size(); ++i) trial[i] = q[i] + a * d[i];
        lp.alpha = a;
        lp.f = p.value(trial);
        if (with_grad) lp.g = p.gradient(trial, opt);
    };

    auto zoom = [&](double a_lo, double f_lo, double d_lo, Vec g_lo, double a_hi, double f_hi) -> LinePoint {
        for (int it = 0; it < 30; ++it) {
            const double a = interpolate(a_lo, f_lo, d_lo, a_hi, f_hi);
            LinePoint lp;
            eval(a, false, lp);
            if (lp.f > f0 + c1 * a * d0 || lp.f >= f_lo) {
                a_hi = a;
                f_hi = lp.f;
                continue;
            }
            lp.g = p.gradient(trial, opt);
            const double da = dot(lp.g, d);
            if (std::abs(da) <= -c2 * d0) {
                lp.ok = true;
                return lp;
            }
            if (da * (a_hi - a_lo) >= 0.0) {
                a_hi = a_lo;
                f_hi = f_lo;
            }
            a_lo = a;
            f_lo = lp.f;
            d_lo = da;
            g_lo = lp.g;
            if (std::abs(a_hi - a_lo) < 1e-16 * std::max(1.0, std::abs(a_lo))) break;
        }
        // accept the best sufficient-decrease point found, if any
        LinePoint lp{a_lo, f_lo, g_lo, a_lo > 0.0 && f_lo < f0};
        return lp;
    };

    double a_prev = 0.0;
    double f_prev = f0;
    double d_prev = d0;
    Vec g_prev = g0;
    double a = alpha0;
    for (int it = 0; it < 40; ++it) {
        LinePoint lp;
        eval(a, false, lp);
        if (lp.f > f0 + c1 * a * d0 || (it > 0 && lp.f >= f_prev)) {
            return zoom(a_prev, f_prev, d_prev, g_prev, a, lp.f);
        }
        if (it == 0) {
            // one value-only probe at the quadratic minimiser along d; exact for quadratics
            const double denom = 2.0 * (lp.f - f0 - d0 * a);
            const double aq = denom > 0.0 ? -d0 * a * a / denom : 0.0;
            if (aq > 0.1 * a && aq < 10.0 * a && std::abs(aq - a) > 1e-3 * a) {
                LinePoint lq;
                eval(aq, false, lq);
                if (lq.f < lp.f && lq.f <= f0 + c1 * aq * d0) {
                    a = aq;
                    lp = lq;
                } else {
                    for (std::size_t i = 0; i < q.size(); ++i) trial[i] = q[i] + a * d[i];
                }
            }
        }
        lp.g = p.gradient(trial, opt);
        const double da = dot(lp.g, d);
        if (std::abs(da) <= -c2 * d0) {
            lp.ok = true;
            return lp;
        }
        if (da >= 0.0) return zoom(a, lp.f, da, lp.g, a_prev, f_prev);
        a_prev = a;
        f_prev = lp.f;
        d_prev = da;
        g_prev = lp.g;
        a *= 2.0;
    }
    return {a_prev, f_prev, g_prev, a_prev > 0.0};
}

}  // namespace

Outcome minimize_bfgs(const Objective& f, const std::vector<double>& x0, const Box& box, const BfgsOptions& opt) {
    const std::size_t n = x0.size();
    if (n == 0) throw ValidationError("BFGS needs at least one parameter");
    if (box.bounded() && (box.lo.size() != n || box.hi.size() != n)) {
        throw ValidationError("BFGS box dimension does not match the start point");
    }
    Problem p(f, box);
    Vec q = p.to_q(x0);
    double fq = p.value(q);
    Vec g = p.gradient(q, opt);

    // inverse Hessian approximation, row-major
    Vec H(n * n, 0.0);
    auto reset = [&]() {
        std::fill(H.begin(), H.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) H[i * n + i] = 1.0;
    };
    reset();
    bool scaled = false;

    Outcome out;
    Vec d(n), s(n), y(n), hy(n);
    int it = 0;
    bool retried = false;
    for (; it < opt.max_iterations; ++it) {
        if (fq == 0.0 || (opt.gtol > 0.0 && norm_inf(g) <= opt.gtol)) {
            out.converged = true;
            break;
        }
        for (std::size_t i = 0; i < n; ++i) {
            double v = 0.0;
            for (std::size_t j = 0; j < n; ++j) v -= H[i * n + j] * g[j];
            d[i] = v;
        }
        if (dot(d, g) >= 0.0) {
            reset();
            for (std::size_t i = 0; i < n; ++i) d[i] = -g[i];
        }
        const double alpha0 = scaled ? 1.0 : std::min(1.0, 1.0 / std::max(norm_inf(g), 1e-300));
        const LinePoint lp = line_search(p, q, fq, g, d, alpha0, opt);
        if (!lp.ok) {
            if (!retried && scaled) {
                reset();
                scaled = false;
                retried = true;
                continue;
            }
            out.converged = true;  // no further decrease resolvable at this precision
            break;
        }
        retried = false;
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = lp.alpha * d[i];
            y[i] = lp.g[i] - g[i];
        }
        Vec q_new(n);
        for (std::size_t i = 0; i < n; ++i) q_new[i] = q[i] + s[i];
        const double f_old = fq;
        const double step = norm_inf(s);
        const double qscale = 1.0 + norm_inf(q);
        q = std::move(q_new);
        fq = lp.f;
        g = lp.g;

        const double sy = dot(s, y);
        if (sy > 1e-300 && sy > 1e-12 * std::sqrt(dot(s, s) * dot(y, y))) {
            if (!scaled) {
                const double gamma = sy / dot(y, y);
                for (auto& v : H) v *= gamma;
                scaled = true;
            }
            const double rho = 1.0 / sy;
            for (std::size_t i = 0; i < n; ++i) {
                double v = 0.0;
                for (std::size_t j = 0; j < n; ++j) v += H[i * n + j] * y[j];
                hy[i] = v;
            }
            const double yhy = dot(y, hy);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    H[i * n + j] += (1.0 + rho * yhy) * rho * s[i] * s[j] - rho * (hy[i] * s[j] + s[i] * hy[j]);
                }
            }
        }

        if (step <= opt.step_tol * qscale &&
            f_old - fq <= opt.ftol * std::max({std::abs(f_old), std::abs(fq), std::numeric_limits<double>::min()})) {
            out.converged = true;
            ++it;
            break;
        }
    }
    out.x = p.to_x(q);
    out.f = fq;
    out.iterations = it;
    out.evaluations = p.evaluations;
    return out;
}

}  // namespace emi::opt
