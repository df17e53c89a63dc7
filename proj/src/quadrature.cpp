#include "emi/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "emi/error.hpp"

namespace emi::quad {

namespace {

// Kronrod abscissae (positive half, xgk[7] = 0) and weights; Gauss weights on odd nodes.
constexpr double xgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                           0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                           0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                           0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double wgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                           0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                           0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                           0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                          0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr std::size_t kNodes = 15;
constexpr double kEpmach = std::numeric_limits<double>::epsilon();
constexpr double kUflow = std::numeric_limits<double>::min();

struct Interval {
    double a;
    double b;
    std::vector<double> value;
    std::vector<double> error;
    double badness;  // max over components of error / tolerance share
};

void nodes(double a, double b, double* x) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    for (int j = 0; j < 7; ++j) {
        x[2 * j] = c - h * xgk[j];
        x[2 * j + 1] = c + h * xgk[j];
    }
    x[14] = c;
}

// f holds dim x kNodes values in the order produced by nodes().
void rule(const double* f, std::size_t stride, std::size_t dim, double a, double b, std::vector<double>& value,
          std::vector<double>& error) {
    const double h = 0.5 * (b - a);
    const double dh = std::abs(h);
    value.resize(dim);
    error.resize(dim);
    for (std::size_t c = 0; c < dim; ++c) {
        const double* fc = f + c * stride;
        const double fcenter = fc[14];
        double resk = fcenter * wgk[7];
        double resg = fcenter * wg[3];
        double resabs = std::abs(resk);
        for (int j = 0; j < 7; ++j) {
            const double f1 = fc[2 * j];
            const double f2 = fc[2 * j + 1];
            resk += wgk[j] * (f1 + f2);
            resabs += wgk[j] * (std::abs(f1) + std::abs(f2));
            if (j % 2 == 1) resg += wg[j / 2] * (f1 + f2);
        }
        const double reskh = resk * 0.5;
        double resasc = wgk[7] * std::abs(fcenter - reskh);
        for (int j = 0; j < 7; ++j) {
            resasc += wgk[j] * (std::abs(fc[2 * j] - reskh) + std::abs(fc[2 * j + 1] - reskh));
        }
        double err = std::abs((resk - resg) * h);
        resasc *= dh;
        resabs *= dh;
        if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
        if (resabs > kUflow / (50.0 * kEpmach)) err = std::max(kEpmach * 50.0 * resabs, err);
        value[c] = resk * h;
        error[c] = err;
    }
}

}  // namespace

Result gauss_kronrod(const BatchIntegrand& f, std::size_t dim, double a, double b, const Options& opt) {
    if (!(opt.rel_tol > 0.0 && opt.rel_tol < 1.0)) throw ValidationError("rel_tol must be in (0, 1)");
    if (!(opt.abs_tol >= 0.0)) throw ValidationError("abs_tol must be >= 0");
    if (opt.max_subdivisions < 1) throw ValidationError("max_subdivisions must be >= 1");
    if (dim == 0) throw ValidationError("integrand dimension must be >= 1");

    Result res;
    res.value.assign(dim, 0.0);
    res.error.assign(dim, 0.0);
    if (a == b) {
        res.converged = true;
        return res;
    }

    std::vector<double> x(2 * kNodes);
    std::vector<double> fx(dim * 2 * kNodes);
    auto check_finite = [&](std::size_t count) {
        for (std::size_t i = 0; i < dim * count; ++i) {
            if (!std::isfinite(fx[i])) throw NumericalError("non-finite integrand value");
        }
    };

    std::vector<Interval> pieces;
    pieces.reserve(static_cast<std::size_t>(opt.max_subdivisions) + 1);
    {
        nodes(a, b, x.data());
        f(x.data(), kNodes, fx.data());
        check_finite(kNodes);
        res.evaluations += static_cast<int>(kNodes);
        Interval iv{a, b, {}, {}, 0.0};
        rule(fx.data(), kNodes, dim, a, b, iv.value, iv.error);
        pieces.push_back(std::move(iv));
    }

    std::vector<double> total(dim);
    std::vector<double> total_err(dim);
    auto assess = [&]() {
        std::fill(total.begin(), total.end(), 0.0);
        std::fill(total_err.begin(), total_err.end(), 0.0);
        for (const auto& p : pieces) {
            for (std::size_t c = 0; c < dim; ++c) {
                total[c] += p.value[c];
                total_err[c] += p.error[c];
            }
        }
        bool done = true;
        for (std::size_t c = 0; c < dim; ++c) {
            const double tol = std::max(opt.abs_tol, opt.rel_tol * std::abs(total[c]));
            if (total_err[c] > tol) done = false;
        }
        // rank intervals by their worst component relative to that component's tolerance
        for (auto& p : pieces) {
            double worst = 0.0;
            for (std::size_t c = 0; c < dim; ++c) {
                const double tol = std::max(opt.abs_tol, opt.rel_tol * std::abs(total[c]));
                worst = std::max(worst, p.error[c] / (tol > 0.0 ? tol : kUflow));
            }
            p.badness = worst;
        }
        return done;
    };

    bool done = assess();
    while (!done && static_cast<int>(pieces.size()) < opt.max_subdivisions) {
        auto worst = std::max_element(pieces.begin(), pieces.end(),
                                      [](const Interval& l, const Interval& r) { return l.badness < r.badness; });
        const double lo = worst->a;
        const double hi = worst->b;
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) break;  // interval cannot be split further
        nodes(lo, mid, x.data());
        nodes(mid, hi, x.data() + kNodes);
        f(x.data(), 2 * kNodes, fx.data());
        check_finite(2 * kNodes);
        res.evaluations += static_cast<int>(2 * kNodes);

        Interval left{lo, mid, {}, {}, 0.0};
        Interval right{mid, hi, {}, {}, 0.0};
        // component c of node i sits at fx[c * 2 * kNodes + i]
        rule(fx.data(), 2 * kNodes, dim, lo, mid, left.value, left.error);
        rule(fx.data() + kNodes, 2 * kNodes, dim, mid, hi, right.value, right.error);
        *worst = std::move(left);
        pieces.push_back(std::move(right));
        done = assess();
    }

    res.value = total;
    res.error = total_err;
    res.intervals = static_cast<int>(pieces.size());
    res.converged = done;
    return res;
}

}  // namespace emi::quad
