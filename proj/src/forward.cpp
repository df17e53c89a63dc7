#include "emi/forward.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <thread>

#include "emi/error.hpp"
#include "emi/kernels.hpp"
#include "emi/quadrature.hpp"

namespace emi {

const char* geometry_name(Geometry g) noexcept { return g == Geometry::hcp ? "hcp" : "prp"; }

const char* method_name(Method m) noexcept {
    switch (m) {
        case Method::quadrature: return "quad";
        case Method::filter: return "filter";
        case Method::approx: return "approx";
    }
    return "?";
}

void QuadratureSettings::validate() const {
    if (!(s0 > 0.0) || !std::isfinite(s0) || !(s1 > 0.0) || !std::isfinite(s1)) {
        throw ValidationError("truncation points s0, s1 must be finite and > 0");
    }
    if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw ValidationError("rel_tol must be in (0, 1)");
    if (!(abs_tol >= 0.0)) throw ValidationError("abs_tol must be >= 0");
    if (max_subdivisions < 1) throw ValidationError("max_subdivisions must be >= 1");
}

std::vector<double> FieldResponse::imag_parts() const {
    std::vector<double> out;
    out.reserve(entries.size());
    for (const auto& e : entries) out.push_back(e.value.imag());
    return out;
}

namespace {

struct Target {
    double r;
    int order;
};

// Integrates (R_0 - Psi_1) lambda^2 J_l(lambda r) over [0, s] for each target jointly.
// Consecutive output pairs are (re, im) per target.
std::vector<Complex> integrate_targets(const kernels::Stack& stack, const std::vector<Target>& targets, double s,
                                       const QuadratureSettings& settings, int& evaluations) {
    if (targets.empty()) return {};
    const std::size_t nt = targets.size();
    std::vector<double> dre, dim, xr, j0, j1;

    auto integrand = [&](const double* x, std::size_t n, double* out) {
        dre.resize(n);
        dim.resize(n);
        xr.resize(n);
        j0.resize(n);
        j1.resize(n);
        kernels::reflection_diff(stack, x, n, dre.data(), dim.data());
        double last_r = -1.0;
        for (std::size_t t = 0; t < nt; ++t) {
            const Target& tg = targets[t];
            if (tg.r != last_r) {
                for (std::size_t i = 0; i < n; ++i) xr[i] = x[i] * tg.r;
                kernels::bessel_j01(xr.data(), n, j0.data(), j1.data());
                last_r = tg.r;
            }
            const double* jl = tg.order == 0 ? j0.data() : j1.data();
            double* re = out + (2 * t) * n;
            double* im = out + (2 * t + 1) * n;
            for (std::size_t i = 0; i < n; ++i) {
                re[i] = dre[i] * jl[i];
                im[i] = dim[i] * jl[i];
            }
        }
    };

    quad::Options opt;
    opt.rel_tol = settings.rel_tol;
    opt.abs_tol = settings.abs_tol;
    opt.max_subdivisions = settings.max_subdivisions;
    const quad::Result res = quad::gauss_kronrod(integrand, 2 * nt, 0.0, s, opt);
    evaluations += res.evaluations;
    if (!res.converged) {
        double norm = 0.0;
        double worst = 0.0;
        for (std::size_t c = 0; c < res.value.size(); ++c) {
            norm = std::max(norm, std::abs(res.value[c]));
            worst = std::max(worst, res.error[c]);
        }
        throw QuadratureError("split integral did not reach rel_tol after " + std::to_string(res.intervals) +
                                  " subdivisions",
                              norm, worst);
    }
    std::vector<Complex> out(nt);
    for (std::size_t t = 0; t < nt; ++t) out[t] = Complex(res.value[2 * t], res.value[2 * t + 1]);
    return out;
}

}  // namespace

SplitIntegrals split_integrals(const LayeredModel& model, double omega, double mu,
                               const std::vector<double>& offsets_hcp, const std::vector<double>& offsets_prp,
                               const QuadratureSettings& settings) {
    settings.validate();
    if (!(omega > 0.0)) throw ValidationError("omega must be > 0");
    for (double r : offsets_hcp) {
        if (!(r > 0.0)) throw ValidationError("offsets must be > 0");
    }
    for (double r : offsets_prp) {
        if (!(r > 0.0)) throw ValidationError("offsets must be > 0");
    }
    const kernels::Stack stack = kernels::make_stack(model, omega, mu);
    SplitIntegrals out;

    std::vector<Target> t0, t1;
    for (double r : offsets_hcp) t0.push_back({r, 0});
    for (double r : offsets_prp) t1.push_back({r, 1});

    if (settings.s0 == settings.s1) {
        // one pass; sort by offset so each J evaluation is shared by both orders
        std::vector<Target> all;
        for (std::size_t i = 0; i < t0.size(); ++i) all.push_back(t0[i]);
        for (std::size_t i = 0; i < t1.size(); ++i) all.push_back(t1[i]);
        std::vector<std::size_t> order(all.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return all[a].r < all[b].r; });
        std::vector<Target> sorted;
        for (std::size_t i : order) sorted.push_back(all[i]);
        const std::vector<Complex> v = integrate_targets(stack, sorted, settings.s0, settings, out.evaluations);
        std::vector<Complex> unsorted(all.size());
        for (std::size_t i = 0; i < order.size(); ++i) unsorted[order[i]] = v[i];
        out.g0.assign(unsorted.begin(), unsorted.begin() + static_cast<std::ptrdiff_t>(t0.size()));
        out.g1.assign(unsorted.begin() + static_cast<std::ptrdiff_t>(t0.size()), unsorted.end());
    } else {
        out.g0 = integrate_targets(stack, t0, settings.s0, settings, out.evaluations);
        out.g1 = integrate_targets(stack, t1, settings.s1, settings, out.evaluations);
    }
    return out;
}

double tail_bound(const LayeredModel& model, double omega, double s, double r, double mu) {
    if (!(s > 0.0) || !(r > 0.0)) throw ValidationError("tail_bound needs s > 0 and r > 0");
    if (!(omega > 0.0)) throw ValidationError("omega must be > 0");
    const auto& sigma = model.sigma();
    const auto& h = model.h();
    double depth = 0.0;
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < sigma.size(); ++k) {
        depth += h[k];
        const double gamma = 2.0 * depth;
        const double jump = omega * mu * std::abs(sigma[k + 1] - sigma[k]);
        sum += jump / gamma * std::exp(-gamma * s);
    }
    return std::sqrt(1.0 / (8.0 * std::numbers::pi * r)) * sum / std::sqrt(s);
}

FieldResponse split_fields(const LayeredModel& model, const InstrumentConfig& instrument,
                           const QuadratureSettings& settings) {
    instrument.validate();
    const double omega = instrument.omega();
    const double m = instrument.moment;
    const double scale = m / (4.0 * std::numbers::pi);
    const SplitIntegrals si =
        split_integrals(model, omega, instrument.mu, instrument.offsets_hcp, instrument.offsets_prp, settings);

    FieldResponse resp;
    resp.method = Method::quadrature;
    for (std::size_t i = 0; i < instrument.offsets_hcp.size(); ++i) {
        const double r = instrument.offsets_hcp[i];
        const HalfspaceFields hs = halfspace_fields(model.sigma()[0], omega, m, r, instrument.mu);
        resp.entries.push_back(
            {r, Geometry::hcp, scale * si.g0[i] + hs.hz, scale * tail_bound(model, omega, settings.s0, r, instrument.mu)});
    }
    for (std::size_t i = 0; i < instrument.offsets_prp.size(); ++i) {
        const double r = instrument.offsets_prp[i];
        const HalfspaceFields hs = halfspace_fields(model.sigma()[0], omega, m, r, instrument.mu);
        resp.entries.push_back({r, Geometry::prp, -scale * si.g1[i] + hs.hrho,
                                scale * tail_bound(model, omega, settings.s1, r, instrument.mu)});
    }
    return resp;
}

FieldEntry split_field(const LayeredModel& model, const InstrumentConfig& instrument,
                       const QuadratureSettings& settings, Geometry geometry, double r) {
    InstrumentConfig one = instrument;
    one.offsets_hcp.clear();
    one.offsets_prp.clear();
    (geometry == Geometry::hcp ? one.offsets_hcp : one.offsets_prp).push_back(r);
    return split_fields(model, one, settings).entries.front();
}

std::vector<FieldResponse> split_fields_batch(const std::vector<LayeredModel>& models,
                                               const InstrumentConfig& instrument,
                                               const QuadratureSettings& settings, unsigned threads) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    std::vector<FieldResponse> out(models.size());
    std::vector<std::future<void>> jobs;
    const std::size_t n = models.size();
    const std::size_t workers = std::min<std::size_t>(threads, n);
    for (std::size_t w = 0; w < workers; ++w) {
        jobs.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t i = w; i < n; i += workers) out[i] = split_fields(models[i], instrument, settings);
        }));
    }
    for (auto& j : jobs) j.get();
    return out;
}

}  // namespace emi
