// One PASS/FAIL line per acceptance criterion. Exits 0 once every criterion has been
// evaluated; a nonzero exit means the harness itself failed.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <string>
#include <vector>

#include "emi/approx.hpp"
#include "emi/filter.hpp"
#include "emi/forward.hpp"
#include "emi/inverse.hpp"
#include "emi/petro.hpp"

namespace {

using emi::Complex;
using emi::LayeredModel;
using Clock = std::chrono::steady_clock;

struct Verdict {
    bool pass = false;
    std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string num(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double rel(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

Verdict sweep_rows() {
    // printed rows (units 1e-3), s = 0.5 .. 4.0
    const double g0[] = {-0.0871, -0.1279, -0.1316, -0.1317, -0.1317, -0.1317, -0.1317, -0.1317};
    const double g1[] = {0.2797, 0.3279, 0.3283, 0.3281, 0.3280, 0.3280, 0.3280, 0.3280};
    const LayeredModel m({0.333, 0.020, 0.100}, {2.5, 0.5});
    const emi::InstrumentConfig inst;
    const auto t0 = Clock::now();
    double worst = 0.0;
    for (int i = 0; i < 8; ++i) {
        emi::QuadratureSettings q;
        q.s0 = q.s1 = 0.5 * (i + 1);
        const auto si = emi::split_integrals(m, inst.omega(), inst.mu, {2.0}, {2.0}, q);
        // either component of the complex integral may be the printed one
        const double d0 = std::min(std::abs(si.g0[0].real() * 1e3 - g0[i]), std::abs(si.g0[0].imag() * 1e3 - g0[i]));
        const double d1 = std::min(std::abs(si.g1[0].real() * 1e3 - g1[i]), std::abs(si.g1[0].imag() * 1e3 - g1[i]));
        worst = std::max({worst, d0, d1});
    }
    const double t = seconds_since(t0);
    return {worst <= 1e-4 && t < 1.0,
            "max |computed - printed| = " + num("%.4f", worst) + "e-3 (limit 0.0001e-3), " + num("%.3f", t) + " s"};
}

Verdict filter_crosscheck() {
    const auto t0 = Clock::now();
    const auto table = emi::load_filter(emi::asset_dir(), emi::kDefaultFilter);
    emi::InstrumentConfig inst;
    inst.offsets_hcp = inst.offsets_prp = {2, 3, 4, 5, 6, 7, 8};
    emi::QuadratureSettings q;
    q.rel_tol = 1e-10;
    double worst = 0.0;
    for (const char* name : {"model1", "model2"}) {
        const auto m = emi::preset_model(name);
        const auto a = emi::split_fields(m, inst, q);
        const auto b = emi::filter_fields(m, inst, table);
        for (std::size_t i = 0; i < a.entries.size(); ++i) worst = std::max(worst, rel(b.entries[i].value, a.entries[i].value));
    }
    const double t = seconds_since(t0);
    return {worst <= 1e-6 && t < 5.0, "max relative difference " + num("%.2e", worst) + ", " + num("%.3f", t) + " s"};
}

Verdict crim_presets() {
    const double expected[] = {50.0, 4.9, 18.2, 76.9, 32.3, 50.0};  // mS/m
    const double setups[][3] = {{0.5, 0.2, 0.03}, {0.01, 0.37, 0.01}, {0.25, 0.3, 0.02},
                                {0.5, 0.2, 0.92}, {0.01, 0.37, 0.98}, {0.25, 0.3, 0.98}};
    std::string got;
    int bad = 0;
    for (int i = 0; i < 6; ++i) {
        emi::PetroLayer l;
        l.clay_content = setups[i][0];
        l.porosity = setups[i][1];
        l.water_saturation = setups[i][2];
        const double v = emi::crim_conductivity(l) * 1e3;
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3g", v);
        const double rounded = std::stod(buf);
        if (std::abs(rounded - expected[i]) > 1e-9 * expected[i]) ++bad;
        got += (i ? ", " : "") + std::string(buf);
    }
    return {bad == 0, std::to_string(bad) + " of 6 differ at 3 s.f.; computed {" + got + "} mS/m"};
}

Verdict homogeneous_reduction() {
    emi::InstrumentConfig inst;
    emi::QuadratureSettings q;
    q.rel_tol = 1e-12;
    double worst = 0.0, worst_g = 0.0;
    for (std::size_t n : {2u, 3u}) {
        for (double sigma : {0.003, 0.05, 0.5}) {
            const LayeredModel m(std::vector<double>(n, sigma), std::vector<double>(n - 1, 1.5));
            const auto resp = emi::split_fields(m, inst, q);
            for (const auto& e : resp.entries) {
                const auto hs = emi::halfspace_fields(sigma, inst.omega(), inst.moment, e.r);
                worst = std::max(worst, rel(e.value, e.geometry == emi::Geometry::hcp ? hs.hz : hs.hrho));
            }
            for (double lam = 1e-4; lam < 50.0; lam *= 1.3) {
                for (int order : {0, 1}) worst_g = std::max(worst_g, std::abs(emi::integrand_g(m, inst.omega(), lam, order, 4.0)));
            }
        }
    }
    return {worst <= 1e-10 && worst_g <= 1e-300,
            "max relative difference " + num("%.2e", worst) + ", max |g| " + num("%.1e", worst_g)};
}

Verdict tail_bound_validity() {
    emi::InstrumentConfig inst;
    double worst = 0.0;
    for (const auto& name : emi::preset_names()) {
        const auto m = emi::preset_model(name);
        emi::QuadratureSettings lo, hi;
        lo.rel_tol = hi.rel_tol = 1e-10;
        lo.s0 = lo.s1 = 2.0;
        hi.s0 = hi.s1 = 8.0;
        const auto a = emi::split_integrals(m, inst.omega(), inst.mu, inst.offsets_hcp, inst.offsets_prp, lo);
        const auto b = emi::split_integrals(m, inst.omega(), inst.mu, inst.offsets_hcp, inst.offsets_prp, hi);
        for (std::size_t i = 0; i < a.g0.size(); ++i) {
            const double bound = emi::tail_bound(m, inst.omega(), 2.0, inst.offsets_hcp[i], inst.mu);
            worst = std::max(worst, std::abs(b.g0[i] - a.g0[i]) / bound);
        }
        for (std::size_t i = 0; i < a.g1.size(); ++i) {
            const double bound = emi::tail_bound(m, inst.omega(), 2.0, inst.offsets_prp[i], inst.mu);
            worst = std::max(worst, std::abs(b.g1[i] - a.g1[i]) / bound);
        }
    }
    return {worst <= 10.0, "max measured tail / bound = " + num("%.3g", worst) + " (limit 10)"};
}

// Shared 20-trial two-stage BFGS study over all presets and the three noise levels.
const emi::StudyResult& study() {
    static const emi::StudyResult result = [] {
        emi::StudyConfig cfg;
        cfg.methods = {emi::SolverMethod::bfgs_two_stage};
        cfg.seed = 7;
        return emi::error_study(cfg);
    }();
    return result;
}

Verdict noise_free_inversion() {
    double worst = 0.0, slowest = 0.0, m3 = 0.0;
    std::string worst_at;
    for (const auto& c : study().cells) {
        if (c.nsr != 0.0) continue;
        if (c.model == "model3") {
            m3 = *std::max_element(c.mean_error_pct.begin(), c.mean_error_pct.end());
            continue;
        }
        for (std::size_t j = 0; j < c.mean_error_pct.size(); ++j) {
            if (c.mean_error_pct[j] > worst) {
                worst = c.mean_error_pct[j];
                worst_at = c.model + " p" + std::to_string(j + 1);
            }
        }
    }
    for (const auto& t : study().trials) {
        if (t.nsr == 0.0) slowest = std::max(slowest, t.result.wall_seconds);
    }
    return {worst <= 10.0 && slowest < 5.0, "worst mean error " + num("%.1f", worst) + "% (" + worst_at +
                                                "), slowest inversion " + num("%.2f", slowest) +
                                                " s; model3 (hard case) worst " + num("%.1f", m3) + "%"};
}

Verdict noisy_trend() {
    const auto lo = emi::grand_average(study(), 0.001, emi::SolverMethod::bfgs_two_stage);
    const auto hi = emi::grand_average(study(), 0.005, emi::SolverMethod::bfgs_two_stage);
    auto within = [](double v, double a, double b) { return v >= a / 2.0 && v <= 2.0 * b; };
    const bool order = within(lo.sigma_pct, 9, 13) && within(lo.h_pct, 9, 13) && within(hi.sigma_pct, 13, 20) &&
                       within(hi.h_pct, 13, 20);
    std::vector<double> med;
    for (double eps : {0.0, 0.001, 0.005}) {
        std::vector<double> all;
        for (const auto& t : study().trials) {
            if (t.nsr == eps) all.insert(all.end(), t.result.relative_error_pct.begin(), t.result.relative_error_pct.end());
        }
        std::sort(all.begin(), all.end());
        med.push_back(0.5 * (all[(all.size() - 1) / 2] + all[all.size() / 2]));
    }
    const bool monotone = med[0] <= med[1] && med[1] <= med[2];
    return {order && monotone, "averages sigma/h " + num("%.1f", lo.sigma_pct) + "/" + num("%.1f", lo.h_pct) +
                                   "% at 0.1% and " + num("%.1f", hi.sigma_pct) + "/" + num("%.1f", hi.h_pct) +
                                   "% at 0.5%; median error " + num("%.2f", med[0]) + " -> " + num("%.2f", med[1]) +
                                   " -> " + num("%.2f", med[2]) + "%"};
}

Verdict surrogate_fidelity() {
    emi::InstrumentConfig inst;
    inst.offsets_hcp.clear();
    for (double r = 2.0; r <= 8.0 + 1e-12; r += 0.5) inst.offsets_hcp.push_back(r);
    inst.offsets_prp = inst.offsets_hcp;
    const std::size_t n = inst.offsets_hcp.size();
    bool ok = true;
    double max_z = 0.0, max_p = 0.0;
    for (const char* name : {"model1", "model2"}) {
        const auto m = emi::preset_model(name);
        const auto quad = emi::split_fields(m, inst, {});
        const auto appr = emi::approx_fields(m, inst);
        for (std::size_t i = 0; i < n; ++i) {
            const double dz = rel(appr.entries[i].value.imag(), quad.entries[i].value.imag());
            const double dp = rel(appr.entries[n + i].value.imag(), quad.entries[n + i].value.imag());
            ok = ok && std::isfinite(dz) && std::isfinite(dp) && dp < dz;
            max_z = std::max(max_z, dz);
            max_p = std::max(max_p, dp);
        }
    }
    return {ok, "max relative deviation HCP " + num("%.3f", max_z) + ", PRP " + num("%.3f", max_p) + " over " +
                    std::to_string(n) + " offsets"};
}

Verdict bfgs_vs_sa_speed() {
    emi::SolverSettings s;
    emi::InstrumentConfig inst;
    emi::Bounds bounds;
    const auto p_star = emi::pack_parameters(emi::preset_model("model1"));
    const auto d = emi::synth_observations(p_star, inst, 0.0, 1, s.quad);
    const auto two = emi::invert(d, inst, bounds, s, 3);
    s.method = emi::SolverMethod::sa;
    const auto sa = emi::invert(d, inst, bounds, s, 3);
    const double ratio = two.wall_seconds / sa.wall_seconds;
    return {ratio <= 0.1, "two-stage " + num("%.3f", two.wall_seconds) + " s, annealing " +
                              num("%.3f", sa.wall_seconds) + " s, ratio " + num("%.3f", ratio)};
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<Verdict()>> criteria[] = {
        {"truncation sweep rows", sweep_rows},
        {"quadrature vs filter", filter_crosscheck},
        {"CRIM preset conductivities", crim_presets},
        {"homogeneous reduction", homogeneous_reduction},
        {"tail bound validity", tail_bound_validity},
        {"noise-free inversion", noise_free_inversion},
        {"noisy inversion trend", noisy_trend},
        {"surrogate fidelity", surrogate_fidelity},
        {"two-stage vs annealing speed", bfgs_vs_sa_speed},
    };
    int failed = 0;
    for (const auto& [name, check] : criteria) {
        Verdict v;
        try {
            v = check();
        } catch (const std::exception& e) {
            v = {false, std::string("error: ") + e.what()};
        }
        if (!v.pass) ++failed;
        std::printf("%s %s: %s\n", v.pass ? "PASS" : "FAIL", name, v.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria pass\n", static_cast<int>(std::size(criteria)) - failed, std::size(criteria));
    return 0;
}
