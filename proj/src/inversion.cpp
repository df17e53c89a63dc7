#include "emi/inverse.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

#include <json.hpp>

#include "emi/approx.hpp"
#include "emi/error.hpp"

namespace emi {

std::vector<double> pack_parameters(const LayeredModel& model) {
    std::vector<double> p = model.sigma();
    p.insert(p.end(), model.h().begin(), model.h().end());
    return p;
}

LayeredModel unpack_parameters(const std::vector<double>& p) {
    if (p.empty() || p.size() % 2 == 0) throw ValidationError("parameter vector length must be 2N-1");
    const std::size_t n = (p.size() + 1) / 2;
    return LayeredModel(std::vector<double>(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(n)),
                        std::vector<double>(p.begin() + static_cast<std::ptrdiff_t>(n), p.end()));
}

void Bounds::validate() const {
    if (!(sigma_lo > 0.0 && sigma_hi > sigma_lo && std::isfinite(sigma_hi))) {
        throw ValidationError("bounds need 0 < sigma_lo < sigma_hi");
    }
    if (!(h_lo > 0.0 && h_hi > h_lo && std::isfinite(h_hi))) throw ValidationError("bounds need 0 < h_lo < h_hi");
}

opt::Box Bounds::box(std::size_t layers) const {
    validate();
    if (layers < 1) throw ValidationError("need at least one layer");
    opt::Box b;
    for (std::size_t i = 0; i < layers; ++i) {
        b.lo.push_back(sigma_lo);
        b.hi.push_back(sigma_hi);
    }
    for (std::size_t i = 0; i + 1 < layers; ++i) {
        b.lo.push_back(h_lo);
        b.hi.push_back(h_hi);
    }
    return b;
}

std::vector<double> Bounds::midpoint(std::size_t layers) const {
    const opt::Box b = box(layers);
    std::vector<double> p(b.lo.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::sqrt(b.lo[i] * b.hi[i]);
    return p;
}

bool Bounds::contains(const std::vector<double>& p) const {
    if (p.size() % 2 == 0) return false;
    const opt::Box b = box((p.size() + 1) / 2);
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!(p[i] >= b.lo[i] && p[i] <= b.hi[i])) return false;
    }
    return true;
}

Bounds parse_bounds_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("bounds JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ValidationError("bounds JSON must be an object");
    Bounds b;
    for (const auto& [key, value] : doc.items()) {
        if (!value.is_number()) throw ValidationError("bounds JSON: '" + key + "' must be a number");
        const double v = value.get<double>();
        if (key == "sigma_lo") b.sigma_lo = v;
        else if (key == "sigma_hi") b.sigma_hi = v;
        else if (key == "h_lo") b.h_lo = v;
        else if (key == "h_hi") b.h_hi = v;
        else throw ValidationError("bounds JSON: unknown key '" + key + "'");
    }
    b.validate();
    return b;
}

const char* solver_name(SolverMethod m) noexcept {
    switch (m) {
        case SolverMethod::bfgs_two_stage: return "bfgs2";
        case SolverMethod::bfgs_direct: return "bfgs";
        case SolverMethod::sa: return "sa";
    }
    return "?";
}

SolverMethod parse_solver(const std::string& name) {
    if (name == "bfgs2") return SolverMethod::bfgs_two_stage;
    if (name == "bfgs") return SolverMethod::bfgs_direct;
    if (name == "sa") return SolverMethod::sa;
    throw ValidationError("unknown method '" + name + "' (expected sa, bfgs2 or bfgs)");
}

void SolverSettings::validate() const {
    quad.validate();
    if (!(sa.t0 > 0.0) || !(sa.cooling > 0.0 && sa.cooling < 1.0) || !(sa.tol > 0.0)) {
        throw ValidationError("SA needs t0 > 0, cooling in (0, 1), tol > 0");
    }
    if (!(bfgs.step_tol > 0.0) || !(bfgs.ftol > 0.0) || !(bfgs.gtol >= 0.0) || bfgs.max_iterations < 1) {
        throw ValidationError("BFGS tolerances must be positive and max_iterations >= 1");
    }
    if (!(bfgs.fd_rel_step > 0.0) || !(bfgs.fd_abs_step > 0.0)) throw ValidationError("fd steps must be > 0");
}

std::vector<double> ObservationVector::values() const {
    std::vector<double> v = dz;
    v.insert(v.end(), drho.begin(), drho.end());
    return v;
}

void ObservationVector::validate(std::size_t parameters) const {
    if (dz.size() != r_hcp.size() || drho.size() != r_prp.size()) {
        throw ValidationError("observation values and offsets differ in length");
    }
    if (size() <= parameters) {
        throw ValidationError("need more observations (" + std::to_string(size()) + ") than parameters (" +
                              std::to_string(parameters) + ")");
    }
    for (double v : values()) {
        if (!std::isfinite(v)) throw ValidationError("observations must be finite");
    }
}

InstrumentConfig observation_instrument(const InstrumentConfig& base, const ObservationVector& d) {
    InstrumentConfig inst = base;
    inst.offsets_hcp = d.r_hcp;
    inst.offsets_prp = d.r_prp;
    inst.validate();
    return inst;
}

std::vector<double> forward_vector(const std::vector<double>& p, const InstrumentConfig& instrument,
                                   Evaluator evaluator, const QuadratureSettings& quad) {
    const LayeredModel model = unpack_parameters(p);
    if (evaluator == Evaluator::surrogate) return approx_fields(model, instrument).imag_parts();
    return split_fields(model, instrument, quad).imag_parts();
}

namespace {

double squared_residual(const std::vector<double>& h, const std::vector<double>& d) {
    double s = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) s += (h[i] - d[i]) * (h[i] - d[i]);
    return s;
}

double square_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Normalised least-squares objective with an evaluation counter.
struct Misfit {
    const InstrumentConfig& instrument;
    Evaluator evaluator;
    const QuadratureSettings& quad;
    std::vector<double> d;
    double scale;
    long calls = 0;

    Misfit(const InstrumentConfig& inst, Evaluator ev, const QuadratureSettings& q, std::vector<double> data)
        : instrument(inst), evaluator(ev), quad(q), d(std::move(data)) {
        const double n2 = square_norm(d);
        scale = n2 > 0.0 ? 1.0 / n2 : 1.0;
    }

    double operator()(const std::vector<double>& p) {
        ++calls;
        return squared_residual(forward_vector(p, instrument, evaluator, quad), d) * scale;
    }
};

[[noreturn]] void rethrow_tagged(const char* stage) {
    try {
        throw;
    } catch (const ValidationError& e) {
        throw ValidationError(std::string(stage) + ": " + e.what());
    } catch (const NumericalError& e) {
        throw NumericalError(std::string(stage) + ": " + e.what());
    }
}

StageReport run_bfgs(const char* name, Misfit& misfit, const std::vector<double>& start, const opt::Box& box,
                     const opt::BfgsOptions& options) {
    opt::Outcome o;
    try {
        o = opt::minimize_bfgs([&](const std::vector<double>& p) { return misfit(p); }, start, box, options);
    } catch (...) {
        rethrow_tagged(name);
    }
    return {name, o.x, o.f / misfit.scale, o.iterations, o.evaluations, o.converged};
}

void check_start(const Bounds& bounds, const std::vector<double>& p0, std::size_t parameters) {
    if (p0.size() != parameters) throw ValidationError("p0 has the wrong length");
    if (!bounds.contains(p0)) throw ValidationError("p0 lies outside the bounds");
}

}  // namespace

double objective(const std::vector<double>& p, const ObservationVector& d, const InstrumentConfig& instrument,
                 Evaluator evaluator, const QuadratureSettings& quad) {
    const InstrumentConfig inst = observation_instrument(instrument, d);
    return squared_residual(forward_vector(p, inst, evaluator, quad), d.values());
}

ObservationVector synth_observations(const std::vector<double>& p_star, const InstrumentConfig& instrument,
                                     double nsr, std::uint64_t seed, const QuadratureSettings& quad) {
    if (!(nsr >= 0.0 && nsr <= 0.05)) throw ValidationError("nsr must be in [0, 0.05]");
    instrument.validate();
    const std::vector<double> h = forward_vector(p_star, instrument, Evaluator::full, quad);
    std::vector<double> d = h;
    if (nsr > 0.0) {
        // Box-Muller on a fixed engine keeps the stream identical across standard libraries.
        std::mt19937_64 rng(seed);
        auto unit = [&] { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53; };
        std::vector<double> n(h.size());
        for (std::size_t i = 0; i < n.size(); i += 2) {
            const double rad = std::sqrt(-2.0 * std::log(unit()));
            const double ang = 2.0 * std::numbers::pi * unit();
            n[i] = rad * std::cos(ang);
            if (i + 1 < n.size()) n[i + 1] = rad * std::sin(ang);
        }
        // alpha^2 |n|^2 = nsr^2 |h + alpha n|^2, positive root
        double hn = 0.0;
        for (std::size_t i = 0; i < n.size(); ++i) hn += h[i] * n[i];
        const double e2 = nsr * nsr;
        const double a = square_norm(n) * (1.0 - e2);
        const double b = -2.0 * e2 * hn;
        const double c = -e2 * square_norm(h);
        const double alpha = (-b + std::sqrt(b * b - 4.0 * a * c)) / (2.0 * a);
        for (std::size_t i = 0; i < d.size(); ++i) d[i] += alpha * n[i];
    }
    ObservationVector obs;
    obs.r_hcp = instrument.offsets_hcp;
    obs.r_prp = instrument.offsets_prp;
    obs.dz.assign(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(obs.r_hcp.size()));
    obs.drho.assign(d.begin() + static_cast<std::ptrdiff_t>(obs.r_hcp.size()), d.end());
    return obs;
}

InversionResult invert_two_stage(const ObservationVector& d, const InstrumentConfig& instrument, const Bounds& bounds,
                                 const SolverSettings& settings, const std::vector<double>& p0) {
    settings.validate();
    const auto t0 = std::chrono::steady_clock::now();
    check_start(bounds, p0, p0.size());
    const std::size_t layers = (p0.size() + 1) / 2;
    if (layers != 2 && layers != 3) throw ValidationError("two-stage inversion needs a 2- or 3-layer surrogate");
    d.validate(p0.size());
    const InstrumentConfig inst = observation_instrument(instrument, d);
    const opt::Box box = bounds.box(layers);

    Misfit surrogate(inst, Evaluator::surrogate, settings.quad, d.values());
    Misfit full(inst, Evaluator::full, settings.quad, d.values());
    const StageReport s1 = run_bfgs("stage 1 (surrogate)", surrogate, p0, box, settings.bfgs);
    const StageReport s2 = run_bfgs("stage 2 (full)", full, s1.p, box, settings.bfgs);

    InversionResult res;
    res.method = SolverMethod::bfgs_two_stage;
    res.p0 = p0;
    res.p_hat = s2.p;
    res.objective = s2.objective;
    res.iterations = s1.iterations + s2.iterations;
    res.forward_evaluations = surrogate.calls + full.calls;
    res.full_forward_evaluations = full.calls;
    res.converged = s2.converged;
    res.stages = {s1, s2};
    res.stages[0].name = "surrogate";
    res.stages[1].name = "full";
    res.wall_seconds = seconds_since(t0);
    return res;
}

InversionResult invert_direct(const ObservationVector& d, const InstrumentConfig& instrument, const Bounds& bounds,
                              const SolverSettings& settings, const std::vector<double>& p0) {
    settings.validate();
    const auto t0 = std::chrono::steady_clock::now();
    check_start(bounds, p0, p0.size());
    d.validate(p0.size());
    const InstrumentConfig inst = observation_instrument(instrument, d);
    Misfit full(inst, Evaluator::full, settings.quad, d.values());
    const StageReport s = run_bfgs("full", full, p0, bounds.box((p0.size() + 1) / 2), settings.bfgs);

    InversionResult res;
    res.method = SolverMethod::bfgs_direct;
    res.p0 = p0;
    res.p_hat = s.p;
    res.objective = s.objective;
    res.iterations = s.iterations;
    res.forward_evaluations = full.calls;
    res.full_forward_evaluations = full.calls;
    res.converged = s.converged;
    res.stages = {s};
    res.wall_seconds = seconds_since(t0);
    return res;
}

InversionResult invert_sa(const ObservationVector& d, const InstrumentConfig& instrument, const Bounds& bounds,
                          const SolverSettings& settings, std::size_t layers) {
    settings.validate();
    const auto t0 = std::chrono::steady_clock::now();
    d.validate(2 * layers - 1);
    const InstrumentConfig inst = observation_instrument(instrument, d);
    Misfit full(inst, Evaluator::full, settings.quad, d.values());
    opt::AnnealOptions options = settings.sa;
    options.seed = settings.seed;
    // the normalised misfit is O(1) at worst, so t0 maps onto it
    options.energy_scale = options.t0;
    opt::Outcome o;
    try {
        o = opt::minimize_sa([&](const std::vector<double>& p) { return full(p); }, bounds.box(layers), options);
    } catch (...) {
        rethrow_tagged("annealing");
    }

    InversionResult res;
    res.method = SolverMethod::sa;
    res.p_hat = o.x;
    res.objective = o.f / full.scale;
    res.iterations = o.iterations;
    res.forward_evaluations = full.calls;
    res.full_forward_evaluations = full.calls;
    res.converged = o.converged;
    res.stages = {{"sa", o.x, res.objective, o.iterations, o.evaluations, o.converged}};
    res.wall_seconds = seconds_since(t0);
    return res;
}

InversionResult invert(const ObservationVector& d, const InstrumentConfig& instrument, const Bounds& bounds,
                       const SolverSettings& settings, std::size_t layers, const std::vector<double>& p0) {
    if (settings.method == SolverMethod::sa) return invert_sa(d, instrument, bounds, settings, layers);
    const std::vector<double> start = p0.empty() ? bounds.midpoint(layers) : p0;
    if (start.size() != 2 * layers - 1) throw ValidationError("p0 length does not match the layer count");
    if (settings.method == SolverMethod::bfgs_two_stage) return invert_two_stage(d, instrument, bounds, settings, start);
    return invert_direct(d, instrument, bounds, settings, start);
}

std::vector<double> relative_errors_pct(const std::vector<double>& p_hat, const std::vector<double>& p_star) {
    if (p_hat.size() != p_star.size()) throw ValidationError("parameter vectors differ in length");
    std::vector<double> e(p_hat.size());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = 100.0 * std::abs(p_hat[i] - p_star[i]) / std::abs(p_star[i]);
    return e;
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b, std::uint64_t c) noexcept {
    return splitmix64(splitmix64(splitmix64(splitmix64(master) ^ a) ^ b) ^ c);
}

}  // namespace emi
