#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "emi/forward.hpp"
#include "emi/optimize.hpp"

namespace emi {

// Parameter vector p = (sigma_1..sigma_N, h_1..h_{N-1}), SI units.
std::vector<double> pack_parameters(const LayeredModel& model);
LayeredModel unpack_parameters(const std::vector<double>& p);

struct Bounds {
    double sigma_lo = 3e-3;  // S/m
    double sigma_hi = 1.0;
    double h_lo = 0.1;  // m
    double h_hi = 4.0;

    void validate() const;
    opt::Box box(std::size_t layers) const;
    std::vector<double> midpoint(std::size_t layers) const;  // geometric
    bool contains(const std::vector<double>& p) const;
};

// Keys sigma_lo, sigma_hi (S/m), h_lo, h_hi (m); missing keys keep the defaults.
Bounds parse_bounds_json(const std::string& text);

enum class SolverMethod { bfgs_two_stage, bfgs_direct, sa };
const char* solver_name(SolverMethod m) noexcept;  // "bfgs2", "bfgs", "sa"
SolverMethod parse_solver(const std::string& name);

struct SolverSettings {
    SolverMethod method = SolverMethod::bfgs_two_stage;
    opt::BfgsOptions bfgs{};
    opt::AnnealOptions sa{};
    // Tight enough that quadrature noise stays below the finite-difference signal.
    QuadratureSettings quad{3.0, 3.0, 1e-12, 1e-16, 500};
    std::uint64_t seed = 1;

    void validate() const;
};

// d = (Im H_z at r_hcp..., Im H_rho at r_prp...), A/m.
struct ObservationVector {
    std::vector<double> r_hcp;
    std::vector<double> r_prp;
    std::vector<double> dz;
    std::vector<double> drho;

    std::vector<double> values() const;
    std::size_t size() const noexcept { return dz.size() + drho.size(); }
    void validate(std::size_t parameters) const;
};

// Instrument with the observation offsets substituted.
InstrumentConfig observation_instrument(const InstrumentConfig& base, const ObservationVector& d);

enum class Evaluator { full, surrogate };

std::vector<double> forward_vector(const std::vector<double>& p, const InstrumentConfig& instrument,
                                   Evaluator evaluator, const QuadratureSettings& quad);

// sum of squared residuals of the quadrature components, (A/m)^2.
double objective(const std::vector<double>& p, const ObservationVector& d, const InstrumentConfig& instrument,
                 Evaluator evaluator, const QuadratureSettings& quad);

// d = H(p*) + eta with eta = alpha n, n standard normal, alpha chosen so ||eta|| / ||d|| = nsr
// holds for the noisy d itself.
ObservationVector synth_observations(const std::vector<double>& p_star, const InstrumentConfig& instrument,
                                     double nsr, std::uint64_t seed, const QuadratureSettings& quad);

struct StageReport {
    std::string name;  // "surrogate", "full" or "sa"
    std::vector<double> p;
    double objective = 0.0;  // at the stage's own evaluator
    int iterations = 0;
    long evaluations = 0;
    bool converged = false;
};

struct InversionResult {
    SolverMethod method = SolverMethod::bfgs_two_stage;
    std::vector<double> p0;  // empty for SA
    std::vector<double> p_hat;
    double objective = 0.0;  // full evaluator at p_hat
    int iterations = 0;
    long forward_evaluations = 0;       // all stages
    long full_forward_evaluations = 0;  // quadrature forward solves only
    bool converged = false;
    std::vector<double> relative_error_pct;  // vs p*, when known
    double wall_seconds = 0.0;
    std::vector<StageReport> stages;
};

// The optimisers work on the objective divided by ||d||^2.
InversionResult invert_two_stage(const ObservationVector& d, const InstrumentConfig& instrument, const Bounds& bounds,
                                 const SolverSettings& settings, const std::vector<double>& p0);
InversionResult invert_direct(const ObservationVector& d, const InstrumentConfig& instrument, const Bounds& bounds,
                              const SolverSettings& settings, const std::vector<double>& p0);
InversionResult invert_sa(const ObservationVector& d, const InstrumentConfig& instrument, const Bounds& bounds,
                          const SolverSettings& settings, std::size_t layers);

// Dispatches on settings.method. An empty p0 selects the geometric midpoint of the bounds.
InversionResult invert(const ObservationVector& d, const InstrumentConfig& instrument, const Bounds& bounds,
                       const SolverSettings& settings, std::size_t layers, const std::vector<double>& p0 = {});

std::vector<double> relative_errors_pct(const std::vector<double>& p_hat, const std::vector<double>& p_star);

// Deterministic seed derivation for ensemble members.
std::uint64_t splitmix64(std::uint64_t x) noexcept;
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) noexcept;

// Monte Carlo error study over models x noise levels x trials x methods.
struct StudyConfig {
    std::vector<std::string> models{"model1", "model2", "model3", "model4"};
    // Optional true parameter vectors parallel to models; empty means the named presets.
    std::vector<std::vector<double>> truths;
    std::vector<double> nsr{0.0, 0.001, 0.005};
    int trials = 20;
    std::vector<SolverMethod> methods{SolverMethod::sa, SolverMethod::bfgs_two_stage};
    std::uint64_t seed = 1;
    // BFGS runs start from a log-uniform random point per trial; otherwise from the midpoint.
    bool random_start = true;
    SolverSettings settings{};
    Bounds bounds{};
    InstrumentConfig instrument{};
    unsigned threads = 0;  // 0: hardware concurrency

    void validate() const;
};

struct TrialRecord {
    std::string model;
    double nsr = 0.0;
    SolverMethod method = SolverMethod::sa;
    int trial = 0;
    std::uint64_t seed = 0;
    std::vector<double> p_star;
    InversionResult result;
};

struct StudyCell {
    std::string model;
    double nsr = 0.0;
    SolverMethod method = SolverMethod::sa;
    std::vector<double> mean_error_pct;    // per parameter
    std::vector<double> median_error_pct;  // per parameter
    int trials = 0;
    double mean_wall_seconds = 0.0;
};

struct StudyResult {
    std::vector<TrialRecord> trials;  // (model, nsr, trial, method) order
    std::vector<StudyCell> cells;     // (nsr, model, method) order
};

StudyResult error_study(const StudyConfig& config);

// Mean of the per-parameter mean errors split into conductivity and thickness parts,
// over all models of one noise level and method.
struct GrandAverage {
    double sigma_pct = 0.0;
    double h_pct = 0.0;
};
GrandAverage grand_average(const StudyResult& study, double nsr, SolverMethod method);

}  // namespace emi
