#include <cstdio>
#include <memory>

#include "common.hpp"
#include "emi/error.hpp"
#include "emi/inverse.hpp"

namespace emi::cli {

namespace {

struct InvertArgs {
    std::string data;
    std::string synth_model;
    double nsr = 0.0;
    int trials = 1;
    std::uint64_t seed = 1;
    std::string method = "bfgs2";
    std::string bounds;
    std::string out;
    std::size_t layers = 3;
    std::vector<double> p0;
    bool midpoint_start = false;
    unsigned threads = 0;
    InstrumentArgs instrument;
};

io::Table parameter_table(const std::vector<double>& p, const std::vector<double>& p_star) {
    io::Table t;
    t.columns = {"parameter", "estimate", "true", "relative_error"};
    t.units = {"-", "S/m or m", "S/m or m", "%"};
    const std::size_t layers = (p.size() + 1) / 2;
    const std::vector<double> err = p_star.empty() ? std::vector<double>{} : relative_errors_pct(p, p_star);
    for (std::size_t i = 0; i < p.size(); ++i) {
        const std::string name = i < layers ? "sigma" + std::to_string(i + 1) : "h" + std::to_string(i - layers + 1);
        t.rows.push_back({name, io::fmt(p[i]), p_star.empty() ? "" : io::fmt(p_star[i]),
                          p_star.empty() ? "" : io::fmt(err[i])});
    }
    return t;
}

void run_invert(const InvertArgs& a) {
    if (a.data.empty() == a.synth_model.empty()) throw ValidationError("give exactly one of --data or --synth-model");
    if (a.out.empty()) throw ValidationError("--out <dir> is required");
    const Bounds bounds = a.bounds.empty() ? Bounds{} : parse_bounds_json(io::read_file(a.bounds));
    SolverSettings settings;
    settings.method = parse_solver(a.method);
    settings.seed = a.seed;
    const InstrumentConfig inst = a.instrument.make();

    if (!a.data.empty()) {
        const ObservationVector d = io::parse_observation_csv(io::read_file(a.data));
        settings.sa.tol = 1e-6;
        const InversionResult r = invert(d, inst, bounds, settings, a.layers, a.p0);
        io::write_file(in_dir(a.out, "result.json"), io::inversion_json(r));
        io::Table t = parameter_table(r.p_hat, {});
        stamp(t, {{"method", a.method}, {"seed", std::to_string(a.seed)}, {"data", a.data},
                  {"objective_A2_per_m2", io::fmt(r.objective)}, {"converged", r.converged ? "true" : "false"}});
        const std::string csv = t.csv();
        io::write_file(in_dir(a.out, "estimate.csv"), csv);
        emit("", csv);
        return;
    }

    StudyConfig cfg;
    cfg.models = {a.synth_model};
    if (!is_preset(a.synth_model)) cfg.truths = {pack_parameters(resolve_model(a.synth_model))};
    cfg.nsr = {a.nsr};
    cfg.trials = a.trials;
    cfg.methods = {settings.method};
    cfg.seed = a.seed;
    cfg.random_start = a.p0.empty() && !a.midpoint_start && a.trials > 1;
    cfg.settings = settings;
    cfg.bounds = bounds;
    cfg.instrument = inst;
    cfg.threads = a.threads;
    if (!a.p0.empty()) throw ValidationError("--p0 applies to --data runs; synthetic runs use --midpoint-start");
    const StudyResult study = error_study(cfg);
    for (const auto& rec : study.trials) {
        char name[32];
        std::snprintf(name, sizeof name, "trial_%04d.json", rec.trial);
        io::write_file(in_dir(a.out, name), io::trial_json(rec));
    }
    io::Table t = io::study_table(study, a.nsr);
    stamp(t, {{"seed", std::to_string(a.seed)}, {"start", cfg.random_start ? "random" : "midpoint"}});
    const std::string csv = t.csv();
    io::write_file(in_dir(a.out, "summary.csv"), csv);
    emit("", csv);
}

}  // namespace

void add_invert(CLI::App& app) {
    auto a = std::make_shared<InvertArgs>();
    CLI::App* cmd = app.add_subcommand("invert", "Invert quadrature-component data for a layered model");
    auto* data = cmd->add_option("--data", a->data, "Observation CSV (columns r, geometry, im_value)");
    auto* synth = cmd->add_option("--synth-model", a->synth_model, "Preset or model JSON used to synthesise data");
    data->excludes(synth);
    cmd->add_option("--nsr", a->nsr, "Noise-to-signal ratio of synthetic data")
        ->check(CLI::Range(0.0, 0.05))
        ->capture_default_str();
    cmd->add_option("--trials", a->trials, "Synthetic trials")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--seed", a->seed, "Master seed")->capture_default_str();
    cmd->add_option("--method", a->method, "Solver")
        ->check(CLI::IsMember({"sa", "bfgs2", "bfgs"}))
        ->capture_default_str();
    cmd->add_option("--bounds", a->bounds, "Bounds JSON (sigma_lo, sigma_hi in S/m; h_lo, h_hi in m)");
    cmd->add_option("--out", a->out, "Output directory")->required();
    cmd->add_option("--layers", a->layers, "Layer count for --data runs")->check(CLI::Range(1, 10))->capture_default_str();
    cmd->add_option("--p0", a->p0, "Start point for --data runs (sigma..., h...)")->delimiter(',');
    cmd->add_flag("--midpoint-start", a->midpoint_start, "Start every synthetic trial at the bounds midpoint");
    cmd->add_option("--threads", a->threads, "Worker threads (0: all cores)")->capture_default_str();
    a->instrument.add(cmd);
    cmd->callback([a] { run_invert(*a); });
}

}  // namespace emi::cli
