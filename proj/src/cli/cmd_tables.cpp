#include <memory>

#include "common.hpp"
#include "emi/error.hpp"
#include "emi/inverse.hpp"

namespace emi::cli {

namespace {

struct TablesArgs {
    bool sweep = false;
    bool inversions = false;
    double r = 2.0;
    std::vector<double> nsr{0.0, 0.001, 0.005};
    int trials = 20;
    std::uint64_t seed = 1;
    std::vector<std::string> models{"model1", "model2", "model3", "model4"};
    std::vector<std::string> methods{"sa", "bfgs2"};
    bool midpoint_start = false;
    unsigned threads = 0;
    std::string out;
};

// Truncated split integrals at r for s in {0.5, 1.0, ..., 4.0}.
io::Table sweep_table(double r) {
    const LayeredModel model({0.333, 0.020, 0.100}, {2.5, 0.5});
    InstrumentConfig inst;
    io::Table t;
    t.meta.push_back({"model", "sigma = 333, 20, 100 mS/m; h = 2.5, 0.5 m"});
    t.meta.push_back({"frequency_hz", io::fmt(inst.frequency)});
    t.meta.push_back({"r_m", io::fmt(r)});
    t.columns = {"s", "int_g0_re", "int_g0_im", "int_g1_re", "int_g1_im", "evaluations"};
    t.units = {"1/m", "1/m^3", "1/m^3", "1/m^3", "1/m^3", "-"};
    for (int i = 1; i <= 8; ++i) {
        QuadratureSettings q;
        q.s0 = q.s1 = 0.5 * i;
        const SplitIntegrals si = split_integrals(model, inst.omega(), inst.mu, {r}, {r}, q);
        t.rows.push_back({io::fmt(q.s0), io::fmt(si.g0[0].real()), io::fmt(si.g0[0].imag()), io::fmt(si.g1[0].real()),
                          io::fmt(si.g1[0].imag()), std::to_string(si.evaluations)});
    }
    return t;
}

void run_tables(const TablesArgs& a) {
    std::string text;
    if (a.sweep || !a.inversions) {
        io::Table t = sweep_table(a.r);
        stamp(t);
        text += t.csv();
        if (!a.out.empty()) io::write_file(in_dir(a.out, "sweep.csv"), t.csv());
    }
    if (a.inversions) {
        StudyConfig cfg;
        cfg.models = a.models;
        cfg.nsr = a.nsr;
        cfg.trials = a.trials;
        cfg.methods.clear();
        for (const auto& m : a.methods) cfg.methods.push_back(parse_solver(m));
        cfg.seed = a.seed;
        cfg.random_start = !a.midpoint_start;
        cfg.threads = a.threads;
        const StudyResult study = error_study(cfg);
        for (double eps : a.nsr) {
            io::Table t = io::study_table(study, eps);
            stamp(t, {{"seed", std::to_string(a.seed)}, {"start", cfg.random_start ? "random" : "midpoint"}});
            if (!text.empty()) text += '\n';
            text += t.csv();
            if (!a.out.empty()) io::write_file(in_dir(a.out, "errors_nsr_" + io::fmt(eps) + ".csv"), t.csv());
        }
    }
    emit("", text);
}

}  // namespace

void add_tables(CLI::App& app) {
    auto a = std::make_shared<TablesArgs>();
    CLI::App* cmd = app.add_subcommand("tables", "Truncation sweep and inversion error tables");
    cmd->add_flag("--sweep", a->sweep, "Split integrals against the truncation point (default)");
    cmd->add_flag("--inversions", a->inversions, "Monte Carlo inversion error tables");
    cmd->add_option("--r", a->r, "Offset of the sweep (m)")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--nsr", a->nsr, "Noise levels")->delimiter(',')->capture_default_str();
    cmd->add_option("--trials", a->trials, "Trials per model and noise level")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--seed", a->seed, "Master seed")->capture_default_str();
    cmd->add_option("--models", a->models, "Preset models")->delimiter(',')->capture_default_str();
    cmd->add_option("--methods", a->methods, "Solvers (sa, bfgs2, bfgs)")->delimiter(',')->capture_default_str();
    cmd->add_flag("--midpoint-start", a->midpoint_start, "Start BFGS trials at the bounds midpoint");
    cmd->add_option("--threads", a->threads, "Worker threads (0: all cores)")->capture_default_str();
    cmd->add_option("--out", a->out, "Also write each table into this directory");
    cmd->callback([a] { run_tables(*a); });
}

}  // namespace emi::cli
