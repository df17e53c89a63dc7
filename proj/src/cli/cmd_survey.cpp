#include <memory>

#include "common.hpp"
#include "emi/inverse.hpp"

namespace emi::cli {

namespace {

struct SurveyArgs {
    std::string model;
    double nsr = 0.0;
    std::uint64_t seed = 1;
    std::string out;
    InstrumentArgs instrument;
};

void run_survey(const SurveyArgs& a) {
    const LayeredModel model = resolve_model(a.model);
    const InstrumentConfig inst = a.instrument.make();
    const SolverSettings defaults;
    const ObservationVector d = synth_observations(pack_parameters(model), inst, a.nsr, a.seed, defaults.quad);
    io::Table t = io::observation_table(d);
    stamp(t, {{"model", a.model},
              {"nsr", io::fmt(a.nsr)},
              {"seed", std::to_string(a.seed)},
              {"frequency_hz", io::fmt(inst.frequency)},
              {"moment_am2", io::fmt(inst.moment)}});
    emit(a.out, t.csv());
}

}  // namespace

void add_survey(CLI::App& app) {
    auto a = std::make_shared<SurveyArgs>();
    CLI::App* cmd = app.add_subcommand("survey", "Generate a synthetic observation CSV (r, geometry, im_value)");
    cmd->add_option("--model", a->model, "Preset name (model1..model4) or model JSON file")->required();
    cmd->add_option("--nsr", a->nsr, "Noise-to-signal ratio ||eta|| / ||d||")
        ->check(CLI::Range(0.0, 0.05))
        ->capture_default_str();
    cmd->add_option("--seed", a->seed, "Noise seed")->capture_default_str();
    a->instrument.add(cmd);
    cmd->add_option("--out", a->out, "Output file (default stdout)");
    cmd->callback([a] { run_survey(*a); });
}

}  // namespace emi::cli
