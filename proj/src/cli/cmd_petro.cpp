#include <memory>

#include "common.hpp"
#include "emi/error.hpp"
#include "emi/petro.hpp"

namespace emi::cli {

namespace {

struct CrimArgs {
    std::string clay;
    std::string porosity;
    std::string saturation;
    std::string materials;
    double gamma = 0.5;
    std::string out;
};

struct PresetArgs {
    std::string name = "all";
    bool model_json = false;
    std::string out;
};

void run_crim(const CrimArgs& a) {
    PetroLayer l;
    l.clay_content = parse_fraction(a.clay);
    l.porosity = parse_fraction(a.porosity);
    l.water_saturation = parse_fraction(a.saturation);
    l.gamma = a.gamma;
    if (!a.materials.empty()) l.materials = parse_materials_json(io::read_file(a.materials));
    const double s = crim_conductivity(l);
    io::Table t;
    t.columns = {"clay_content", "porosity", "water_saturation", "gamma", "sigma"};
    t.units = {"frac", "frac", "frac", "-", "S/m"};
    t.rows.push_back({io::fmt(l.clay_content), io::fmt(l.porosity), io::fmt(l.water_saturation), io::fmt(l.gamma),
                      io::fmt(s)});
    stamp(t);
    emit(a.out, t.csv());
}

void run_preset(const PresetArgs& a) {
    const std::vector<std::string> names = a.name == "all" ? preset_names() : std::vector<std::string>{a.name};
    if (a.model_json) {
        if (names.size() != 1) throw ValidationError("--model-json needs a single preset name");
        emit(a.out, model_to_json(preset_model(names.front())) + '\n');
        return;
    }
    io::Table t;
    t.columns = {"model", "layer", "description", "clay_content", "porosity", "water_saturation", "sigma", "h"};
    t.units = {"-", "-", "-", "frac", "frac", "frac", "mS/m", "m"};
    for (const auto& n : names) {
        const Preset p = preset(n);
        for (std::size_t i = 0; i < p.layers.size(); ++i) {
            const auto& l = p.layers[i];
            t.rows.push_back({n, std::to_string(i + 1), l.description, io::fmt(l.petro.clay_content),
                              io::fmt(l.petro.porosity), io::fmt(l.petro.water_saturation),
                              io::fmt(1e3 * crim_conductivity(l.petro)), i < p.h.size() ? io::fmt(p.h[i]) : ""});
        }
    }
    stamp(t);
    emit(a.out, t.csv());
}

}  // namespace

void add_petro(CLI::App& app) {
    CLI::App* cmd = app.add_subcommand("petro", "Petrophysical conductivity (CRIM) and preset models");
    cmd->require_subcommand(1);

    auto c = std::make_shared<CrimArgs>();
    CLI::App* crim = cmd->add_subcommand("crim", "Bulk conductivity of a clay/sand/water/air mixture");
    crim->add_option("--clay", c->clay, "Clay content, e.g. 0.25, 25% or '0.25 frac'")->required();
    crim->add_option("--porosity", c->porosity, "Porosity")->required();
    crim->add_option("--saturation", c->saturation, "Water saturation")->required();
    crim->add_option("--materials", c->materials, "Materials JSON: quartz, clay, water, air in S/m");
    crim->add_option("--gamma", c->gamma, "Mixing exponent")->capture_default_str();
    crim->add_option("--out", c->out, "Output file (default stdout)");
    crim->callback([c] { run_crim(*c); });

    auto p = std::make_shared<PresetArgs>();
    CLI::App* pre = cmd->add_subcommand("preset", "List preset models with CRIM conductivities");
    pre->add_option("name", p->name, "model1..model4 or all")
        ->check(CLI::IsMember({"all", "model1", "model2", "model3", "model4"}))
        ->capture_default_str();
    pre->add_flag("--model-json", p->model_json, "Emit the preset as a model JSON file for forward/invert");
    pre->add_option("--out", p->out, "Output file (default stdout)");
    pre->callback([p] { run_preset(*p); });
}

}  // namespace emi::cli
