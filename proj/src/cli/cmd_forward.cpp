#include <memory>

#include "common.hpp"
#include "emi/approx.hpp"
#include "emi/error.hpp"
#include "emi/filter.hpp"

namespace emi::cli {

namespace {

struct ForwardArgs {
    std::string model;
    std::string method = "quad";
    std::string geometry = "both";
    std::string filter = kDefaultFilter;
    std::string format = "csv";
    std::string out;
    InstrumentArgs instrument;
    QuadratureSettings quad;
};

void run_forward(const ForwardArgs& a) {
    const LayeredModel model = resolve_model(a.model);
    InstrumentConfig inst = a.instrument.make();
    if (a.geometry == "hcp") inst.offsets_prp.clear();
    if (a.geometry == "prp") inst.offsets_hcp.clear();
    a.quad.validate();

    FieldResponse resp;
    if (a.method == "quad") {
        resp = split_fields(model, inst, a.quad);
    } else if (a.method == "filter") {
        resp = filter_fields(model, inst, load_filter(asset_dir(), a.filter));
    } else {
        resp = approx_fields(model, inst);
    }

    if (a.format == "json") {
        emit(a.out, io::forward_json(resp));
        return;
    }
    io::Table t = io::forward_table(resp);
    stamp(t, {{"model", a.model},
              {"frequency_hz", io::fmt(inst.frequency)},
              {"moment_am2", io::fmt(inst.moment)}});
    emit(a.out, t.csv());
}

}  // namespace

void add_forward(CLI::App& app) {
    auto a = std::make_shared<ForwardArgs>();
    CLI::App* cmd = app.add_subcommand("forward", "Compute HCP/PRP fields for a layered model");
    cmd->add_option("--model", a->model, "Preset name (model1..model4) or model JSON file")->required();
    cmd->add_option("--method", a->method, "Forward solver")
        ->check(CLI::IsMember({"quad", "filter", "approx"}))
        ->capture_default_str();
    cmd->add_option("--geometry", a->geometry, "Coil geometry")
        ->check(CLI::IsMember({"hcp", "prp", "both"}))
        ->capture_default_str();
    cmd->add_option("--filter", a->filter, "Hankel filter asset name under $EMI_ASSET_DIR/filters")
        ->capture_default_str();
    cmd->add_option("--s0", a->quad.s0, "Truncation of the J0 integral (1/m)")->capture_default_str();
    cmd->add_option("--s1", a->quad.s1, "Truncation of the J1 integral (1/m)")->capture_default_str();
    cmd->add_option("--rel-tol", a->quad.rel_tol, "Quadrature relative tolerance")->capture_default_str();
    cmd->add_option("--abs-tol", a->quad.abs_tol, "Quadrature absolute tolerance")->capture_default_str();
    cmd->add_option("--max-subdivisions", a->quad.max_subdivisions, "Quadrature interval budget")
        ->capture_default_str();
    a->instrument.add(cmd);
    cmd->add_option("--format", a->format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    cmd->add_option("--out", a->out, "Output file (default stdout)");
    cmd->callback([a] { run_forward(*a); });
}

}  // namespace emi::cli
