#include "common.hpp"

#include <filesystem>
#include <iostream>

#include "emi/error.hpp"
#include "emi/petro.hpp"

namespace emi::cli {

namespace {

std::string& stored_command_line() {
    static std::string s;
    return s;
}

}  // namespace

void InstrumentArgs::add(CLI::App* cmd) {
    cmd->add_option("--frequency", frequency, "Transmitter frequency (Hz)")->capture_default_str();
    cmd->add_option("--moment", moment, "Dipole moment (A m^2)")->capture_default_str();
    cmd->add_option("--offsets", offsets, "Coil offsets (m), comma separated")->delimiter(',')->capture_default_str();
    cmd->add_option("--prp-offsets", offsets_prp, "PRP offsets (m) if they differ from --offsets")->delimiter(',');
}

InstrumentConfig InstrumentArgs::make() const {
    InstrumentConfig inst;
    inst.frequency = frequency;
    inst.moment = moment;
    inst.offsets_hcp = offsets;
    inst.offsets_prp = offsets_prp.empty() ? offsets : offsets_prp;
    inst.validate();
    return inst;
}

bool is_preset(const std::string& spec) {
    for (const auto& n : preset_names()) {
        if (n == spec) return true;
    }
    return false;
}

LayeredModel resolve_model(const std::string& spec) {
    if (is_preset(spec)) return preset_model(spec);
    return load_model_json(spec);
}

void set_command_line(int argc, const char* const* argv) {
    std::string s = "emi";
    for (int i = 1; i < argc; ++i) {
        s += ' ';
        s += argv[i];
    }
    stored_command_line() = s;
}

const std::string& command_line() { return stored_command_line(); }

void stamp(io::Table& table, const std::vector<std::pair<std::string, std::string>>& extra) {
    std::vector<std::pair<std::string, std::string>> meta{{"command", command_line()}, {"version", kVersion}};
    meta.insert(meta.end(), extra.begin(), extra.end());
    meta.insert(meta.end(), table.meta.begin(), table.meta.end());
    table.meta = std::move(meta);
}

void emit(const std::string& path, const std::string& contents) {
    if (path.empty() || path == "-") {
        std::cout << contents;
        std::cout.flush();
    } else {
        io::write_file(path, contents);
    }
}

std::string in_dir(const std::string& dir, const std::string& name) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ValidationError("cannot create directory '" + dir + "': " + ec.message());
    return (std::filesystem::path(dir) / name).string();
}

}  // namespace emi::cli
