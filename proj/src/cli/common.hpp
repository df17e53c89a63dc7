#pragma once

#include <string>
#include <vector>

#include <CLI11.hpp>

#include "emi/io.hpp"
#include "emi/model.hpp"

namespace emi::cli {

inline constexpr const char* kVersion = "0.1.0";

// Shared instrument flags: frequency, moment and offsets for both geometries.
struct InstrumentArgs {
    double frequency = 1.0e4;
    double moment = 1.0;
    std::vector<double> offsets{2.0, 4.0, 6.0, 8.0};
    std::vector<double> offsets_prp;  // empty: same as offsets

    void add(CLI::App* cmd);
    InstrumentConfig make() const;
};

// A preset name (model1..model4) or a path to a model JSON file.
LayeredModel resolve_model(const std::string& spec);
bool is_preset(const std::string& spec);

// The command line, for provenance headers.
void set_command_line(int argc, const char* const* argv);
const std::string& command_line();

// Provenance metadata placed in front of any table's own metadata.
void stamp(io::Table& table, const std::vector<std::pair<std::string, std::string>>& extra = {});

// Writes to the file, or to stdout when path is empty or "-".
void emit(const std::string& path, const std::string& contents);

// Creates the directory if needed and returns path/name.
std::string in_dir(const std::string& dir, const std::string& name);

void add_forward(CLI::App& app);
void add_survey(CLI::App& app);
void add_invert(CLI::App& app);
void add_petro(CLI::App& app);
void add_tables(CLI::App& app);

}  // namespace emi::cli
