#pragma once

#include <string>
#include <vector>

#include "emi/model.hpp"

namespace emi {

// Constituent conductivities, S/m.
struct Materials {
    double quartz = 0.01;  // sand/silt grains
    double clay = 0.2;
    double water = 0.1;
    double air = 0.0001;
};

Materials parse_materials_json(const std::string& text);

// Fractions in [0, 1].
struct PetroLayer {
    double clay_content = 0.0;
    double porosity = 0.0;
    double water_saturation = 0.0;
    Materials materials{};
    double gamma = 0.5;

    void validate() const;
};

double crim_conductivity(const PetroLayer& layer);

struct PresetLayer {
    std::string description;
    PetroLayer petro;
};

struct Preset {
    std::string name;
    std::vector<PresetLayer> layers;
    std::vector<double> h;

    LayeredModel model() const;  // conductivities from crim_conductivity
};

const std::vector<std::string>& preset_names();
Preset preset(const std::string& name);
LayeredModel preset_model(const std::string& name);

// Accepts "0.37", "37%" or "0.37 frac"; a bare number above 1 is rejected to catch
// percentages passed without a unit.
double parse_fraction(const std::string& text);

}  // namespace emi
