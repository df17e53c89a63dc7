#include "emi/petro.hpp"

#include <charconv>
#include <cmath>

#include <json.hpp>

#include "emi/error.hpp"

namespace emi {

void PetroLayer::validate() const {
    auto frac = [](double v, const char* name) {
        if (!(v >= 0.0 && v <= 1.0)) throw ValidationError(std::string(name) + " must be a fraction in [0, 1]");
    };
    frac(clay_content, "clay content");
    frac(porosity, "porosity");
    frac(water_saturation, "water saturation");
    for (double s : {materials.quartz, materials.clay, materials.water, materials.air}) {
        if (!(s > 0.0) || !std::isfinite(s)) throw ValidationError("material conductivities must be > 0");
    }
    if (!(gamma > 0.0 && gamma <= 1.0)) throw ValidationError("gamma must be in (0, 1]");
}

double crim_conductivity(const PetroLayer& l) {
    l.validate();
    const double g = l.gamma;
    const double phi = l.porosity;
    const double c = l.clay_content;
    const double sw = l.water_saturation;
    const Materials& m = l.materials;
    const double mix = (1.0 - phi) * (1.0 - c) * std::pow(m.quartz, g) + (1.0 - phi) * c * std::pow(m.clay, g) +
                       phi * sw * std::pow(m.water, g) + phi * (1.0 - sw) * std::pow(m.air, g);
    return std::pow(mix, 1.0 / g);
}

Materials parse_materials_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("materials JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ValidationError("materials JSON must be an object");
    Materials m;
    for (const auto& [key, value] : doc.items()) {
        if (!value.is_number()) throw ValidationError("materials JSON: '" + key + "' must be a number (S/m)");
        const double v = value.get<double>();
        if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError("materials JSON: '" + key + "' must be > 0 S/m");
        if (key == "quartz" || key == "sand" || key == "silt") m.quartz = v;
        else if (key == "clay") m.clay = v;
        else if (key == "water") m.water = v;
        else if (key == "air") m.air = v;
        else throw ValidationError("materials JSON: unknown material '" + key + "'");
    }
    return m;
}

LayeredModel Preset::model() const {
    std::vector<double> sigma;
    for (const auto& l : layers) sigma.push_back(crim_conductivity(l.petro));
    return LayeredModel(std::move(sigma), h);
}

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names{"model1", "model2", "model3", "model4"};
    return names;
}

Preset preset(const std::string& name) {
    auto layer = [](const char* what, double c_pct, double phi_pct, double sw_pct) {
        PresetLayer l;
        l.description = what;
        l.petro.clay_content = c_pct / 100.0;
        l.petro.porosity = phi_pct / 100.0;
        l.petro.water_saturation = sw_pct / 100.0;
        return l;
    };
    Preset p;
    p.name = name;
    const bool wet = name == "model2" || name == "model4";
    if (name == "model1" || name == "model2" || name == "model3" || name == "model4") {
        p.layers = {layer(wet ? "wet silt and clay" : "dry silt and clay", 50, 20, wet ? 92 : 3),
                    layer(wet ? "wet gravel lens" : "dry gravel lens", 1, 37, wet ? 98 : 1),
                    layer(wet ? "wet sand/silt and clay" : "dry sand/silt and clay", 25, 30, wet ? 98 : 2)};
    } else {
        throw ValidationError("unknown preset '" + name + "' (expected model1..model4)");
    }
    const bool thin = name == "model1" || name == "model2";
    p.h = thin ? std::vector<double>{2.5, 0.5} : std::vector<double>{3.0, 2.0};
    return p;
}

LayeredModel preset_model(const std::string& name) { return preset(name).model(); }

double parse_fraction(const std::string& text) {
    std::string s = text;
    while (!s.empty() && s.back() == ' ') s.pop_back();
    double scale = 1.0;
    bool explicit_unit = false;
    if (!s.empty() && s.back() == '%') {
        s.pop_back();
        scale = 0.01;
        explicit_unit = true;
    } else if (s.size() > 4 && s.compare(s.size() - 4, 4, "frac") == 0) {
        s.resize(s.size() - 4);
        explicit_unit = true;
    }
    while (!s.empty() && s.back() == ' ') s.pop_back();
    double v = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
        throw ValidationError("cannot parse fraction '" + text + "'");
    }
    if (!explicit_unit && v > 1.0) {
        throw ValidationError("fraction '" + text + "' exceeds 1; write it as '" + text + "%' if it is a percentage");
    }
    v *= scale;
    if (!(v >= 0.0 && v <= 1.0)) throw ValidationError("fraction '" + text + "' outside [0, 1]");
    return v;
}

}  // namespace emi
