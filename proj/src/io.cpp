#include "emi/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "emi/error.hpp"

namespace emi::io {

std::string fmt(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

namespace {

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string join(const std::vector<std::string>& cells) {
    std::string s;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) s += ',';
        s += cells[i];
    }
    return s + '\n';
}

nlohmann::json vec(const std::vector<double>& v) {
    auto a = nlohmann::json::array();
    for (double x : v) a.push_back(x);
    return a;
}

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

std::string Table::csv() const {
    std::string s;
    for (const auto& [k, v] : meta) s += "# " + k + ": " + v + '\n';
    s += join(columns);
    s += join(units);
    for (const auto& r : rows) s += join(r);
    return s;
}

Table forward_table(const FieldResponse& response) {
    Table t;
    t.meta.push_back({"method", method_name(response.method)});
    t.columns = {"r", "geometry", "re_value", "im_value", "tail_estimate"};
    t.units = {"m", "-", "A/m", "A/m", "A/m"};
    for (const auto& e : response.entries) {
        t.rows.push_back(
            {fmt(e.r), geometry_name(e.geometry), fmt(e.value.real()), fmt(e.value.imag()), fmt(e.tail_estimate)});
    }
    return t;
}

std::string forward_json(const FieldResponse& response) {
    nlohmann::json doc;
    doc["method"] = method_name(response.method);
    doc["units"] = {{"r", "m"}, {"value", "A/m"}, {"tail_estimate", "A/m"}};
    auto rows = nlohmann::json::array();
    for (const auto& e : response.entries) {
        rows.push_back({{"r", e.r},
                        {"geometry", geometry_name(e.geometry)},
                        {"re", e.value.real()},
                        {"im", e.value.imag()},
                        {"tail_estimate", e.tail_estimate}});
    }
    doc["entries"] = rows;
    return doc.dump(2) + '\n';
}

Table observation_table(const ObservationVector& d) {
    Table t;
    t.columns = {"r", "geometry", "im_value"};
    t.units = {"m", "-", "A/m"};
    for (std::size_t i = 0; i < d.dz.size(); ++i) t.rows.push_back({fmt(d.r_hcp[i]), "hcp", fmt(d.dz[i])});
    for (std::size_t i = 0; i < d.drho.size(); ++i) t.rows.push_back({fmt(d.r_prp[i]), "prp", fmt(d.drho[i])});
    return t;
}

ObservationVector parse_observation_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int col_r = -1, col_g = -1, col_v = -1;
    bool header = false, units = false;
    int lineno = 0;
    ObservationVector d;
    auto number = [&](const std::string& s) {
        double v = 0.0;
        const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
        if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
            throw ValidationError("observation CSV line " + std::to_string(lineno) + ": bad number '" + s + "'");
        }
        return v;
    };
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string c;
        while (std::getline(ls, c, ',')) cells.push_back(trim(c));
        if (!header) {
            for (int i = 0; i < static_cast<int>(cells.size()); ++i) {
                if (cells[i] == "r") col_r = i;
                else if (cells[i] == "geometry") col_g = i;
                else if (cells[i] == "im_value") col_v = i;
            }
            if (col_r < 0 || col_g < 0 || col_v < 0) {
                throw ValidationError("observation CSV needs columns r, geometry, im_value");
            }
            header = true;
            continue;
        }
        if (!units) {
            // units row: r in m, im_value in A/m
            if (cells.size() <= static_cast<std::size_t>(std::max({col_r, col_g, col_v})) || cells[col_r] != "m" ||
                cells[col_v] != "A/m") {
                throw ValidationError("observation CSV units row must give r in m and im_value in A/m");
            }
            units = true;
            continue;
        }
        if (cells.size() <= static_cast<std::size_t>(std::max({col_r, col_g, col_v}))) {
            throw ValidationError("observation CSV line " + std::to_string(lineno) + ": too few columns");
        }
        const double r = number(cells[col_r]);
        const double v = number(cells[col_v]);
        if (cells[col_g] == "hcp") {
            d.r_hcp.push_back(r);
            d.dz.push_back(v);
        } else if (cells[col_g] == "prp") {
            d.r_prp.push_back(r);
            d.drho.push_back(v);
        } else {
            throw ValidationError("observation CSV line " + std::to_string(lineno) + ": geometry must be hcp or prp");
        }
    }
    if (!units) throw ValidationError("observation CSV is missing its header or units row");
    return d;
}

std::string inversion_json(const InversionResult& r, const std::vector<double>& p_star) {
    nlohmann::json doc;
    doc["method"] = solver_name(r.method);
    doc["units"] = "sigma in S/m, h in m, objective in (A/m)^2";
    if (!r.p0.empty()) doc["p0"] = vec(r.p0);
    doc["p_hat"] = vec(r.p_hat);
    doc["objective"] = r.objective;
    doc["iterations"] = r.iterations;
    doc["forward_evaluations"] = r.forward_evaluations;
    doc["full_forward_evaluations"] = r.full_forward_evaluations;
    doc["converged"] = r.converged;
    if (!p_star.empty()) {
        doc["p_star"] = vec(p_star);
        doc["relative_error_pct"] = vec(relative_errors_pct(r.p_hat, p_star));
    }
    auto stages = nlohmann::json::array();
    for (const auto& s : r.stages) {
        stages.push_back({{"name", s.name},
                          {"p", vec(s.p)},
                          {"objective", s.objective},
                          {"iterations", s.iterations},
                          {"evaluations", s.evaluations},
                          {"converged", s.converged}});
    }
    doc["stages"] = stages;
    return doc.dump(2) + '\n';
}

std::string trial_json(const TrialRecord& rec) {
    nlohmann::json doc = nlohmann::json::parse(inversion_json(rec.result, rec.p_star));
    doc["model"] = rec.model;
    doc["nsr"] = rec.nsr;
    doc["trial"] = rec.trial;
    doc["seed"] = rec.seed;
    return doc.dump(2) + '\n';
}

Table study_table(const StudyResult& study, double nsr) {
    std::vector<SolverMethod> methods;
    std::vector<std::string> models;
    for (const auto& c : study.cells) {
        if (c.nsr != nsr) continue;
        if (std::find(methods.begin(), methods.end(), c.method) == methods.end()) methods.push_back(c.method);
        if (std::find(models.begin(), models.end(), c.model) == models.end()) models.push_back(c.model);
    }
    if (models.empty()) throw ValidationError("no study results at nsr " + fmt(nsr));
    auto find = [&](const std::string& m, SolverMethod k) -> const StudyCell& {
        for (const auto& c : study.cells) {
            if (c.nsr == nsr && c.model == m && c.method == k) return c;
        }
        throw ValidationError("study table is incomplete");
    };

    Table t;
    t.meta.push_back({"nsr", fmt(nsr)});
    t.meta.push_back({"trials", std::to_string(study.cells.front().trials)});
    t.meta.push_back({"statistic", "mean relative error over trials"});
    t.columns = {"model", "layer"};
    t.units = {"-", "-"};
    for (auto k : methods) {
        t.columns.push_back(std::string("sigma_err_") + solver_name(k));
        t.units.push_back("%");
    }
    for (auto k : methods) {
        t.columns.push_back(std::string("h_err_") + solver_name(k));
        t.units.push_back("%");
    }
    for (const auto& m : models) {
        const std::size_t layers = (find(m, methods.front()).mean_error_pct.size() + 1) / 2;
        for (std::size_t l = 0; l < layers; ++l) {
            std::vector<std::string> row{m, std::to_string(l + 1)};
            for (auto k : methods) row.push_back(fixed(find(m, k).mean_error_pct[l], 3));
            for (auto k : methods) {
                row.push_back(l + 1 < layers ? fixed(find(m, k).mean_error_pct[layers + l], 3) : "");
            }
            t.rows.push_back(std::move(row));
        }
    }
    std::vector<std::string> avg{"average", ""};
    for (auto k : methods) avg.push_back(fixed(grand_average(study, nsr, k).sigma_pct, 3));
    for (auto k : methods) avg.push_back(fixed(grand_average(study, nsr, k).h_pct, 3));
    t.rows.push_back(std::move(avg));
    return t;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write '" + path + "'");
    out << contents;
    if (!out) throw ValidationError("write failed for '" + path + "'");
}

}  // namespace emi::io
