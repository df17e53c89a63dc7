#pragma once

#include <string>
#include <utility>
#include <vector>

#include "emi/forward.hpp"
#include "emi/inverse.hpp"

namespace emi::io {

// Shortest round-trip decimal form.
std::string fmt(double v);

// CSV with '#'-prefixed metadata, a header row and a units row.
struct Table {
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<std::string> columns;
    std::vector<std::string> units;
    std::vector<std::vector<std::string>> rows;

    std::string csv() const;
};

Table forward_table(const FieldResponse& response);
std::string forward_json(const FieldResponse& response);

// Observation CSV: columns r, geometry, im_value with units m, -, A/m.
Table observation_table(const ObservationVector& d);
ObservationVector parse_observation_csv(const std::string& text);

std::string inversion_json(const InversionResult& result, const std::vector<double>& p_star = {});

// One row per model layer: conductivity errors for layers 1..N, thickness errors for 1..N-1,
// one column pair per method; a final average row.
Table study_table(const StudyResult& study, double nsr);
std::string trial_json(const TrialRecord& record);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace emi::io
