#pragma once

#include <string>
#include <vector>

#include "emi/forward.hpp"

namespace emi {

// Digital linear filter for the Hankel transform:
//   int_0^inf f(lambda) J_l(lambda r) dlambda ~ (1/r) sum_j f(b_j / r) w_j,  b_j = exp(j spacing - shift)
struct FilterTable {
    std::string name;
    double spacing = 0.0;
    double shift = 0.0;
    std::vector<double> base;
    std::vector<double> j0;
    std::vector<double> j1;
};

// Parses one file of the asset format; `order` receives 0 or 1.
struct FilterColumn {
    int order = 0;
    double spacing = 0.0;
    double shift = 0.0;
    std::vector<double> weights;
};
FilterColumn parse_filter_column(const std::string& text, const std::string& source);

// Loads <dir>/filters/<name>.j0.txt and .j1.txt. Throws ValidationError naming the
// missing or corrupt path.
FilterTable load_filter(const std::string& dir, const std::string& name);

// EMI_ASSET_DIR if set, else the directory baked in at build time.
std::string asset_dir();
inline constexpr const char* kDefaultFilter = "wer_201_2018";

FieldResponse filter_fields(const LayeredModel& model, const InstrumentConfig& instrument, const FilterTable& table);
FieldEntry filter_field(const LayeredModel& model, const InstrumentConfig& instrument, const FilterTable& table,
                        Geometry geometry, double r);

// 64-bit FNV-1a over raw bytes; the asset checksum.
unsigned long long fnv1a64(const std::string& bytes);

}  // namespace emi
