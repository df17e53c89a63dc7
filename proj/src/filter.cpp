#include "emi/filter.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#include "emi/error.hpp"

#ifndef EMI_DEFAULT_ASSET_DIR
#define EMI_DEFAULT_ASSET_DIR "assets"
#endif

namespace emi {

namespace {

std::string trim(std::string_view s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && (s[a] == ' ' || s[a] == '\t' || s[a] == '\r')) ++a;
    while (b > a && (s[b - 1] == ' ' || s[b - 1] == '\t' || s[b - 1] == '\r')) --b;
    return std::string(s.substr(a, b - a));
}

double parse_double(std::string_view tok, const std::string& where) {
    double v = 0.0;
    const char* first = tok.data();
    const char* last = first + tok.size();
    if (!tok.empty() && *first == '+') ++first;
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last || !std::isfinite(v)) {
        throw ValidationError(where + ": cannot parse number '" + std::string(tok) + "'");
    }
    return v;
}

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("filter table not found: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

unsigned long long fnv1a64(const std::string& bytes) {
    unsigned long long h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

FilterColumn parse_filter_column(const std::string& text, const std::string& source) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ValidationError(source + ": empty filter file");
    const auto head = split_ws(line);
    if (head.size() != 6 || head[0] != "#" || head[1] != "hankel-filter" || (head[2] != "J0" && head[2] != "J1")) {
        throw ValidationError(source + ": bad header, expected '# hankel-filter J0|J1 <count> <spacing> <shift>'");
    }
    FilterColumn col;
    col.order = head[2] == "J0" ? 0 : 1;
    const double count_d = parse_double(head[3], source);
    if (count_d < 1 || count_d != std::floor(count_d)) throw ValidationError(source + ": bad point count");
    const auto count = static_cast<std::size_t>(count_d);
    col.spacing = parse_double(head[4], source);
    col.shift = parse_double(head[5], source);
    if (!(col.spacing > 0.0)) throw ValidationError(source + ": spacing must be > 0");

    std::string body;
    bool have_checksum = false;
    unsigned long long expected = 0;
    while (std::getline(in, line)) {
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t[0] == '#') {
            const auto tok = split_ws(t);
            if (tok.size() == 4 && tok[1] == "checksum" && tok[2] == "fnv1a64") {
                const auto r = std::from_chars(tok[3].data(), tok[3].data() + tok[3].size(), expected, 16);
                if (r.ec != std::errc()) throw ValidationError(source + ": bad checksum line");
                have_checksum = true;
            }
            continue;
        }
        if (have_checksum) throw ValidationError(source + ": data after checksum line");
        col.weights.push_back(parse_double(t, source));
        body += line;
        body += '\n';
    }
    if (col.weights.size() != count) {
        throw ValidationError(source + ": header declares " + std::to_string(count) + " weights, found " +
                              std::to_string(col.weights.size()));
    }
    if (!have_checksum) throw ValidationError(source + ": missing checksum line");
    if (fnv1a64(body) != expected) throw ValidationError(source + ": checksum mismatch");
    return col;
}

FilterTable load_filter(const std::string& dir, const std::string& name) {
    const std::string p0 = dir + "/filters/" + name + ".j0.txt";
    const std::string p1 = dir + "/filters/" + name + ".j1.txt";
    const FilterColumn c0 = parse_filter_column(read_file(p0), p0);
    const FilterColumn c1 = parse_filter_column(read_file(p1), p1);
    if (c0.order != 0 || c1.order != 1) throw ValidationError("filter " + name + ": J0/J1 files swapped");
    if (c0.weights.size() != c1.weights.size() || c0.spacing != c1.spacing || c0.shift != c1.shift) {
        throw ValidationError("filter " + name + ": J0 and J1 abscissae differ");
    }
    FilterTable t;
    t.name = name;
    t.spacing = c0.spacing;
    t.shift = c0.shift;
    t.j0 = c0.weights;
    t.j1 = c1.weights;
    t.base.resize(t.j0.size());
    for (std::size_t j = 0; j < t.base.size(); ++j) t.base[j] = std::exp(static_cast<double>(j) * t.spacing - t.shift);
    return t;
}

std::string asset_dir() {
    const char* env = std::getenv("EMI_ASSET_DIR");
    if (env != nullptr && *env != '\0') return env;
    return EMI_DEFAULT_ASSET_DIR;
}

FieldResponse filter_fields(const LayeredModel& model, const InstrumentConfig& instrument, const FilterTable& table) {
    instrument.validate();
    const double omega = instrument.omega();
    const double scale = instrument.moment / (4.0 * std::numbers::pi);
    FieldResponse resp;
    resp.method = Method::filter;

    auto transform = [&](double r, int order) {
        const std::vector<double>& w = order == 0 ? table.j0 : table.j1;
        Complex sum = 0.0;
        for (std::size_t j = 0; j < w.size(); ++j) {
            const double lam = table.base[j] / r;
            const Complex r0 = reflection_r0(model, omega, lam, instrument.mu);
            const Complex f = (order == 0 ? 1.0 + r0 : 1.0 - r0) * (lam * lam);
            sum += f * w[j];
        }
        return sum / r;
    };

    for (double r : instrument.offsets_hcp) resp.entries.push_back({r, Geometry::hcp, scale * transform(r, 0), 0.0});
    for (double r : instrument.offsets_prp) resp.entries.push_back({r, Geometry::prp, scale * transform(r, 1), 0.0});
    return resp;
}

FieldEntry filter_field(const LayeredModel& model, const InstrumentConfig& instrument, const FilterTable& table,
                        Geometry geometry, double r) {
    InstrumentConfig one = instrument;
    one.offsets_hcp.clear();
    one.offsets_prp.clear();
    (geometry == Geometry::hcp ? one.offsets_hcp : one.offsets_prp).push_back(r);
    return filter_fields(model, one, table).entries.front();
}

}  // namespace emi
