#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "emi/error.hpp"
#include "emi/filter.hpp"
#include "emi/forward.hpp"
#include "emi/petro.hpp"
#include "emi/quadrature.hpp"
#include "support.hpp"

using emi::Complex;
using emi::LayeredModel;

namespace {

const double kOmega = 2.0 * std::numbers::pi * 1e4;

LayeredModel table_model() { return LayeredModel({0.333, 0.020, 0.100}, {2.5, 0.5}); }

}  // namespace

TEST_CASE("Gauss-Kronrod integrates polynomials and smooth functions") {
    auto f = [](const double* x, std::size_t n, double* out) {
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = x[i] * x[i] * x[i];
            out[n + i] = std::sin(x[i]);
        }
    };
    const auto r = emi::quad::gauss_kronrod(f, 2, 0.0, std::numbers::pi, {1e-12, 0.0, 50});
    CHECK(r.converged);
    CHECK(rel_diff(r.value[0], std::pow(std::numbers::pi, 4) / 4.0) < 1e-14);
    CHECK(rel_diff(r.value[1], 2.0) < 1e-13);
    CHECK(r.evaluations % 15 == 0);
}

TEST_CASE("Gauss-Kronrod reports exhaustion and rejects non-finite values") {
    auto osc = [](const double* x, std::size_t n, double* out) {
        for (std::size_t i = 0; i < n; ++i) out[i] = std::cos(200.0 * x[i]);
    };
    const auto r = emi::quad::gauss_kronrod(osc, 1, 0.0, 10.0, {1e-14, 0.0, 2});
    CHECK_FALSE(r.converged);
    auto bad = [](const double* x, std::size_t n, double* out) {
        for (std::size_t i = 0; i < n; ++i) out[i] = 1.0 / (x[i] - 0.5) / 0.0;
    };
    CHECK_THROWS_AS(emi::quad::gauss_kronrod(bad, 1, 0.0, 1.0, {}), emi::NumericalError);
}

TEST_CASE("half-space closed form against 40-digit evaluations") {
    struct Row {
        double sigma, r;
        Complex hz, hrho;
    };
    const Row rows[] = {
        {0.05, 2, {-0.0099506043326397944584, -0.000035555909397409386397},
         {4.6005944913136955198e-7, 0.000039148843367937643575}},
        {0.05, 8, {-0.00015803963749171931261, -6.2094085553591613881e-6},
         {9.8933826937772616043e-7, 9.3581076063977893527e-6}},
        {0.333, 2, {-0.0099983608676247958011, -0.0001984297751356068508},
         {0.000013924066835002961057, 0.0002562891091532504276}},
        {0.333, 8, {-0.00017895239635812553966, -0.000011410212704279562942},
         {0.000019927615141994880956, 0.000048638345520305863713}},
        {0.001, 2, {-0.0099471943472713586485, -7.7487105764097716011e-7},
         {3.0526230366161990967e-10, 7.8534946741677456821e-7}},
    };
    for (const auto& row : rows) {
        CAPTURE(row.sigma);
        CAPTURE(row.r);
        const auto f = emi::halfspace_fields(row.sigma, kOmega, 1.0, row.r);
        CHECK(std::abs(f.hz.real() - row.hz.real()) < 1e-13 * std::abs(row.hz));
        CHECK(std::abs(f.hz.imag() - row.hz.imag()) < 1e-12 * std::abs(row.hz.imag()));
        CHECK(std::abs(f.hrho.real() - row.hrho.real()) < 1e-11 * std::abs(row.hrho));
        CHECK(std::abs(f.hrho.imag() - row.hrho.imag()) < 1e-12 * std::abs(row.hrho.imag()));
    }
}

TEST_CASE("half-space fields scale linearly with the moment") {
    const auto a = emi::halfspace_fields(0.05, kOmega, 1.0, 4.0);
    const auto b = emi::halfspace_fields(0.05, kOmega, 2.5, 4.0);
    CHECK(rel_diff(b.hz, 2.5 * a.hz) < 1e-15);
    CHECK(rel_diff(b.hrho, 2.5 * a.hrho) < 1e-15);
    CHECK_THROWS_AS(emi::halfspace_fields(0.05, kOmega, 1.0, 0.0), emi::ValidationError);
    CHECK_THROWS_AS(emi::halfspace_fields(-1.0, kOmega, 1.0, 1.0), emi::ValidationError);
}

TEST_CASE("truncated split integrals against mpmath quadrature") {
    // r = 2 m; columns: s, int g0 (re, im), int g1 (re, im)
    const double rows[8][5] = {
        {0.5, 0.00027379829308087546376, 0.00028570907835688786974, 0.000052924434355851205378,
         0.000087722468803013786491},
        {1.0, 0.00028103256811909733642, 0.00033390604995396123355, 0.000058662579624568568415,
         0.00012857107229359275569},
        {1.5, 0.00028106631226223158606, 0.00033429009147769155223, 0.00005891971454267816549,
         0.00013225958189078200396},
        {2.0, 0.00028105740208558350368, 0.00033409110094046636118, 0.000058925710629021642323,
         0.00013238718080025719436},
        {2.5, 0.00028105680903266599552, 0.00033407364406912922407, 0.000058925436105474546304,
         0.00013237881054371347947},
        {3.0, 0.0002810568005133505423, 0.00033407334353791378365, 0.000058925398708701878031,
         0.00013237741736909063458},
        {3.5, 0.00028105680216396128177, 0.00033407341823947036779, 0.000058925397152104212232,
         0.00013237734843935813326},
        {4.0, 0.00028105680231488213835, 0.000334073426132800051, 0.000058925397194688725149,
         0.00013237735073807581392},
    };
    for (const auto& row : rows) {
        CAPTURE(row[0]);
        emi::QuadratureSettings q;
        q.s0 = q.s1 = row[0];
        q.rel_tol = 1e-12;
        const auto si = emi::split_integrals(table_model(), kOmega, emi::kMu0, {2.0}, {2.0}, q);
        CHECK(rel_diff(si.g0[0], Complex(row[1], row[2])) < 1e-11);
        CHECK(rel_diff(si.g1[0], Complex(row[3], row[4])) < 1e-11);
    }
}

TEST_CASE("joint and separate truncation give the same integrals") {
    emi::QuadratureSettings joint;
    emi::QuadratureSettings apart;
    apart.s1 = 3.0 + 1e-13;
    joint.rel_tol = apart.rel_tol = 1e-12;
    const auto a = emi::split_integrals(table_model(), kOmega, emi::kMu0, {2, 4, 6, 8}, {2, 4, 6, 8}, joint);
    const auto b = emi::split_integrals(table_model(), kOmega, emi::kMu0, {2, 4, 6, 8}, {2, 4, 6, 8}, apart);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(rel_diff(a.g0[i], b.g0[i]) < 1e-10);
        CHECK(rel_diff(a.g1[i], b.g1[i]) < 1e-10);
    }
}

TEST_CASE("split fields reduce to the half-space in a homogeneous earth") {
    emi::InstrumentConfig inst;
    for (std::size_t n : {2u, 3u}) {
        const LayeredModel m(std::vector<double>(n, 0.04), std::vector<double>(n - 1, 1.5));
        const auto resp = emi::split_fields(m, inst, {});
        for (const auto& e : resp.entries) {
            const auto hs = emi::halfspace_fields(0.04, inst.omega(), 1.0, e.r);
            CHECK(rel_diff(e.value, e.geometry == emi::Geometry::hcp ? hs.hz : hs.hrho) < 1e-12);
        }
    }
}

TEST_CASE("split field response layout and single-entry access") {
    emi::InstrumentConfig inst;
    const LayeredModel m = emi::preset_model("model1");
    const auto resp = emi::split_fields(m, inst, {});
    REQUIRE(resp.entries.size() == 8);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(resp.entries[i].geometry == emi::Geometry::hcp);
        CHECK(resp.entries[4 + i].geometry == emi::Geometry::prp);
        CHECK(resp.entries[i].r == inst.offsets_hcp[i]);
    }
    const auto one = emi::split_field(m, inst, {}, emi::Geometry::prp, 6.0);
    CHECK(rel_diff(one.value, resp.entries[6].value) < 1e-9);
    CHECK(resp.imag_parts()[6] == resp.entries[6].value.imag());
}

TEST_CASE("batch evaluation matches sequential evaluation") {
    emi::InstrumentConfig inst;
    std::vector<LayeredModel> models;
    for (const auto& n : emi::preset_names()) models.push_back(emi::preset_model(n));
    const auto batch = emi::split_fields_batch(models, inst, {}, 3);
    for (std::size_t k = 0; k < models.size(); ++k) {
        const auto seq = emi::split_fields(models[k], inst, {});
        for (std::size_t i = 0; i < seq.entries.size(); ++i) CHECK(batch[k].entries[i].value == seq.entries[i].value);
    }
}

TEST_CASE("quadrature failure surfaces as QuadratureError") {
    emi::QuadratureSettings q;
    q.s0 = q.s1 = 60.0;
    q.rel_tol = 1e-14;
    q.abs_tol = 0.0;
    q.max_subdivisions = 1;
    emi::InstrumentConfig inst;
    CHECK_THROWS_AS(emi::split_fields(table_model(), inst, q), emi::QuadratureError);
}

TEST_CASE("tail bound decays with the truncation point") {
    const LayeredModel m = table_model();
    double prev = emi::tail_bound(m, kOmega, 0.5, 2.0);
    CHECK(prev > 0.0);
    for (double s = 1.0; s <= 8.0; s += 0.5) {
        const double t = emi::tail_bound(m, kOmega, s, 2.0);
        CHECK(t < prev);
        prev = t;
    }
    CHECK(emi::tail_bound(LayeredModel({0.1, 0.1}, {1.0}), kOmega, 2.0, 2.0) == 0.0);
}

TEST_CASE("digital filter agrees with the half-space closed form") {
    const auto table = emi::load_filter(emi::asset_dir(), emi::kDefaultFilter);
    CHECK(table.j0.size() == 201);
    emi::InstrumentConfig inst;
    const auto resp = emi::filter_fields(LayeredModel({0.05}, {}), inst, table);
    for (const auto& e : resp.entries) {
        const auto hs = emi::halfspace_fields(0.05, inst.omega(), 1.0, e.r);
        CAPTURE(e.r);
        CHECK(rel_diff(e.value, e.geometry == emi::Geometry::hcp ? hs.hz : hs.hrho) < 1e-8);
    }
}

TEST_CASE("digital filter and split quadrature agree on layered models") {
    const auto table = emi::load_filter(emi::asset_dir(), emi::kDefaultFilter);
    emi::InstrumentConfig inst;
    emi::QuadratureSettings q;
    q.rel_tol = 1e-12;
    for (const char* name : {"model3", "model4"}) {
        const LayeredModel m = emi::preset_model(name);
        const auto a = emi::split_fields(m, inst, q);
        const auto b = emi::filter_fields(m, inst, table);
        for (std::size_t i = 0; i < a.entries.size(); ++i) CHECK(rel_diff(b.entries[i].value, a.entries[i].value) < 1e-6);
    }
}

TEST_CASE("filter assets are validated") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "emi_filter_test";
    fs::create_directories(dir / "filters");
    CHECK_THROWS_WITH_AS(emi::load_filter(dir.string(), "missing"),
                         doctest::Contains((dir / "filters" / "missing.j0.txt").string().c_str()),
                         emi::ValidationError);
    // flip one weight: the checksum must catch it
    const std::string src = emi::asset_dir() + "/filters/" + emi::kDefaultFilter;
    for (const char* ext : {".j0.txt", ".j1.txt"}) fs::copy_file(src + ext, (dir / "filters" / (std::string("bad") + ext)).string(), fs::copy_options::overwrite_existing);
    const fs::path j0 = dir / "filters" / "bad.j0.txt";
    std::ifstream in(j0);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    in.close();
    const auto pos = text.find('\n') + 1;
    text[pos + 3] = text[pos + 3] == '1' ? '2' : '1';
    std::ofstream(j0) << text;
    CHECK_THROWS_AS(emi::load_filter(dir.string(), "bad"), emi::ValidationError);
    CHECK_THROWS_AS(emi::parse_filter_column("# hankel-filter J0 2 0.1 1.0\n1.0\n", "inline"), emi::ValidationError);
    fs::remove_all(dir);
}
