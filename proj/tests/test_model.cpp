#include <doctest.h>

#include "emi/error.hpp"
#include "emi/model.hpp"
#include "support.hpp"

using emi::Complex;
using emi::LayeredModel;

namespace {

const double kOmega = 2.0 * std::numbers::pi * 1e4;

LayeredModel table_model() { return LayeredModel({0.333, 0.020, 0.100}, {2.5, 0.5}); }

}  // namespace

TEST_CASE("layered model validation") {
    CHECK_NOTHROW(LayeredModel({0.1}, {}));
    CHECK_THROWS_AS(LayeredModel({}, {}), emi::ValidationError);
    CHECK_THROWS_AS(LayeredModel({0.1, 0.2}, {}), emi::ValidationError);
    CHECK_THROWS_AS(LayeredModel({0.1, -0.2}, {1.0}), emi::ValidationError);
    CHECK_THROWS_AS(LayeredModel({0.1, 0.2}, {0.0}), emi::ValidationError);
    CHECK_THROWS_AS(LayeredModel({0.1, NAN}, {1.0}), emi::ValidationError);
}

TEST_CASE("instrument validation") {
    emi::InstrumentConfig inst;
    CHECK_NOTHROW(inst.validate());
    inst.offsets_hcp = {2.0, 2.0};
    CHECK_THROWS_AS(inst.validate(), emi::ValidationError);
    inst.offsets_hcp = {-1.0};
    CHECK_THROWS_AS(inst.validate(), emi::ValidationError);
    inst.offsets_hcp = {2.0};
    inst.frequency = 0.0;
    CHECK_THROWS_AS(inst.validate(), emi::ValidationError);
}

TEST_CASE("wavenumber of the top layer") {
    // mpmath: sqrt(-i omega mu0 0.333)
    const auto k = emi::wavenumbers(table_model(), kOmega);
    CHECK(rel_diff(k[0], Complex(0.11465737247229689192, -0.11465737247229689192)) < 1e-14);
}

TEST_CASE("reflection term against a 40-digit recursion") {
    const LayeredModel m = table_model();
    CHECK(rel_diff(emi::reflection_r0(m, kOmega, 1.0), Complex(-0.000083354217729707254788, -0.0065341641748572782563)) <
          1e-12);
    CHECK(rel_diff(emi::r0_minus_psi1(m, kOmega, 1.0), Complex(3.0324313914121144961e-6, 0.000037572859693600956502)) <
          1e-12);
    CHECK(rel_diff(emi::r0_minus_psi1(m, kOmega, 0.05), Complex(0.1077709957766780509, -0.097451361567391255702)) <
          1e-12);
}

TEST_CASE("difference form agrees with direct subtraction where no cancellation occurs") {
    const LayeredModel m = table_model();
    for (double lam : {0.01, 0.1, 0.5, 1.0, 2.0}) {
        CAPTURE(lam);
        CHECK(rel_diff(emi::r0_minus_psi1(m, kOmega, lam), emi::r0_minus_psi1_direct(m, kOmega, lam)) < 1e-9);
    }
}

TEST_CASE("difference form is exactly zero for a homogeneous stack") {
    const LayeredModel m({0.05, 0.05, 0.05}, {1.0, 2.0});
    for (double lam : {0.0, 1e-3, 0.3, 4.0, 50.0}) {
        CAPTURE(lam);
        const Complex d = emi::r0_minus_psi1(m, kOmega, lam);
        CHECK(std::abs(d) <= 1e-300);
        CHECK(std::abs(emi::integrand_g(m, kOmega, lam, 0, 2.0)) <= 1e-300);
        CHECK(std::abs(emi::integrand_g(m, kOmega, lam, 1, 2.0)) <= 1e-300);
    }
}

TEST_CASE("deep damping keeps the recursion finite") {
    const LayeredModel m({0.1, 1.0, 0.01}, {500.0, 500.0});
    const Complex d = emi::r0_minus_psi1(m, kOmega, 10.0);
    CHECK(std::isfinite(d.real()));
    CHECK(std::isfinite(d.imag()));
    CHECK(std::abs(d) == 0.0);
}

TEST_CASE("model JSON round trip and strictness") {
    const LayeredModel m = emi::parse_model_json(R"({"name": "x", "sigma_mS_per_m": [333, 20, 100], "h_m": [2.5, 0.5]})");
    CHECK(m.layers() == 3);
    CHECK(m.sigma()[0] == doctest::Approx(0.333));
    CHECK(m.h()[1] == 0.5);
    const LayeredModel back = emi::parse_model_json(emi::model_to_json(m));
    for (std::size_t i = 0; i < m.layers(); ++i) CHECK(back.sigma()[i] == doctest::Approx(m.sigma()[i]).epsilon(1e-15));
    CHECK(back.h() == m.h());
    CHECK_THROWS_AS(emi::parse_model_json(R"({"sigma": [1]})"), emi::ValidationError);
    CHECK_THROWS_AS(emi::parse_model_json("{"), emi::ValidationError);
    CHECK_THROWS_AS(emi::load_model_json("/nonexistent/model.json"), emi::ValidationError);
}
