#include <doctest.h>

#include "emi/error.hpp"
#include "emi/inverse.hpp"
#include "emi/io.hpp"
#include "emi/petro.hpp"

TEST_CASE("numbers print in shortest round-trip form") {
    CHECK(emi::io::fmt(0.1) == "0.1");
    CHECK(emi::io::fmt(2.0) == "2");
    const double v = 3.7257757940707526e-05;
    CHECK(std::stod(emi::io::fmt(v)) == v);
}

TEST_CASE("observation CSV round-trips") {
    emi::InstrumentConfig inst;
    emi::SolverSettings s;
    const auto d = emi::synth_observations(emi::pack_parameters(emi::preset_model("model1")), inst, 0.001, 3, s.quad);
    const auto back = emi::io::parse_observation_csv(emi::io::observation_table(d).csv());
    CHECK(back.r_hcp == d.r_hcp);
    CHECK(back.r_prp == d.r_prp);
    CHECK(back.dz == d.dz);
    CHECK(back.drho == d.drho);
}

TEST_CASE("observation CSV rejects missing units and bad rows") {
    CHECK_THROWS_AS(emi::io::parse_observation_csv("r,geometry,im_value\n2,hcp,1e-6\n"), emi::ValidationError);
    CHECK_THROWS_AS(emi::io::parse_observation_csv("r,geometry,im_value\nm,-,A/m\n2,vcp,1e-6\n"), emi::ValidationError);
    CHECK_THROWS_AS(emi::io::parse_observation_csv("r,geometry,im_value\nm,-,A/m\n2,hcp,x\n"), emi::ValidationError);
    CHECK_THROWS_AS(emi::io::parse_observation_csv("offset,geometry,im_value\n"), emi::ValidationError);
    const auto d = emi::io::parse_observation_csv("# note\nr,geometry,im_value\nm,-,A/m\n4,prp,2.5e-6\n");
    CHECK(d.r_prp == std::vector<double>{4.0});
}

TEST_CASE("forward table carries units and metadata") {
    emi::InstrumentConfig inst;
    const auto t = emi::io::forward_table(emi::split_fields(emi::preset_model("model1"), inst, {}));
    const std::string csv = t.csv();
    CHECK(csv.rfind("# method: quad\n", 0) == 0);
    CHECK(csv.find("r,geometry,re_value,im_value,tail_estimate\nm,-,A/m,A/m,A/m\n") != std::string::npos);
    CHECK(t.rows.size() == 8);
}
