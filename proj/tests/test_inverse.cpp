#include <doctest.h>

#include <cmath>

#include "emi/error.hpp"
#include "emi/inverse.hpp"
#include "emi/petro.hpp"
#include "support.hpp"

namespace {

double norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace

TEST_CASE("parameter packing round-trips") {
    const auto m = emi::preset_model("model2");
    const auto p = emi::pack_parameters(m);
    REQUIRE(p.size() == 5);
    const auto back = emi::unpack_parameters(p);
    CHECK(back.sigma() == m.sigma());
    CHECK(back.h() == m.h());
    CHECK_THROWS_AS(emi::unpack_parameters({0.1, 0.2}), emi::ValidationError);
}

TEST_CASE("bounds give a box, a geometric midpoint and strict parsing") {
    emi::Bounds b;
    const auto box = b.box(3);
    CHECK(box.lo.size() == 5);
    const auto mid = b.midpoint(2);
    CHECK(mid[0] == doctest::Approx(std::sqrt(3e-3)));
    CHECK(mid[2] == doctest::Approx(std::sqrt(0.4)));
    CHECK(b.contains(mid));
    CHECK_FALSE(b.contains({2.0, 0.1, 1.0}));
    const auto parsed = emi::parse_bounds_json(R"({"sigma_hi": 2.0, "h_lo": 0.2})");
    CHECK(parsed.sigma_hi == 2.0);
    CHECK(parsed.h_lo == 0.2);
    CHECK(parsed.sigma_lo == b.sigma_lo);
    CHECK_THROWS_AS(emi::parse_bounds_json(R"({"depth": 1})"), emi::ValidationError);
    CHECK_THROWS_AS(emi::parse_bounds_json(R"({"sigma_lo": 2, "sigma_hi": 1})"), emi::ValidationError);
}

TEST_CASE("solver names parse and print") {
    for (auto m : {emi::SolverMethod::bfgs_two_stage, emi::SolverMethod::bfgs_direct, emi::SolverMethod::sa}) {
        CHECK(emi::parse_solver(emi::solver_name(m)) == m);
    }
    CHECK_THROWS_AS(emi::parse_solver("newton"), emi::ValidationError);
}

TEST_CASE("objective vanishes at the truth and equals the data energy for zero data") {
    emi::SolverSettings s;
    emi::InstrumentConfig inst;
    const auto p = emi::pack_parameters(emi::preset_model("model1"));
    const auto d = emi::synth_observations(p, inst, 0.0, 1, s.quad);
    CHECK(emi::objective(p, d, inst, emi::Evaluator::full, s.quad) == 0.0);

    emi::ObservationVector zero = d;
    for (auto& v : zero.dz) v = 0.0;
    for (auto& v : zero.drho) v = 0.0;
    const double h = norm(emi::forward_vector(p, inst, emi::Evaluator::full, s.quad));
    CHECK(rel_diff(emi::objective(p, zero, inst, emi::Evaluator::full, s.quad), h * h) < 1e-14);
}

TEST_CASE("synthetic noise meets the requested ratio against the noisy data") {
    emi::SolverSettings s;
    emi::InstrumentConfig inst;
    const auto p = emi::pack_parameters(emi::preset_model("model3"));
    const auto clean = emi::synth_observations(p, inst, 0.0, 1, s.quad).values();
    for (double eps : {0.001, 0.005, 0.05}) {
        const auto noisy = emi::synth_observations(p, inst, eps, 42, s.quad).values();
        std::vector<double> eta(noisy.size());
        for (std::size_t i = 0; i < eta.size(); ++i) eta[i] = noisy[i] - clean[i];
        CHECK(std::abs(norm(eta) / norm(noisy) - eps) < 1e-12);
    }
    const auto a = emi::synth_observations(p, inst, 0.005, 42, s.quad).values();
    const auto b = emi::synth_observations(p, inst, 0.005, 42, s.quad).values();
    const auto c = emi::synth_observations(p, inst, 0.005, 43, s.quad).values();
    CHECK(a == b);
    CHECK(a != c);
}

TEST_CASE("seed derivation is deterministic and separates streams") {
    CHECK(emi::derive_seed(1, 2, 3, 4) == emi::derive_seed(1, 2, 3, 4));
    CHECK(emi::derive_seed(1, 2, 3, 4) != emi::derive_seed(1, 2, 4, 3));
    CHECK(emi::derive_seed(1, 0) != emi::derive_seed(2, 0));
    CHECK(emi::splitmix64(0) == 0xe220a8397b1dcdafULL);
}

TEST_CASE("two-stage inversion improves on its surrogate stage") {
    emi::SolverSettings s;
    emi::InstrumentConfig inst;
    emi::Bounds bounds;
    const auto p_star = emi::pack_parameters(emi::preset_model("model1"));
    const auto d = emi::synth_observations(p_star, inst, 0.0, 1, s.quad);
    const auto p0 = bounds.midpoint(3);
    const auto r = emi::invert_two_stage(d, inst, bounds, s, p0);
    REQUIRE(r.stages.size() == 2);
    CHECK(r.stages[0].name == "surrogate");
    CHECK(r.stages[1].name == "full");
    const double f0 = emi::objective(p0, d, inst, emi::Evaluator::surrogate, s.quad);
    // recorded run: 2.754e-10 -> 3.420e-14 (8.05e3x); 3.420e-14 is the surrogate's global
    // misfit floor against full-model data, reached from 40 random starts as well
    CHECK(f0 / r.stages[0].objective > 8.0e3);
    CHECK(r.stages[0].objective == doctest::Approx(3.420e-14).epsilon(2e-3));
    const double f_bar = emi::objective(r.stages[0].p, d, inst, emi::Evaluator::full, s.quad);
    CHECK(r.objective <= f_bar);
    CHECK(bounds.contains(r.p_hat));
    CHECK(r.full_forward_evaluations == r.stages[1].evaluations);
    CHECK(r.forward_evaluations == r.stages[0].evaluations + r.stages[1].evaluations);
}

TEST_CASE("two-stage inversion needs fewer full solves than direct inversion") {
    emi::SolverSettings s;
    emi::InstrumentConfig inst;
    emi::Bounds bounds;
    const auto p_star = emi::pack_parameters(emi::preset_model("model2"));
    const auto d = emi::synth_observations(p_star, inst, 0.0, 1, s.quad);
    const auto two = emi::invert_two_stage(d, inst, bounds, s, bounds.midpoint(3));
    const auto direct = emi::invert_direct(d, inst, bounds, s, bounds.midpoint(3));
    CHECK(two.full_forward_evaluations < direct.full_forward_evaluations);
    CHECK(direct.full_forward_evaluations == direct.forward_evaluations);
}

TEST_CASE("homogeneous data is fitted to negligible misfit") {
    emi::SolverSettings s;
    emi::InstrumentConfig inst;
    emi::Bounds bounds;
    const std::vector<double> p_star{0.05, 0.05, 1.0};
    const auto d = emi::synth_observations(p_star, inst, 0.0, 1, s.quad);
    const auto r = emi::invert(d, inst, bounds, s, 2);
    const double dd = norm(d.values());
    CHECK(r.objective / (dd * dd) < 1e-10);
    CHECK(rel_diff(r.p_hat[0], 0.05) < 1e-3);
}

TEST_CASE("inversion is reproducible") {
    emi::SolverSettings s;
    emi::InstrumentConfig inst;
    emi::Bounds bounds;
    const auto p_star = emi::pack_parameters(emi::preset_model("model4"));
    const auto d = emi::synth_observations(p_star, inst, 0.001, 9, s.quad);
    const auto a = emi::invert(d, inst, bounds, s, 3);
    const auto b = emi::invert(d, inst, bounds, s, 3);
    CHECK(a.p_hat == b.p_hat);
    CHECK(a.objective == b.objective);

    s.method = emi::SolverMethod::sa;
    s.sa.moves_per_temperature = 40;
    s.sa.max_temperatures = 8;
    const auto c = emi::invert(d, inst, bounds, s, 3);
    const auto e = emi::invert(d, inst, bounds, s, 3);
    CHECK(c.p_hat == e.p_hat);
    CHECK(c.p0.empty());
    CHECK(bounds.contains(c.p_hat));
}

TEST_CASE("inversion inputs are validated") {
    emi::SolverSettings s;
    emi::InstrumentConfig inst;
    emi::Bounds bounds;
    const auto d = emi::synth_observations(emi::pack_parameters(emi::preset_model("model1")), inst, 0.0, 1, s.quad);
    CHECK_THROWS_AS(emi::invert(d, inst, bounds, s, 4), emi::ValidationError);
    CHECK_THROWS_AS(emi::invert(d, inst, bounds, s, 3, {5.0, 0.1, 0.1, 1.0, 1.0}), emi::ValidationError);
    emi::ObservationVector few;
    few.r_hcp = {2.0};
    few.dz = {1e-6};
    CHECK_THROWS_AS(emi::invert(few, inst, bounds, s, 3), emi::ValidationError);
}

TEST_CASE("error study cells follow the documented order") {
    emi::StudyConfig cfg;
    cfg.models = {"model1", "model2"};
    cfg.nsr = {0.0, 0.005};
    cfg.trials = 2;
    cfg.methods = {emi::SolverMethod::bfgs_two_stage};
    cfg.threads = 2;
    const auto a = emi::error_study(cfg);
    REQUIRE(a.trials.size() == 8);
    REQUIRE(a.cells.size() == 4);
    CHECK(a.cells[0].model == "model1");
    CHECK(a.cells[0].nsr == 0.0);
    CHECK(a.cells[1].model == "model2");
    CHECK(a.cells[2].nsr == 0.005);
    CHECK(a.trials[0].model == "model1");
    CHECK(a.trials[1].trial == 1);
    CHECK(a.trials[2].nsr == 0.005);
    cfg.threads = 1;
    const auto b = emi::error_study(cfg);
    for (std::size_t i = 0; i < a.trials.size(); ++i) CHECK(a.trials[i].result.p_hat == b.trials[i].result.p_hat);
    const auto g = emi::grand_average(a, 0.0, emi::SolverMethod::bfgs_two_stage);
    CHECK(g.sigma_pct >= 0.0);
    CHECK_THROWS_AS(emi::grand_average(a, 0.001, emi::SolverMethod::bfgs_two_stage), emi::ValidationError);
}
