#pragma once

#include <numbers>
#include <string>
#include <vector>

#include "emi/specfun.hpp"

namespace emi {

inline constexpr double kMu0 = 4.0e-7 * std::numbers::pi;

// N layers; sigma in S/m, h in m. The deepest layer is a half-space and has no thickness.
class LayeredModel {
public:
    LayeredModel(std::vector<double> sigma, std::vector<double> h);

    std::size_t layers() const noexcept { return sigma_.size(); }
    const std::vector<double>& sigma() const noexcept { return sigma_; }
    const std::vector<double>& h() const noexcept { return h_; }

private:
    std::vector<double> sigma_;
    std::vector<double> h_;
};

struct InstrumentConfig {
    double frequency = 1.0e4;  // Hz
    double moment = 1.0;       // A m^2
    double mu = kMu0;          // H/m
    std::vector<double> offsets_hcp{2.0, 4.0, 6.0, 8.0};
    std::vector<double> offsets_prp{2.0, 4.0, 6.0, 8.0};

    double omega() const noexcept { return 2.0 * std::numbers::pi * frequency; }
    void validate() const;
};

struct KernelPoint {
    double lambda = 0.0;
    std::vector<Complex> u;    // u_0 = lambda, u_1..u_N
    std::vector<Complex> psi;  // psi_1..psi_N stored at 1..N; psi[0] unused
    std::vector<Complex> r;    // R_0..R_N
    Complex r0() const { return r.front(); }
};

// k_j = sqrt(-i omega mu sigma_j), principal branch.
std::vector<Complex> wavenumbers(const LayeredModel& model, double omega, double mu = kMu0);

// Full downward-to-upward recursion, keeping every intermediate.
KernelPoint kernel_point(const LayeredModel& model, double omega, double lambda, double mu = kMu0);

Complex reflection_r0(const LayeredModel& model, double omega, double lambda, double mu = kMu0);

// R_0 - Psi_1 via 4 R_1 u_1 lambda / (R_1 k_1^2 + (lambda + u_1)^2).
Complex r0_minus_psi1(const LayeredModel& model, double omega, double lambda, double mu = kMu0);
// Same quantity by subtracting the two recursion outputs. Test use only.
Complex r0_minus_psi1_direct(const LayeredModel& model, double omega, double lambda, double mu = kMu0);

Complex integrand_g(const LayeredModel& model, double omega, double lambda, int order, double r,
                    double mu = kMu0);
Complex integrand_q(const LayeredModel& model, double omega, double lambda, int order, double r,
                    double mu = kMu0);

LayeredModel parse_model_json(const std::string& text);
LayeredModel load_model_json(const std::string& path);
std::string model_to_json(const LayeredModel& model);

}  // namespace emi
