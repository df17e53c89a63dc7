#pragma once

#include <string>
#include <vector>

#include "emi/model.hpp"

namespace emi {

enum class Geometry { hcp, prp };
enum class Method { quadrature, filter, approx };

const char* geometry_name(Geometry g) noexcept;
const char* method_name(Method m) noexcept;

struct QuadratureSettings {
    double s0 = 3.0;  // truncation of the g_0 integral (1/m)
    double s1 = 3.0;  // truncation of the g_1 integral (1/m)
    double rel_tol = 1e-8;
    double abs_tol = 1e-16;
    int max_subdivisions = 500;

    void validate() const;
};

struct FieldEntry {
    double r = 0.0;
    Geometry geometry = Geometry::hcp;
    Complex value;               // H_z for HCP, H_rho for PRP (A/m)
    double tail_estimate = 0.0;  // >= 0, A/m; zero where the method has no tail
};

// HCP entries in offset order, then PRP entries.
struct FieldResponse {
    Method method = Method::quadrature;
    std::vector<FieldEntry> entries;

    std::vector<double> imag_parts() const;
};

struct HalfspaceFields {
    Complex hz;
    Complex hrho;
};

HalfspaceFields halfspace_fields(double sigma1, double omega, double moment, double r, double mu = kMu0);
// Same, given the wavenumber directly. Rejects k whose e^{-ikr} would grow.
HalfspaceFields halfspace_fields_k(Complex k1, double moment, double r);

// Truncated integrals of g_0 (at the HCP offsets, upper limit s0) and g_1 (at the PRP
// offsets, upper limit s1). Throws QuadratureError if the tolerance is not reached.
struct SplitIntegrals {
    std::vector<Complex> g0;
    std::vector<Complex> g1;
    int evaluations = 0;
};

SplitIntegrals split_integrals(const LayeredModel& model, double omega, double mu,
                               const std::vector<double>& offsets_hcp, const std::vector<double>& offsets_prp,
                               const QuadratureSettings& settings);

FieldResponse split_fields(const LayeredModel& model, const InstrumentConfig& instrument,
                           const QuadratureSettings& settings);
FieldEntry split_field(const LayeredModel& model, const InstrumentConfig& instrument,
                       const QuadratureSettings& settings, Geometry geometry, double r);

// Estimate of |int_s^inf g_l| with the unresolved constant set to 1.
double tail_bound(const LayeredModel& model, double omega, double s, double r, double mu = kMu0);

// Evaluate many models concurrently; results in input order.
std::vector<FieldResponse> split_fields_batch(const std::vector<LayeredModel>& models,
                                               const InstrumentConfig& instrument,
                                               const QuadratureSettings& settings, unsigned threads = 0);

}  // namespace emi
