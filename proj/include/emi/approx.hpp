#pragma once

#include <vector>

#include "emi/forward.hpp"

namespace emi {

// Imaginary parts of H_z (lz) and H_rho (lrho), A/m.
struct ApproxValue {
    double lz = 0.0;
    double lrho = 0.0;
};

ApproxValue approx_n2(double sigma1, double sigma2, double h1, double omega, double mu, double moment, double r);
ApproxValue approx_n3(double sigma1, double sigma2, double sigma3, double h1, double h2, double omega, double mu,
                      double moment, double r);

// Dispatches on the model's layer count (2 or 3); the response holds Im parts as purely
// imaginary values and zero tail estimates.
FieldResponse approx_fields(const LayeredModel& model, const InstrumentConfig& instrument);

}  // namespace emi
