#pragma once

#include <complex>

namespace emi {

using Complex = std::complex<double>;

namespace specfun {

/// Bessel function of the first kind, order 0 or 1, for real x >= 0.
/// Throws ValidationError for negative or non-finite x, or an unsupported order.
double bessel_j(int order, double x);

double bessel_j0(double x);
double bessel_j1(double x);

struct BesselIK {
    Complex i_val;
    Complex k_val;
};

/// Modified Bessel functions I_n(z), K_n(z) for n in {1, 2}, principal branch.
///
/// Accurate where both values are representable. For large |z| the individual
/// values overflow/underflow; use bessel_ik_product, which works in scaled form.
/// z on the closed negative real axis (or z == 0) is rejected.
BesselIK bessel_ik(int order, Complex z);

/// I_n(z) * K_n(z), evaluated as (e^{-z} I_n) (e^{z} K_n) so that it stays O(1/z).
Complex bessel_ik_product(int order, Complex z);

}  // namespace specfun
}  // namespace emi
