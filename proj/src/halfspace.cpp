#include <cmath>
#include <numbers>

#include "emi/error.hpp"
#include "emi/forward.hpp"
#include "emi/specfun.hpp"

namespace emi {

namespace {

// B(x) = 9 - (9 + 9x + 4x^2 + x^3) e^{-x}. Near zero B ~ x^2/2 and the direct form
// cancels, so sum c_n x^n with c_n = -(-1)^n P(n)/n!, P(n) = 9 - 9n + 4n(n-1) - n(n-1)(n-2).
Complex hz_factor(Complex x) {
    if (std::abs(x) >= 1.0) return 9.0 - (9.0 + x * (9.0 + x * (4.0 + x))) * std::exp(-x);
    Complex sum = 0.0;
    Complex xn = x;  // x^n
    double inv_fact = 1.0;
    for (int n = 1; n <= 30; ++n) {
        inv_fact /= n;
        const double dn = n;
        const double p = 9.0 - 9.0 * dn + 4.0 * dn * (dn - 1.0) - dn * (dn - 1.0) * (dn - 2.0);
        const double sign = (n % 2 == 0) ? -1.0 : 1.0;
        sum += sign * p * inv_fact * xn;
        xn *= x;
    }
    return sum;
}

}  // namespace

HalfspaceFields halfspace_fields_k(Complex k1, double moment, double r) {
    if (!(r > 0.0) || !std::isfinite(r)) throw ValidationError("offset must be > 0");
    if (!(moment > 0.0)) throw ValidationError("magnetic moment must be > 0");
    const Complex x = Complex(0.0, 1.0) * k1 * r;  // i k r
    if (x.real() < 0.0) throw ValidationError("wavenumber branch gives a growing e^{-ikr}");
    if (std::abs(x) > 1e4) throw ValidationError("|k r| too large for the closed-form half-space fields");
    if (k1 == Complex(0.0)) throw ValidationError("zero wavenumber");

    const double pi = std::numbers::pi;
    const Complex k2 = k1 * k1;
    const double r2 = r * r;
    HalfspaceFields f;
    f.hz = moment / (2.0 * pi * k2 * r2 * r2 * r) * hz_factor(x);
    const Complex z = 0.5 * x;
    const Complex ik = specfun::bessel_ik_product(1, z) - specfun::bessel_ik_product(2, z);
    f.hrho = -(moment * k2 / (4.0 * pi * r)) * ik;
    return f;
}

HalfspaceFields halfspace_fields(double sigma1, double omega, double moment, double r, double mu) {
    if (!(sigma1 > 0.0) || !std::isfinite(sigma1)) throw ValidationError("sigma1 must be > 0");
    if (!(omega > 0.0)) throw ValidationError("omega must be > 0");
    const Complex k1 = std::sqrt(Complex(0.0, -omega * mu * sigma1));
    return halfspace_fields_k(k1, moment, r);
}

}  // namespace emi
