#include <cmath>

#include "emi/kernels.hpp"
#include "emi/specfun.hpp"

namespace emi::kernels::scalar {

void reflection_diff(const Stack& stack, const double* lambda, std::size_t n, double* re, double* im) {
    const std::size_t layers = stack.a.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double lam = lambda[i];
        const double lam2 = lam * lam;
        // walk up from the bottom: r holds R_{j+1}, below holds u_{j+1}
        Complex below = std::sqrt(Complex(lam2, stack.a[layers - 1]));
        Complex r = 0.0;
        for (std::size_t j = layers - 1; j >= 1; --j) {
            const Complex u = std::sqrt(Complex(lam2, stack.a[j - 1]));
            // (u - below) (u + below) = i (a_{j-1} - a_j) exactly
            const Complex s = u + below;
            const Complex psi = Complex(0.0, stack.a[j - 1] - stack.a[j]) / (s * s);
            const double decay = 2.0 * stack.h[j - 1] * u.real();
            const Complex e = decay > 700.0 ? Complex(0.0) : std::exp(-2.0 * stack.h[j - 1] * u);
            r = (r + psi) / (r * psi + 1.0) * e;
            below = u;
        }
        const Complex u1 = below;
        const Complex k1sq(0.0, -stack.a[0]);
        const Complex sum = lam + u1;
        const Complex d = 4.0 * r * u1 * lam / (r * k1sq + sum * sum) * lam2;
        re[i] = d.real();
        im[i] = d.imag();
    }
}

void bessel_j01(const double* x, std::size_t n, double* j0, double* j1) {
    for (std::size_t i = 0; i < n; ++i) {
        j0[i] = specfun::bessel_j0(x[i]);
        j1[i] = specfun::bessel_j1(x[i]);
    }
}

}  // namespace emi::kernels::scalar
