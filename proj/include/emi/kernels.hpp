#pragma once

#include <cstddef>
#include <vector>

#include "emi/model.hpp"

// Batch kernels for the quadrature hot path. Each routine has a scalar reference
// and, on x86-64, an AVX2/FMA variant; the active one is chosen once at startup
// (override with EMI_SIMD=scalar|avx2).
namespace emi::kernels {

struct Stack {
    std::vector<double> a;  // omega mu sigma_j, so u_j^2 = lambda^2 + i a_j
    std::vector<double> h;
};

Stack make_stack(const LayeredModel& model, double omega, double mu);

enum class Isa { scalar, avx2 };

bool avx2_available() noexcept;
Isa active_isa() noexcept;
// For tests and benchmarks. Throws ValidationError if the ISA is not available.
void set_isa(Isa isa);
const char* isa_name(Isa isa) noexcept;

// out = (R_0 - Psi_1) lambda^2 for each lambda, split into real and imaginary parts.
void reflection_diff(const Stack& stack, const double* lambda, std::size_t n, double* re, double* im);

// J_0(x), J_1(x) for x >= 0.
void bessel_j01(const double* x, std::size_t n, double* j0, double* j1);

namespace scalar {
void reflection_diff(const Stack& stack, const double* lambda, std::size_t n, double* re, double* im);
void bessel_j01(const double* x, std::size_t n, double* j0, double* j1);
}  // namespace scalar

#if defined(EMI_HAVE_AVX2)
namespace avx2 {
void reflection_diff(const Stack& stack, const double* lambda, std::size_t n, double* re, double* im);
void bessel_j01(const double* x, std::size_t n, double* j0, double* j1);
}  // namespace avx2
#endif

}  // namespace emi::kernels
