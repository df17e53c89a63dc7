#include <atomic>
#include <cstdlib>
#include <string>

#include "emi/error.hpp"
#include "emi/kernels.hpp"

namespace emi::kernels {

namespace {

Isa detect() noexcept {
    const char* env = std::getenv("EMI_SIMD");
    if (env != nullptr && std::string(env) == "scalar") return Isa::scalar;
    return avx2_available() ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& current() {
    static std::atomic<Isa> isa{detect()};
    return isa;
}

}  // namespace

Stack make_stack(const LayeredModel& model, double omega, double mu) {
    Stack s;
    s.a.reserve(model.layers());
    for (double sigma : model.sigma()) s.a.push_back(omega * mu * sigma);
    s.h = model.h();
    return s;
}

bool avx2_available() noexcept {
#if defined(EMI_HAVE_AVX2)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Isa active_isa() noexcept { return current().load(std::memory_order_relaxed); }

void set_isa(Isa isa) {
    if (isa == Isa::avx2 && !avx2_available()) {
        throw ValidationError("AVX2 kernels are not available on this machine or build");
    }
    current().store(isa, std::memory_order_relaxed);
}

const char* isa_name(Isa isa) noexcept { return isa == Isa::avx2 ? "avx2" : "scalar"; }

void reflection_diff(const Stack& stack, const double* lambda, std::size_t n, double* re, double* im) {
#if defined(EMI_HAVE_AVX2)
    if (active_isa() == Isa::avx2) return avx2::reflection_diff(stack, lambda, n, re, im);
#endif
    scalar::reflection_diff(stack, lambda, n, re, im);
}

void bessel_j01(const double* x, std::size_t n, double* j0, double* j1) {
#if defined(EMI_HAVE_AVX2)
    if (active_isa() == Isa::avx2) return avx2::bessel_j01(x, n, j0, j1);
#endif
    scalar::bessel_j01(x, n, j0, j1);
}

}  // namespace emi::kernels
