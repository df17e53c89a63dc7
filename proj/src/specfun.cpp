#include "emi/specfun.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "bessel_coeffs.hpp"
#include "emi/error.hpp"

namespace emi::specfun {

namespace bc = emi::detail::bessel;

double bessel_j0(double x) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
        throw ValidationError("bessel_j0: argument must be finite and >= 0, got " + std::to_string(x));
    }
    if (x == 0.0) return 1.0;
    if (x <= 4.0) {
        const double y = x * x;
        const double r = bc::horner(bc::j0_p1, y) / bc::horner(bc::j0_q1, y);
        return (x + bc::j0_x1) * ((x - bc::j0_x11 / 256.0) - bc::j0_x12) * r;
    }
    if (x <= 8.0) {
        const double y = 1.0 - (x * x) / 64.0;
        const double r = bc::horner(bc::j0_p2, y) / bc::horner(bc::j0_q2, y);
        return (x + bc::j0_x2) * ((x - bc::j0_x21 / 256.0) - bc::j0_x22) * r;
    }
    const double y = 8.0 / x;
    const double y2 = y * y;
    const double rc = bc::horner(bc::j0_pc, y2) / bc::horner(bc::j0_qc, y2);
    const double rs = bc::horner(bc::j0_ps, y2) / bc::horner(bc::j0_qs, y2);
    const double factor = bc::one_div_root_pi / std::sqrt(x);
    const double sx = std::sin(x);
    const double cx = std::cos(x);
    return factor * (rc * (cx + sx) - y * rs * (sx - cx));
}

double bessel_j1(double x) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
        throw ValidationError("bessel_j1: argument must be finite and >= 0, got " + std::to_string(x));
    }
    if (x == 0.0) return 0.0;
    if (x <= 4.0) {
        const double y = x * x;
        const double r = bc::horner(bc::j1_p1, y) / bc::horner(bc::j1_q1, y);
        return x * (x + bc::j1_x1) * ((x - bc::j1_x11 / 256.0) - bc::j1_x12) * r;
    }
    if (x <= 8.0) {
        const double y = x * x;
        const double r = bc::horner(bc::j1_p2, y) / bc::horner(bc::j1_q2, y);
        return x * (x + bc::j1_x2) * ((x - bc::j1_x21 / 256.0) - bc::j1_x22) * r;
    }
    const double y = 8.0 / x;
    const double y2 = y * y;
    const double rc = bc::horner(bc::j1_pc, y2) / bc::horner(bc::j1_qc, y2);
    const double rs = bc::horner(bc::j1_ps, y2) / bc::horner(bc::j1_qs, y2);
    const double factor = bc::one_div_root_pi / std::sqrt(x);
    const double sx = std::sin(x);
    const double cx = std::cos(x);
    return factor * (rc * (sx - cx) + y * rs * (sx + cx));
}

double bessel_j(int order, double x) {
    switch (order) {
        case 0: return bessel_j0(x);
        case 1: return bessel_j1(x);
        default: throw ValidationError("bessel_j: order must be 0 or 1, got " + std::to_string(order));
    }
}

namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
constexpr double kEps = 1e-17;

// Beyond this modulus the Hankel expansions are used for both I and K.
constexpr double kAsymptoticModulus = 30.0;
// Below this modulus K comes from its ascending series.
constexpr double kKSeriesModulus = 2.0;

void check_order(int order) {
    if (order != 1 && order != 2) {
        throw ValidationError("bessel_ik: order must be 1 or 2, got " + std::to_string(order));
    }
}

void check_argument(Complex z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw ValidationError("bessel_ik: non-finite argument");
    }
    if (z.imag() == 0.0 && z.real() <= 0.0) {
        throw ValidationError("bessel_ik: argument on the branch cut or zero");
    }
}

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// I_n(z) = sum_k (z/2)^{n+2k} / (k! (n+k)!)
Complex i_series(int n, Complex z) {
    const Complex half = 0.5 * z;
    const Complex q = half * half;
    Complex term = std::pow(half, n) / factorial(n);
    Complex sum = term;
    for (int k = 1; k < 500; ++k) {
        term *= q / (static_cast<double>(k) * static_cast<double>(n + k));
        sum += term;
        if (std::abs(term) < kEps * std::abs(sum)) break;
    }
    return sum;
}

// K_n(z) for integer n >= 1 from the logarithmic ascending series.
Complex k_series(int n, Complex z, Complex i_n) {
    const Complex half = 0.5 * z;
    const Complex q = half * half;

    Complex finite = 0.0;
    Complex qk = 1.0;
    for (int k = 0; k < n; ++k) {
        finite += factorial(n - k - 1) / factorial(k) * qk;
        qk *= -q;
    }
    finite *= 0.5 * std::pow(half, -n);

    // psi(m+1) = -gamma + H_m
    auto psi1 = [](int m) {
        double h = 0.0;
        for (int i = 1; i <= m; ++i) h += 1.0 / i;
        return -kEulerGamma + h;
    };

    Complex term = 1.0 / factorial(n);
    Complex sum = (psi1(0) + psi1(n)) * term;
    for (int k = 1; k < 500; ++k) {
        term *= q / (static_cast<double>(k) * static_cast<double>(n + k));
        const Complex add = (psi1(k) + psi1(n + k)) * term;
        sum += add;
        if (std::abs(add) < kEps * std::abs(sum)) break;
    }
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    return finite - sign * std::log(half) * i_n + sign * 0.5 * std::pow(half, n) * sum;
}

// K_n(z) = int_0^inf exp(-z cosh t) cosh(n t) dt, Re z > 0, by the trapezoidal rule.
// The integrand is entire and decays double-exponentially, so the rule converges
// geometrically with a step tied to the distance of arg z from +-pi/2.
Complex k_integral(int n, Complex z) {
    const double margin = std::numbers::pi / 2.0 - std::abs(std::arg(z));
    const double step = std::min(0.1, margin / 8.0);
    const double re = z.real();
    // exp(-Re z cosh t) below 1e-320 relative to the t = 0 value
    const double t_max = std::acosh(std::max(1.0, 1.0 + 745.0 / re));
    Complex sum = 0.5 * std::exp(-z);
    const int count = static_cast<int>(std::ceil(t_max / step));
    for (int j = 1; j <= count; ++j) {
        const double t = j * step;
        sum += std::exp(-z * std::cosh(t)) * std::cosh(n * t);
    }
    return sum * step;
}

// Hankel-expansion partial sums S(+-) = sum_k (+-1)^k a_k(n) / z^k, truncated at the
// smallest term.
struct AsymptoticSums {
    Complex plus;
    Complex minus;
};

AsymptoticSums asymptotic_sums(int n, Complex z) {
    const double mu = 4.0 * n * n;
    Complex term = 1.0;
    AsymptoticSums s{1.0, 1.0};
    double last = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= (mu - odd * odd) / (8.0 * k * z);
        const double mag = std::abs(term);
        if (mag > last) break;
        s.plus += term;
        s.minus += (k % 2 == 0) ? term : -term;
        if (mag < kEps) break;
        last = mag;
    }
    return s;
}

// The exponentially small e^{-z} contribution to I_n; sign chosen per half plane.
Complex subdominant_factor(int n, Complex z) {
    const double parity = (n % 2 == 0) ? 1.0 : -1.0;
    const Complex i_unit{0.0, z.imag() >= 0.0 ? 1.0 : -1.0};
    return i_unit * parity;
}

}  // namespace

BesselIK bessel_ik(int order, Complex z) {
    check_order(order);
    check_argument(z);
    const double modulus = std::abs(z);

    if (modulus > kAsymptoticModulus) {
        if (z.real() <= 0.0) {
            throw ValidationError("bessel_ik: |z| > 30 requires Re z > 0");
        }
        const AsymptoticSums s = asymptotic_sums(order, z);
        const Complex root = std::sqrt(2.0 * std::numbers::pi * z);
        const Complex i_val =
            (std::exp(z) * s.minus + subdominant_factor(order, z) * std::exp(-z) * s.plus) / root;
        const Complex k_val = std::sqrt(std::numbers::pi / (2.0 * z)) * std::exp(-z) * s.plus;
        return {i_val, k_val};
    }

    const Complex i_val = i_series(order, z);
    Complex k_val;
    if (modulus <= kKSeriesModulus || z.real() <= 0.0) {
        if (z.real() <= 0.0 && modulus > 15.0) {
            throw ValidationError("bessel_ik: Re z <= 0 supported only for |z| <= 15");
        }
        k_val = k_series(order, z, i_val);
    } else {
        k_val = k_integral(order, z);
    }
    return {i_val, k_val};
}

Complex bessel_ik_product(int order, Complex z) {
    check_order(order);
    check_argument(z);
    if (std::abs(z) > kAsymptoticModulus && z.real() > 0.0) {
        // (e^{-z} I)(e^{z} K) = [S- + c e^{-2z} S+] S+ / (2z)
        const AsymptoticSums s = asymptotic_sums(order, z);
        return (s.minus + subdominant_factor(order, z) * std::exp(-2.0 * z) * s.plus) * s.plus / (2.0 * z);
    }
    const BesselIK v = bessel_ik(order, z);
    return v.i_val * v.k_val;
}

}  // namespace emi::specfun
