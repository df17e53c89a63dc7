// Compiled with -mavx2 -mfma; only entered after a runtime CPU check.
#include <immintrin.h>

#include <cmath>
#include <cstdint>

#include "../bessel_coeffs.hpp"
#include "emi/kernels.hpp"
#include "emi/specfun.hpp"

namespace emi::kernels::avx2 {

namespace {

using v4 = __m256d;

inline v4 set1(double x) { return _mm256_set1_pd(x); }
inline v4 add(v4 a, v4 b) { return _mm256_add_pd(a, b); }
inline v4 sub(v4 a, v4 b) { return _mm256_sub_pd(a, b); }
inline v4 mul(v4 a, v4 b) { return _mm256_mul_pd(a, b); }
inline v4 div(v4 a, v4 b) { return _mm256_div_pd(a, b); }
inline v4 fmadd(v4 a, v4 b, v4 c) { return _mm256_fmadd_pd(a, b, c); }
inline v4 fnmadd(v4 a, v4 b, v4 c) { return _mm256_fnmadd_pd(a, b, c); }
inline v4 fmsub(v4 a, v4 b, v4 c) { return _mm256_fmsub_pd(a, b, c); }
inline v4 blend(v4 a, v4 b, v4 mask) { return _mm256_blendv_pd(a, b, mask); }
inline v4 cmp_gt(v4 a, v4 b) { return _mm256_cmp_pd(a, b, _CMP_GT_OQ); }
inline v4 cmp_le(v4 a, v4 b) { return _mm256_cmp_pd(a, b, _CMP_LE_OQ); }
inline v4 cmp_eq(v4 a, v4 b) { return _mm256_cmp_pd(a, b, _CMP_EQ_OQ); }
inline int any(v4 mask) { return _mm256_movemask_pd(mask); }

template <std::size_t N>
inline v4 horner(const double (&c)[N], v4 x) {
    v4 acc = set1(c[N - 1]);
    for (std::size_t i = N - 1; i-- > 0;) acc = fmadd(acc, x, set1(c[i]));
    return acc;
}

// round-to-nearest integer as double and as int64 lanes, valid for |v| < 2^51
constexpr double kShifter = 6755399441055744.0;  // 1.5 * 2^52

inline v4 round_nearest(v4 v) { return _mm256_round_pd(v, _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC); }

inline __m256i to_int_bits(v4 rounded) {
    return _mm256_castpd_si256(add(rounded, set1(kShifter)));
}

// exp(x) for x in [-709, 709]
inline v4 exp4(v4 x) {
    constexpr double ln2_hi = 0.6931471803691238;
    constexpr double ln2_lo = 1.9082149292705877e-10;
    constexpr double inv_ln2 = 1.4426950408889634;
    const v4 n = round_nearest(mul(x, set1(inv_ln2)));
    v4 r = fnmadd(n, set1(ln2_hi), x);
    r = fnmadd(n, set1(ln2_lo), r);
    // Taylor to degree 13 on |r| <= ln2/2
    v4 p = set1(1.0 / 6227020800.0);
    constexpr double inv_fact[] = {1.0 / 479001600.0, 1.0 / 39916800.0, 1.0 / 3628800.0, 1.0 / 362880.0,
                                   1.0 / 40320.0,     1.0 / 5040.0,     1.0 / 720.0,     1.0 / 120.0,
                                   1.0 / 24.0,        1.0 / 6.0,        0.5,             1.0,
                                   1.0};
    for (double c : inv_fact) p = fmadd(p, r, set1(c));
    __m256i bits = to_int_bits(n);
    bits = _mm256_add_epi64(bits, _mm256_set1_epi64x(1023));
    bits = _mm256_slli_epi64(bits, 52);
    return mul(p, _mm256_castsi256_pd(bits));
}

// sin and cos for |x| <= 1e5
inline void sincos4(v4 x, v4& s, v4& c) {
    constexpr double two_over_pi = 0.6366197723675814;
    constexpr double p1 = 1.570796325802803;
    constexpr double p2 = 9.920935791635221e-10;
    constexpr double p3 = 5.170182981794105e-19;
    const v4 k = round_nearest(mul(x, set1(two_over_pi)));
    v4 r = fnmadd(k, set1(p1), x);
    r = fnmadd(k, set1(p2), r);
    r = fnmadd(k, set1(p3), r);
    const v4 r2 = mul(r, r);

    // sin r = r (1 - r^2/3! + ... + r^16/17!)
    v4 ps = set1(1.0 / 355687428096000.0);
    constexpr double sin_c[] = {-1.0 / 1307674368000.0, 1.0 / 6227020800.0, -1.0 / 39916800.0, 1.0 / 362880.0,
                                -1.0 / 5040.0,          1.0 / 120.0,        -1.0 / 6.0,        1.0};
    for (double cc : sin_c) ps = fmadd(ps, r2, set1(cc));
    ps = mul(ps, r);
    // cos r = 1 - r^2/2! + ... + r^18/18!
    v4 pc = set1(-1.0 / 6402373705728000.0);
    constexpr double cos_c[] = {1.0 / 20922789888000.0, -1.0 / 87178291200.0, 1.0 / 479001600.0,
                                -1.0 / 3628800.0,       1.0 / 40320.0,        -1.0 / 720.0,
                                1.0 / 24.0,             -0.5,                 1.0};
    for (double cc : cos_c) pc = fmadd(pc, r2, set1(cc));

    const __m256i q = to_int_bits(k);
    const __m256i one = _mm256_set1_epi64x(1);
    const __m256i two = _mm256_set1_epi64x(2);
    const v4 swap = _mm256_castsi256_pd(_mm256_cmpeq_epi64(_mm256_and_si256(q, one), one));
    const v4 sin_neg = _mm256_castsi256_pd(_mm256_cmpeq_epi64(_mm256_and_si256(q, two), two));
    const v4 cos_neg = _mm256_castsi256_pd(
        _mm256_cmpeq_epi64(_mm256_and_si256(_mm256_add_epi64(q, one), two), two));
    const v4 sign_bit = set1(-0.0);
    v4 sv = blend(ps, pc, swap);
    v4 cv = blend(pc, ps, swap);
    sv = _mm256_xor_pd(sv, _mm256_and_pd(sin_neg, sign_bit));
    cv = _mm256_xor_pd(cv, _mm256_and_pd(cos_neg, sign_bit));
    s = sv;
    c = cv;
}

struct cv4 {
    v4 re;
    v4 im;
};

inline cv4 cadd(cv4 a, cv4 b) { return {add(a.re, b.re), add(a.im, b.im)}; }
inline cv4 cmul(cv4 a, cv4 b) {
    return {fmsub(a.re, b.re, mul(a.im, b.im)), fmadd(a.re, b.im, mul(a.im, b.re))};
}
inline cv4 cdiv(cv4 a, cv4 b) {
    const v4 den = fmadd(b.re, b.re, mul(b.im, b.im));
    const v4 re = fmadd(a.re, b.re, mul(a.im, b.im));
    const v4 im = fmsub(a.im, b.re, mul(a.re, b.im));
    return {div(re, den), div(im, den)};
}

// principal sqrt of lambda^2 + i a with a >= 0
inline cv4 csqrt_pos(v4 lam2, v4 a) {
    const v4 mod = _mm256_sqrt_pd(fmadd(lam2, lam2, mul(a, a)));
    const v4 t = _mm256_sqrt_pd(mul(set1(0.5), add(mod, lam2)));
    return {t, div(a, add(t, t))};
}

void reflection4(const Stack& stack, const double* lambda, double* re, double* im) {
    const std::size_t layers = stack.a.size();
    const v4 lam = _mm256_loadu_pd(lambda);
    const v4 lam2 = mul(lam, lam);
    const v4 zero = _mm256_setzero_pd();
    cv4 below = csqrt_pos(lam2, set1(stack.a[layers - 1]));
    cv4 r{zero, zero};
    for (std::size_t j = layers - 1; j >= 1; --j) {
        const cv4 u = csqrt_pos(lam2, set1(stack.a[j - 1]));
        const cv4 s = cadd(u, below);
        const cv4 psi = cdiv(cv4{zero, set1(stack.a[j - 1] - stack.a[j])}, cmul(s, s));
        const v4 two_h = set1(2.0 * stack.h[j - 1]);
        const v4 decay = mul(two_h, u.re);
        const v4 mag = exp4(_mm256_max_pd(_mm256_sub_pd(zero, decay), set1(-708.0)));
        v4 sn, cs;
        sincos4(mul(two_h, u.im), sn, cs);
        const v4 cut = cmp_gt(decay, set1(700.0));
        const cv4 e{blend(mul(mag, cs), zero, cut), blend(_mm256_sub_pd(zero, mul(mag, sn)), zero, cut)};
        const cv4 one_plus{add(fmsub(r.re, psi.re, mul(r.im, psi.im)), set1(1.0)),
                           fmadd(r.re, psi.im, mul(r.im, psi.re))};
        r = cmul(cdiv(cadd(r, psi), one_plus), e);
        below = u;
    }
    const cv4 u1 = below;
    const cv4 k1sq{zero, set1(-stack.a[0])};
    const cv4 sum{add(lam, u1.re), u1.im};
    const cv4 ru = cmul(r, u1);
    const v4 four_lam = mul(set1(4.0), lam);
    const cv4 num{mul(ru.re, four_lam), mul(ru.im, four_lam)};
    const cv4 den = cadd(cmul(r, k1sq), cmul(sum, sum));
    const cv4 d = cdiv(num, den);
    _mm256_storeu_pd(re, mul(d.re, lam2));
    _mm256_storeu_pd(im, mul(d.im, lam2));
}

namespace bc = emi::detail::bessel;

constexpr double kLargeArgument = 1.0e5;

void bessel4(const double* xp, double* j0p, double* j1p) {
    const v4 x = _mm256_loadu_pd(xp);
    if (any(cmp_gt(x, set1(kLargeArgument))) || any(_mm256_cmp_pd(x, set1(0.0), _CMP_NGE_UQ))) {
        for (int i = 0; i < 4; ++i) {
            j0p[i] = specfun::bessel_j0(xp[i]);
            j1p[i] = specfun::bessel_j1(xp[i]);
        }
        return;
    }
    const v4 four = set1(4.0);
    const v4 eight = set1(8.0);
    const v4 near = cmp_le(x, four);
    const v4 far = cmp_gt(x, eight);
    v4 j0 = _mm256_setzero_pd();
    v4 j1 = _mm256_setzero_pd();
    const v4 x2 = mul(x, x);

    if (any(near)) {
        const v4 r0 = div(horner(bc::j0_p1, x2), horner(bc::j0_q1, x2));
        const v4 a0 = mul(mul(add(x, set1(bc::j0_x1)), sub(sub(x, set1(bc::j0_x11 / 256.0)), set1(bc::j0_x12))), r0);
        const v4 r1 = div(horner(bc::j1_p1, x2), horner(bc::j1_q1, x2));
        const v4 a1 =
            mul(mul(mul(x, add(x, set1(bc::j1_x1))), sub(sub(x, set1(bc::j1_x11 / 256.0)), set1(bc::j1_x12))), r1);
        j0 = blend(j0, a0, near);
        j1 = blend(j1, a1, near);
    }
    const v4 mid = _mm256_andnot_pd(_mm256_or_pd(near, far), _mm256_castsi256_pd(_mm256_set1_epi64x(-1)));
    if (any(mid)) {
        const v4 y = sub(set1(1.0), div(x2, set1(64.0)));
        const v4 r0 = div(horner(bc::j0_p2, y), horner(bc::j0_q2, y));
        const v4 a0 = mul(mul(add(x, set1(bc::j0_x2)), sub(sub(x, set1(bc::j0_x21 / 256.0)), set1(bc::j0_x22))), r0);
        const v4 r1 = div(horner(bc::j1_p2, x2), horner(bc::j1_q2, x2));
        const v4 a1 =
            mul(mul(mul(x, add(x, set1(bc::j1_x2))), sub(sub(x, set1(bc::j1_x21 / 256.0)), set1(bc::j1_x22))), r1);
        j0 = blend(j0, a0, mid);
        j1 = blend(j1, a1, mid);
    }
    if (any(far)) {
        // keep the far-branch arithmetic finite in lanes that do not use it
        const v4 xf = blend(eight, x, far);
        const v4 y = div(eight, xf);
        const v4 y2 = mul(y, y);
        const v4 factor = div(set1(bc::one_div_root_pi), _mm256_sqrt_pd(xf));
        v4 sx, cx;
        sincos4(xf, sx, cx);
        const v4 rc0 = div(horner(bc::j0_pc, y2), horner(bc::j0_qc, y2));
        const v4 rs0 = div(horner(bc::j0_ps, y2), horner(bc::j0_qs, y2));
        const v4 a0 = mul(factor, sub(mul(rc0, add(cx, sx)), mul(mul(y, rs0), sub(sx, cx))));
        const v4 rc1 = div(horner(bc::j1_pc, y2), horner(bc::j1_qc, y2));
        const v4 rs1 = div(horner(bc::j1_ps, y2), horner(bc::j1_qs, y2));
        const v4 a1 = mul(factor, add(mul(rc1, sub(sx, cx)), mul(mul(y, rs1), add(sx, cx))));
        j0 = blend(j0, a0, far);
        j1 = blend(j1, a1, far);
    }
    const v4 origin = cmp_eq(x, _mm256_setzero_pd());
    j0 = blend(j0, set1(1.0), origin);
    j1 = blend(j1, _mm256_setzero_pd(), origin);
    _mm256_storeu_pd(j0p, j0);
    _mm256_storeu_pd(j1p, j1);
}

}  // namespace

void reflection_diff(const Stack& stack, const double* lambda, std::size_t n, double* re, double* im) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) reflection4(stack, lambda + i, re + i, im + i);
    if (i < n) {
        double lam[4], r[4], m[4];
        for (std::size_t k = 0; k < 4; ++k) lam[k] = lambda[i + k < n ? i + k : n - 1];
        reflection4(stack, lam, r, m);
        for (std::size_t k = 0; i + k < n; ++k) {
            re[i + k] = r[k];
            im[i + k] = m[k];
        }
    }
}

void bessel_j01(const double* x, std::size_t n, double* j0, double* j1) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) bessel4(x + i, j0 + i, j1 + i);
    if (i < n) {
        double xs[4], a[4], b[4];
        for (std::size_t k = 0; k < 4; ++k) xs[k] = x[i + k < n ? i + k : n - 1];
        bessel4(xs, a, b);
        for (std::size_t k = 0; i + k < n; ++k) {
            j0[i + k] = a[k];
            j1[i + k] = b[k];
        }
    }
}

}  // namespace emi::kernels::avx2
