#include "emi/approx.hpp"

#include <cmath>
#include <numbers>

#include "emi/error.hpp"

namespace emi {

namespace {

void require_positive(std::initializer_list<double> values) {
    for (double v : values) {
        if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError("approximation inputs must be finite and > 0");
    }
}

}  // namespace

ApproxValue approx_n2(double sigma1, double sigma2, double h1, double omega, double mu, double moment, double r) {
    require_positive({sigma1, sigma2, h1, omega, mu, moment, r});
    const double scale = moment / (4.0 * std::numbers::pi);
    const double wm = omega * mu;
    const double e1 = std::exp(-h1 * std::sqrt(2.0 * wm * sigma1));
    const double d1 = std::sqrt(4.0 * h1 * h1 + r * r);
    const double c = wm * (sigma1 - sigma2) * e1;
    const HalfspaceFields hs = halfspace_fields(sigma1, omega, moment, r, mu);
    return {scale * c / (4.0 * d1) + hs.hz.imag(), -scale * c * (d1 - 2.0 * h1) / (4.0 * r * d1) + hs.hrho.imag()};
}

ApproxValue approx_n3(double sigma1, double sigma2, double sigma3, double h1, double h2, double omega, double mu,
                      double moment, double r) {
    require_positive({sigma1, sigma2, sigma3, h1, h2, omega, mu, moment, r});
    const double scale = moment / (4.0 * std::numbers::pi);
    const double wm = omega * mu;
    const double e1 = std::exp(-h1 * std::sqrt(2.0 * wm * sigma1));
    const double e2 = std::exp(-h2 * std::sqrt(2.0 * wm * sigma2));
    const double d1 = std::sqrt(4.0 * h1 * h1 + r * r);
    const double depth = h1 + h2;
    const double d2 = std::sqrt(4.0 * depth * depth + r * r);
    const HalfspaceFields hs = halfspace_fields(sigma1, omega, moment, r, mu);

    const double lz = scale * (wm * e1 / 4.0) * ((sigma2 - sigma3) * e2 / d2 + (sigma1 - sigma2) / d1) + hs.hz.imag();
    const double lrho = -scale * (wm * e1 / (4.0 * r)) *
                            ((sigma2 - sigma3) * e2 * (d2 - 2.0 * depth) / d2 + (d1 - 2.0 * h1) * (sigma1 - sigma2) / d1) +
                        hs.hrho.imag();
    return {lz, lrho};
}

FieldResponse approx_fields(const LayeredModel& model, const InstrumentConfig& instrument) {
    instrument.validate();
    const auto& s = model.sigma();
    const auto& h = model.h();
    if (s.size() != 2 && s.size() != 3) {
        throw ValidationError("analytic approximation exists only for 2 or 3 layers, got " + std::to_string(s.size()));
    }
    const double omega = instrument.omega();
    auto eval = [&](double r) {
        if (s.size() == 2) return approx_n2(s[0], s[1], h[0], omega, instrument.mu, instrument.moment, r);
        return approx_n3(s[0], s[1], s[2], h[0], h[1], omega, instrument.mu, instrument.moment, r);
    };
    FieldResponse resp;
    resp.method = Method::approx;
    for (double r : instrument.offsets_hcp) resp.entries.push_back({r, Geometry::hcp, Complex(0.0, eval(r).lz), 0.0});
    for (double r : instrument.offsets_prp) resp.entries.push_back({r, Geometry::prp, Complex(0.0, eval(r).lrho), 0.0});
    return resp;
}

}  // namespace emi
