#include "emi/model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "emi/error.hpp"

namespace emi {

namespace {

// Re(2 u h) above this and the layer's exponential is treated as zero.
constexpr double kExpCutoff = 700.0;

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

Complex damped(Complex u, double h) {
    const Complex arg = 2.0 * u * h;
    if (arg.real() > kExpCutoff) return 0.0;
    return std::exp(-arg);
}

void check_lambda(double lambda) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw ValidationError("spectral variable must be finite and >= 0");
    }
}

void check_omega(double omega) {
    if (!finite_positive(omega)) throw ValidationError("omega must be finite and > 0");
}

Complex checked(Complex v, const char* where) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw NumericalError(std::string("non-finite value in ") + where);
    }
    return v;
}

}  // namespace

LayeredModel::LayeredModel(std::vector<double> sigma, std::vector<double> h)
    : sigma_(std::move(sigma)), h_(std::move(h)) {
    if (sigma_.empty()) throw ValidationError("model needs at least one layer");
    if (h_.size() + 1 != sigma_.size()) {
        throw ValidationError("model with " + std::to_string(sigma_.size()) + " layers needs " +
                              std::to_string(sigma_.size() - 1) + " thicknesses, got " +
                              std::to_string(h_.size()));
    }
    for (double s : sigma_) {
        if (!finite_positive(s)) throw ValidationError("conductivities must be finite and > 0");
    }
    for (double t : h_) {
        if (!finite_positive(t)) throw ValidationError("thicknesses must be finite and > 0");
    }
}

void InstrumentConfig::validate() const {
    if (!finite_positive(frequency)) throw ValidationError("frequency must be > 0");
    if (!finite_positive(moment)) throw ValidationError("magnetic moment must be > 0");
    if (!finite_positive(mu)) throw ValidationError("permeability must be > 0");
    auto check = [](const std::vector<double>& r, const char* name) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (!finite_positive(r[i])) {
                throw ValidationError(std::string(name) + " offsets must be > 0");
            }
            if (i > 0 && !(r[i] > r[i - 1])) {
                throw ValidationError(std::string(name) + " offsets must be strictly increasing");
            }
        }
    };
    check(offsets_hcp, "HCP");
    check(offsets_prp, "PRP");
}

std::vector<Complex> wavenumbers(const LayeredModel& model, double omega, double mu) {
    check_omega(omega);
    std::vector<Complex> k;
    k.reserve(model.layers());
    for (double s : model.sigma()) k.push_back(std::sqrt(Complex(0.0, -omega * mu * s)));
    return k;
}

KernelPoint kernel_point(const LayeredModel& model, double omega, double lambda, double mu) {
    check_omega(omega);
    check_lambda(lambda);
    const std::size_t n = model.layers();
    KernelPoint kp;
    kp.lambda = lambda;
    kp.u.resize(n + 1);
    kp.psi.resize(n + 1);
    kp.r.assign(n + 1, Complex(0.0));

    kp.u[0] = lambda;
    for (std::size_t j = 1; j <= n; ++j) {
        kp.u[j] = std::sqrt(Complex(lambda * lambda, omega * mu * model.sigma()[j - 1]));
        // u_{j-1}^2 - u_j^2 is exact, so no cancellation when lambda dominates
        const double da = omega * mu * ((j > 1 ? model.sigma()[j - 2] : 0.0) - model.sigma()[j - 1]);
        const Complex s = kp.u[j - 1] + kp.u[j];
        kp.psi[j] = Complex(0.0, da) / (s * s);
    }
    for (std::size_t j = n - 1; j >= 1; --j) {
        const Complex next = kp.r[j + 1];
        const Complex den = next * kp.psi[j + 1] + 1.0;
        kp.r[j] = checked((next + kp.psi[j + 1]) / den * damped(kp.u[j], model.h()[j - 1]), "reflection recursion");
    }
    kp.r[0] = checked((kp.r[1] + kp.psi[1]) / (kp.r[1] * kp.psi[1] + 1.0), "reflection recursion");
    return kp;
}

Complex reflection_r0(const LayeredModel& model, double omega, double lambda, double mu) {
    return kernel_point(model, omega, lambda, mu).r0();
}

Complex r0_minus_psi1(const LayeredModel& model, double omega, double lambda, double mu) {
    const KernelPoint kp = kernel_point(model, omega, lambda, mu);
    const Complex r1 = kp.r[1];
    const Complex u1 = kp.u[1];
    const Complex k1sq(0.0, -omega * mu * model.sigma()[0]);
    const Complex sum = lambda + u1;
    return checked(4.0 * r1 * u1 * lambda / (r1 * k1sq + sum * sum), "reflection difference");
}

Complex r0_minus_psi1_direct(const LayeredModel& model, double omega, double lambda, double mu) {
    const KernelPoint kp = kernel_point(model, omega, lambda, mu);
    return kp.r[0] - kp.psi[1];
}

Complex integrand_g(const LayeredModel& model, double omega, double lambda, int order, double r,
                    double mu) {
    if (!finite_positive(r)) throw ValidationError("offset must be > 0");
    const double j = specfun::bessel_j(order, lambda * r);
    return r0_minus_psi1(model, omega, lambda, mu) * (lambda * lambda * j);
}

Complex integrand_q(const LayeredModel& model, double omega, double lambda, int order, double r,
                    double mu) {
    if (!finite_positive(r)) throw ValidationError("offset must be > 0");
    check_omega(omega);
    check_lambda(lambda);
    const Complex u1 = std::sqrt(Complex(lambda * lambda, omega * mu * model.sigma()[0]));
    const Complex s = lambda + u1;
    const Complex psi1 = Complex(0.0, -omega * mu * model.sigma()[0]) / (s * s);
    const double j = specfun::bessel_j(order, lambda * r);
    const double sign = order == 0 ? 1.0 : -1.0;
    return (1.0 + sign * psi1) * (lambda * lambda * j);
}

LayeredModel parse_model_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("model JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ValidationError("model JSON must be an object");
    for (const auto& [key, value] : doc.items()) {
        if (key != "sigma_mS_per_m" && key != "h_m" && key != "name") {
            throw ValidationError("model JSON: unknown key '" + key + "'");
        }
    }
    if (!doc.contains("sigma_mS_per_m")) throw ValidationError("model JSON: missing sigma_mS_per_m");
    auto read = [&](const char* key) {
        std::vector<double> v;
        if (!doc.contains(key)) return v;
        const auto& arr = doc.at(key);
        if (!arr.is_array()) throw ValidationError(std::string("model JSON: ") + key + " must be an array");
        for (const auto& x : arr) {
            if (!x.is_number()) throw ValidationError(std::string("model JSON: ") + key + " must hold numbers");
            v.push_back(x.get<double>());
        }
        return v;
    };
    std::vector<double> sigma = read("sigma_mS_per_m");
    for (double& s : sigma) s *= 1e-3;
    return LayeredModel(std::move(sigma), read("h_m"));
}

LayeredModel load_model_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open model file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_model_json(ss.str());
}

std::string model_to_json(const LayeredModel& model) {
    nlohmann::json doc;
    std::vector<double> ms;
    for (double s : model.sigma()) ms.push_back(s * 1e3);
    doc["sigma_mS_per_m"] = ms;
    doc["h_m"] = model.h();
    return doc.dump();
}

}  // namespace emi
