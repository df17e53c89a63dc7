#pragma once

#include <stdexcept>
#include <string>

namespace emi {

// Invalid input: bad model, bad configuration, malformed file. Maps to CLI exit code 2.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Numerical failure: non-finite intermediate, non-convergence. Maps to CLI exit code 3.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Adaptive quadrature ran out of subdivisions. Carries the best estimate reached.
class QuadratureError : public NumericalError {
public:
    QuadratureError(const std::string& what, double estimate_norm, double achieved_error)
        : NumericalError(what), estimate_norm_(estimate_norm), achieved_error_(achieved_error) {}

    double estimate_norm() const noexcept { return estimate_norm_; }
    double achieved_error() const noexcept { return achieved_error_; }

private:
    double estimate_norm_;
    double achieved_error_;
};

}  // namespace emi
