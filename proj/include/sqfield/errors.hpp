#pragma once

#include <stdexcept>
#include <string>

namespace sqfield {

// Bad or inconsistent user input (config files, CLI arguments, profile data).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Requested operation on the wrong profile variant.
struct WrongVariant : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// |W - 1| exceeded the alarm threshold: the step control failed upstream.
struct WronskianDrift : std::runtime_error {
    WronskianDrift(double t_, double w_)
        : std::runtime_error("Wronskian drift at t=" + std::to_string(t_) +
                             ": W=" + std::to_string(w_)),
          t(t_), wronskian(w_) {}
    double t;
    double wronskian;
};

// The adaptive stepper stalled or hit its step budget.
struct StepLimit : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// | |alpha|^2 - |beta|^2 - 1 | exceeded the tolerance; signals ODE error
// leaking into the Bogoliubov extraction.
struct UnitarityViolation : std::runtime_error {
    UnitarityViolation(double residual_)
        : std::runtime_error("Bogoliubov unitarity residual " +
                             std::to_string(residual_)),
          residual(residual_) {}
    double residual;
};

// Adaptive quadrature did not converge within its panel budget.
struct QuadratureFailure : std::runtime_error {
    QuadratureFailure(const std::string& what_, double err_)
        : std::runtime_error(what_ + " (error estimate " +
                             std::to_string(err_) + ")"),
          error_estimate(err_) {}
    double error_estimate;
};

} // namespace sqfield
