// config.hpp: physical parameters, quadrature options and error types

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace casdec {

// Parameters of the mirror + field system. Internal computations use
// hbar = mass = omega0 = 1; the fields stay explicit so closed forms read the
// same in any unit system. Temperature is an energy (k_B = 1).
struct PhysicalConfig {
    double mass{1.0};
    double omega0{1.0};          // mechanical frequency
    double transparency{1.0};    // Omega, reflection cutoff
    double temperature{0.0};
    double hbar{1.0};
    double speed_of_light{1.0};  // only used by SI and 3D formulas

    // Throws std::invalid_argument when an invariant is violated.
    void validate() const;

    // hbar*omega/T; +inf at T = 0.
    double thermal_ratio(double omega) const;
};

struct QuadOptions {
    double rel_tol{1e-8};
    double abs_tol{0.0};
    std::size_t max_intervals{4000};  // adaptive subdivision budget
};

// Value with an absolute error estimate.
struct Estimate {
    double value{0.0};
    double error{0.0};
};

class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double achieved_error)
        : std::runtime_error(what), achieved_error_(achieved_error) {}
    double achieved_error() const noexcept { return achieved_error_; }

private:
    double achieved_error_;
};

inline constexpr double pi = 3.14159265358979323846;

}  // namespace casdec
