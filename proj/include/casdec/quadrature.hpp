// quadrature.hpp: adaptive Gauss-Kronrod integration over split intervals

#pragma once

#include <functional>
#include <span>
#include <vector>

#include "casdec/config.hpp"

namespace casdec::quad {

struct Result {
    double value{0.0};
    double error{0.0};
    double l1{0.0};  // integral of |f|, used to judge relative accuracy
    bool converged{true};
};

// Adaptive G10/K21 integration of f over [a, b], with every interior
// breakpoint used as a segment boundary (never as a quadrature node).
// Segments spanning more than a factor 16 are further split geometrically so
// that integrands decaying as power laws are resolved from the start.
Result integrate(const std::function<double(double)>& f, double a, double b,
                 std::span<const double> breakpoints, const QuadOptions& opts);

inline Result integrate(const std::function<double(double)>& f, double a, double b,
                        const QuadOptions& opts) {
    return integrate(f, a, b, std::span<const double>{}, opts);
}

// Same as integrate() but throws ConvergenceError when the error estimate
// exceeds the requested tolerance.
Result integrate_or_throw(const std::function<double(double)>& f, double a, double b,
                          std::span<const double> breakpoints, const QuadOptions& opts,
                          const char* what);

// Gauss-Legendre nodes and weights on [-1, 1] (ascending nodes).
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussLegendre& gauss_legendre(std::size_t n);

}  // namespace casdec::quad
