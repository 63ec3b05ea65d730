// oscillatory.hpp: Fourier integrals of smooth amplitudes via Legendre panels
//
// A smooth amplitude g on [a, b] is approximated piecewise by Legendre
// expansions. The oscillatory integral of each piece is then exact:
//   int_{c-m}^{c+m} P_k((w-c)/m) e^{iwt} dw = 2 m e^{ict} i^k j_k(mt),
// so a single fit serves every t, however large.

#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace casdec::osc {

struct PanelOptions {
    std::size_t order{20};       // Gauss-Legendre nodes per panel
    double rel_tol{1e-11};
    std::size_t max_panels{4000};
};

class LegendrePanels {
public:
    LegendrePanels() = default;

    // Fits g on [a, b], splitting adaptively until the trailing Legendre
    // coefficients fall below tolerance. `edges` are forced panel boundaries.
    LegendrePanels(const std::function<double(double)>& g, double a, double b,
                   const std::vector<double>& edges, const PanelOptions& opts);

    // int_a^b g(w) e^{i (w - shift) t} dw
    std::complex<double> fourier(double t, double shift) const;

    // int_a^b g(w) dw
    double integral() const { return integral_; }

    // Bound on the error of either integral implied by the fit residuals.
    double error_bound() const { return error_; }

    double lower() const { return a_; }
    double upper() const { return b_; }
    std::size_t size() const { return centers_.size(); }

private:
    double a_{0.0}, b_{0.0};
    std::size_t order_{0};
    std::vector<double> centers_, half_widths_;
    std::vector<double> coeffs_;  // order_ per panel
    double integral_{0.0};
    double error_{0.0};
};

// Spherical Bessel j_0..j_{n-1}(z) for z >= 0.
void spherical_bessel_j(double z, std::size_t n, double* out);

}  // namespace casdec::osc
