// spectral.hpp: vacuum and thermal spectral densities of the field momentum

#pragma once

#include <complex>
#include <filesystem>
#include <vector>

#include "casdec/config.hpp"

namespace casdec {

// R(w) = -i Omega / (w + i Omega)
std::complex<double> reflection_amplitude(double omega, double transparency);

// zeta(u) = ln(1+u^2)/(2u) + atan(u)/u^2 - 1/u, for u > 0.
double zeta(double u);

// Vacuum antisymmetric spectrum (2/pi) hbar^2 Omega zeta(w/Omega); odd in w.
double xi_vacuum(double omega, const PhysicalConfig& cfg);

// Bose occupation 1/(exp(hbar w / T) - 1); 0 at T = 0.
double thermal_photon_number(double omega, double temperature, double hbar = 1.0);

// G(w, w') = |w'-w| (n_{|w'-w|} - sign(w'-w) n_{w'}); finite limit T/hbar at w' = w.
double g_kernel(double omega, double omega_p, double temperature, double hbar = 1.0);

// Thermal part of the antisymmetric spectrum, by quadrature over w'.
// Requires T > 0 and w > 0. Throws ConvergenceError on failure.
Estimate xi_thermal(double omega, const PhysicalConfig& cfg, const QuadOptions& opts = {});

// sigma = xi / tanh(hbar w / 2T); xi * sign(w) at T = 0.
double sigma_from_fdt(double omega, double xi_value, double temperature, double hbar = 1.0);

// xi = xi_vacuum + xi_thermal (thermal part skipped at T = 0).
double xi_total(double omega, const PhysicalConfig& cfg, const QuadOptions& opts = {});
double sigma_total(double omega, const PhysicalConfig& cfg, const QuadOptions& opts = {});

struct SpectralTable {
    std::vector<double> frequencies;
    std::vector<double> xi_values;
    std::vector<double> sigma_values;
    double temperature{0.0};
    // d ln xi / d ln w over the last two samples; observed, not asserted.
    double tail_exponent{0.0};
};

// Frequencies must be strictly increasing and positive.
SpectralTable make_spectral_table(const std::vector<double>& frequencies, const PhysicalConfig& cfg,
                                  const QuadOptions& opts = {});

// Header omega,xi,sigma.
void write_spectral_csv(const std::filesystem::path& path, const SpectralTable& table);

}  // namespace casdec
