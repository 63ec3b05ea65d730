// thermal.hpp: high-temperature damping, reflected power and SI estimates

#pragma once

#include <filesystem>
#include <limits>
#include <vector>

#include <json.hpp>

#include "casdec/config.hpp"

namespace casdec {

namespace codata {
inline constexpr double hbar = 1.054571817e-34;       // J s
inline constexpr double c = 299792458.0;              // m / s
inline constexpr double k_boltzmann = 1.380649e-23;  // J / K
}  // namespace codata

struct MirrorGeometry {
    enum class Kind { line, sphere, plate };
    Kind kind{Kind::line};
    double radius{0.0};  // sphere
    double area{0.0};    // plate
    double cutoff{std::numeric_limits<double>::infinity()};  // Omega; infinity is a perfect mirror

    void validate() const;
};

// Power carried by the thermal photons reflected from one side of the mirror.
// line:  (1/pi) int |R|^2 n hbar w dw
// plate: (hbar A / pi^2 c^2) int |R|^2 n w^3 dw, (pi^2/15) A T^4 / (hbar^3 c^2) when perfect
// Units follow the arguments; with hbar = c = 1 everything is in energy units.
Estimate reflected_power(double temperature, const MirrorGeometry& geometry, double hbar = 1.0,
                         double c = 1.0, const QuadOptions& opts = {});

// -2 P qdot / c^2
double doppler_friction(double temperature, const MirrorGeometry& geometry, double qdot, double hbar = 1.0,
                        double c = 1.0);

// Damping implied by the friction force: P / (M c^2).
double gamma_doppler(double temperature, const MirrorGeometry& geometry, double mass, double hbar = 1.0,
                     double c = 1.0);

enum class ThermalRegime {
    high,  // T >> hbar Omega
    mid,   // hbar w0 << T << hbar Omega
};

// Omega T / 2M or pi T^2 / 3 M hbar. Sets *outside_validity when the
// configuration misses the regime by less than a factor of 10.
double gamma_thermal_exact(const PhysicalConfig& cfg, ThermalRegime regime, bool* outside_validity = nullptr);

// Photon wavelength 2 pi hbar c / (k_B T) in metres.
double thermal_wavelength(double temperature_kelvin);

// de Broglie length hbar / sqrt(2 M T), any consistent units.
double de_broglie_length(double mass, double temperature, double hbar = 1.0);

// Conversion between internal units (hbar = M = w0 = 1) and SI.
struct SIUnits {
    double mass_kg{1e-3};
    double omega0{1.0};  // rad / s

    double time() const { return 1.0 / omega0; }
    double energy() const { return codata::hbar * omega0; }
    double length() const;
    double rate_to_si(double internal) const { return internal * omega0; }
    double rate_from_si(double si) const { return si / omega0; }
};

// Plate damping in internal units, with T, A and c already expressed in them.
double plate_gamma_internal(double temperature, double area, double c);

struct SIReport {
    double temperature_kelvin{0.0};
    double lambda_th_m{0.0};
    double gamma_per_s{0.0};
    double td_coeff_s_m2{0.0};  // t_d * delta_Q^2
    double td_s{0.0};
    double area_m2{0.0};
    double delta_q_m{0.0};
    double mass_kg{0.0};
    double omega0{0.0};
    bool diffraction_ok{true};        // lambda_th < sqrt(A) / 10
    bool slow_decoherence_ok{true};   // w0 t_d > 10, only checked when w0 > 0
};

struct PlateParams {
    double temperature_kelvin{50.0};
    double area_m2{1e-6};
    double delta_q_m{1e-9};
    double mass_kg{1e-3};  // only enters gamma_per_s; t_d is mass independent
    double omega0{0.0};     // rad / s, optional
};

// t_d = 15 lambda_th^5 / (32 pi^7 c A dQ^2)
SIReport plate_decoherence_time(const PlateParams& p);

nlohmann::json si_report_json(const SIReport& r);
void write_thermal_csv(const std::filesystem::path& path, const std::vector<SIReport>& rows);

}  // namespace casdec
