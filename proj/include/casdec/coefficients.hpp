// coefficients.hpp: master-equation coefficients and their damping limits

#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "casdec/config.hpp"
#include "casdec/oscillatory.hpp"

namespace casdec {

// Long-time damping w0 xi[w0] / (4 M hbar).
double gamma_asymptotic(const PhysicalConfig& cfg, const QuadOptions& opts = {});

// hbar Omega w0 zeta(w0/Omega) / (2 pi M). Requires T = 0.
double gamma_closed_form_vacuum(const PhysicalConfig& cfg);

// sigma[w0] / (4 M^2).
double d1_asymptotic(const PhysicalConfig& cfg, const QuadOptions& opts = {});

// (w0 / 2 pi M) PV int_0^inf sigma(w) [1/(2(w+w0)) + 1/(2(w0-w))] dw for the
// vacuum spectrum. The thermal spectrum makes this integral diverge at w -> 0,
// so T > 0 throws std::domain_error.
Estimate d2_asymptotic_pv(const PhysicalConfig& cfg, const QuadOptions& opts = {});

// Same limit for an arbitrary amplitude sigma(w) on (0, inf). `breakpoints`
// mark known features of sigma (edges of its support, cutoffs).
Estimate d2_asymptotic_pv(const std::function<double(double)>& sigma, double omega0, double mass,
                          const std::vector<double>& breakpoints, const QuadOptions& opts = {});

// (1 / pi hbar) PV int_0^inf xi(w) [1/(2(w+w0)) + 1/(2(w-w0))] dw, vacuum only.
Estimate delta_m2_asymptotic_pv(const PhysicalConfig& cfg, const QuadOptions& opts = {});

struct MassShift {
    double delta_m1{0.0};
    double phi_squared_input{0.0};
    std::string cutoff_descriptor;
};

// delta_m1 = Omega * <phi^2(0)>; the vacuum average is cutoff dependent and
// must be supplied by the caller.
MassShift mass_shift_static(const PhysicalConfig& cfg, double phi_squared_input,
                            std::string cutoff_descriptor = {});

// hbar w0^8 R^6 / (1296 pi M c^8). Sets *warn when w0 R / c > 0.1.
double gamma_sphere(const PhysicalConfig& cfg, double radius, bool* warn = nullptr);

// Time kernels (w0 and t explicit). Near w = w0 the sin(xt)/x and
// (1-cos(xt))/x factors switch to their Taylor forms.
namespace kernels {
double f_ss(double omega, double omega0, double t);  // damping
double f_cc(double omega, double omega0, double t);  // position diffusion
double f_sc(double omega, double omega0, double t);  // cross diffusion D2
double f_cs(double omega, double omega0, double t);  // mass shift
}  // namespace kernels

struct TraceOptions {
    osc::PanelOptions panels{};
    // Spectral integrals are fitted up to cutoff_factor * max(w0, Omega); the
    // remainder is added from the local power law of the integrand.
    double cutoff_factor{1e6};
    QuadOptions quad{};
};

struct CoefficientTrace {
    std::vector<double> times;
    std::vector<double> gamma, d1, d2, delta_m2;
    std::vector<double> gamma_error, d1_error, d2_error, delta_m2_error;
    double asymptotic_gamma{0.0};
    double asymptotic_d1{0.0};
    double asymptotic_d2{0.0};
    double asymptotic_delta_m2{0.0};
    PhysicalConfig config{};

    // Largest |c(t)/c(inf) - 1| over the last 10% of the grid (gamma, d1).
    double tail_deviation_gamma{0.0};
    double tail_deviation_d1{0.0};
    bool tail_checked{false};
    // Peak of the early D1 transient.
    double d1_peak{0.0};
    double d1_peak_time{0.0};
    std::vector<std::string> warnings;
};

// Evaluates the four coefficients on `times` (starting at 0, increasing).
// The finite-temperature spectrum grows as 1/w at small w, which makes the
// diffusion integrals diverge; only T = 0 is accepted.
CoefficientTrace coefficient_trace(const PhysicalConfig& cfg, const std::vector<double>& times,
                                   const TraceOptions& opts = {});

// Piecewise-linear interpolation of a trace column; clamps to the last sample.
double interpolate_trace(const std::vector<double>& times, const std::vector<double>& values, double t);

// Mean of `values` over [t_last - window, t_last] (trapezoid rule).
double tail_average(const std::vector<double>& times, const std::vector<double>& values, double window);

// Angular frequency of oscillation about `level` over [t_from, t_last],
// from the spacing of level crossings. Returns 0 when fewer than 3 crossings.
double oscillation_frequency(const std::vector<double>& times, const std::vector<double>& values,
                             double level, double t_from);

// CSV t,gamma,d1,d2,delta_m2 and JSON sidecar with asymptotes and config.
void write_trace_csv(const std::filesystem::path& path, const CoefficientTrace& trace);
nlohmann::json trace_sidecar(const CoefficientTrace& trace);
nlohmann::json config_to_json(const PhysicalConfig& cfg);

}  // namespace casdec
