#include "casdec/thermal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "casdec/io.hpp"
#include "casdec/quadrature.hpp"

namespace casdec {

void MirrorGeometry::validate() const {
    if (kind == Kind::sphere && !(radius > 0.0)) throw std::invalid_argument("MirrorGeometry: sphere needs radius > 0");
    if (kind == Kind::plate && !(area > 0.0)) throw std::invalid_argument("MirrorGeometry: plate needs area > 0");
    if (!(cutoff > 0.0)) throw std::invalid_argument("MirrorGeometry: cutoff must be positive");
}

namespace {

// int_0^inf |R(x T / hbar)|^2 x^k / (e^x - 1) dx
Estimate bose_moment(int k, double omega_cut_scaled, const QuadOptions& opts) {
    auto f = [&](double x) {
        if (x == 0.0) return k == 1 ? 1.0 : 0.0;
        double r2 = std::isinf(omega_cut_scaled) ? 1.0
                                                 : omega_cut_scaled * omega_cut_scaled /
                                                       (x * x + omega_cut_scaled * omega_cut_scaled);
        return r2 * std::pow(x, k) / std::expm1(x);
    };
    // e^-80 x^3 is far below double resolution of the total
    const double top = 80.0;
    std::vector<double> breaks{1.0, 5.0, 20.0};
    if (!std::isinf(omega_cut_scaled) && omega_cut_scaled < top) breaks.push_back(omega_cut_scaled);
    std::sort(breaks.begin(), breaks.end());
    auto r = quad::integrate_or_throw(f, 0.0, top, breaks, opts, "reflected_power");
    return {r.value, r.error};
}

}  // namespace

Estimate reflected_power(double temperature, const MirrorGeometry& g, double hbar, double c, const QuadOptions& opts) {
    g.validate();
    if (temperature < 0.0) throw std::invalid_argument("reflected_power: temperature must be >= 0");
    if (temperature == 0.0) return {0.0, 0.0};
    const double scaled_cut = g.cutoff * hbar / temperature;
    const double tw = temperature / hbar;
    switch (g.kind) {
        case MirrorGeometry::Kind::line: {
            if (std::isinf(scaled_cut)) return {pi * temperature * temperature / (6.0 * hbar), 0.0};
            auto m = bose_moment(1, scaled_cut, opts);
            double pref = hbar * tw * tw / pi;
            return {pref * m.value, pref * m.error};
        }
        case MirrorGeometry::Kind::plate: {
            double pref = hbar * g.area / (pi * pi * c * c) * std::pow(tw, 4);
            if (std::isinf(scaled_cut)) return {pref * std::pow(pi, 4) / 15.0, 0.0};
            auto m = bose_moment(3, scaled_cut, opts);
            return {pref * m.value, pref * m.error};
        }
        case MirrorGeometry::Kind::sphere:
            break;
    }
    throw std::invalid_argument("reflected_power: thermal sphere damping is not modelled");
}

double doppler_friction(double temperature, const MirrorGeometry& g, double qdot, double hbar, double c) {
    if (qdot == 0.0) return 0.0;
    return -2.0 * reflected_power(temperature, g, hbar, c).value * qdot / (c * c);
}

double gamma_doppler(double temperature, const MirrorGeometry& g, double mass, double hbar, double c) {
    if (!(mass > 0.0)) throw std::invalid_argument("gamma_doppler: mass must be positive");
    return reflected_power(temperature, g, hbar, c).value / (mass * c * c);
}

double gamma_thermal_exact(const PhysicalConfig& cfg, ThermalRegime regime, bool* outside_validity) {
    cfg.validate();
    const double T = cfg.temperature, hw0 = cfg.hbar * cfg.omega0, hW = cfg.hbar * cfg.transparency;
    bool bad = false;
    double g = 0.0;
    if (regime == ThermalRegime::high) {
        bad = T < 10.0 * hW;
        g = cfg.transparency * T / (2.0 * cfg.mass);
    } else {
        bad = T < 10.0 * hw0 || T > 0.1 * hW;
        g = pi * T * T / (3.0 * cfg.mass * cfg.hbar);
    }
    if (outside_validity) *outside_validity = bad;
    return g;
}

double thermal_wavelength(double temperature_kelvin) {
    if (!(temperature_kelvin > 0.0)) throw std::invalid_argument("thermal_wavelength: temperature must be positive");
    return 2.0 * pi * codata::hbar * codata::c / (codata::k_boltzmann * temperature_kelvin);
}

double de_broglie_length(double mass, double temperature, double hbar) {
    if (!(mass > 0.0) || !(temperature > 0.0))
        throw std::invalid_argument("de_broglie_length: mass and temperature must be positive");
    return hbar / std::sqrt(2.0 * mass * temperature);
}

double SIUnits::length() const { return std::sqrt(codata::hbar / (mass_kg * omega0)); }

double plate_gamma_internal(double temperature, double area, double c) {
    return pi * pi / 15.0 * area * std::pow(temperature, 4) / std::pow(c, 4);
}

SIReport plate_decoherence_time(const PlateParams& p) {
    if (!(p.temperature_kelvin > 0.0) || !(p.area_m2 > 0.0) || !(p.delta_q_m > 0.0) || !(p.mass_kg > 0.0))
        throw std::invalid_argument("plate_decoherence_time: T, A, delta_Q and mass must be positive");
    SIReport r;
    r.temperature_kelvin = p.temperature_kelvin;
    r.area_m2 = p.area_m2;
    r.delta_q_m = p.delta_q_m;
    r.mass_kg = p.mass_kg;
    r.omega0 = p.omega0;
    r.lambda_th_m = thermal_wavelength(p.temperature_kelvin);
    const double kT = codata::k_boltzmann * p.temperature_kelvin;
    MirrorGeometry plate{MirrorGeometry::Kind::plate, 0.0, p.area_m2};
    r.gamma_per_s = gamma_doppler(kT, plate, p.mass_kg, codata::hbar, codata::c);
    r.td_coeff_s_m2 = 15.0 * std::pow(r.lambda_th_m, 5) / (32.0 * std::pow(pi, 7) * codata::c * p.area_m2);
    r.td_s = r.td_coeff_s_m2 / (p.delta_q_m * p.delta_q_m);
    r.diffraction_ok = r.lambda_th_m < std::sqrt(p.area_m2);
    r.slow_decoherence_ok = !(p.omega0 > 0.0) || p.omega0 * r.td_s > 10.0;
    return r;
}

nlohmann::json si_report_json(const SIReport& r) {
    return {{"T_kelvin", r.temperature_kelvin},
            {"lambda_th_m", r.lambda_th_m},
            {"gamma_per_s", r.gamma_per_s},
            {"td_coeff_s_m2", r.td_coeff_s_m2},
            {"td_s", r.td_s},
            {"area_m2", r.area_m2},
            {"delta_q_m", r.delta_q_m},
            {"mass_kg", r.mass_kg},
            {"omega0", r.omega0},
            {"flags", {{"diffraction_ok", r.diffraction_ok}, {"slow_decoherence_ok", r.slow_decoherence_ok}}}};
}

void write_thermal_csv(const std::filesystem::path& path, const std::vector<SIReport>& rows) {
    std::vector<std::vector<double>> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back({r.temperature_kelvin, r.lambda_th_m, r.gamma_per_s, r.td_coeff_s_m2});
    io::write_csv(path, {"T_kelvin", "lambda_th_m", "gamma_per_s", "td_coeff_s_m2"}, out);
}

}  // namespace casdec
