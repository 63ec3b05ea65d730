#include "casdec/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "casdec/io.hpp"
#include "casdec/quadrature.hpp"

namespace casdec {

std::complex<double> reflection_amplitude(double omega, double transparency) {
    using namespace std::complex_literals;
    return -1i * transparency / (omega + 1i * transparency);
}

double zeta(double u) {
    if (!(u > 0.0)) throw std::domain_error("zeta: argument must be positive");
    if (u < 0.1) {
        // sum_k (-1)^{k+1} u^{2k-1} / (2k(2k+1)); ten terms reach double precision at u = 0.1
        double u2 = u * u, term = u, sum = 0.0;
        for (int k = 1; k <= 10; ++k) {
            double t = term / (2.0 * k * (2.0 * k + 1.0));
            sum += (k % 2 == 1) ? t : -t;
            term *= u2;
        }
        return sum;
    }
    double log_term = u > 1.0 ? (2.0 * std::log(u) + std::log1p(1.0 / (u * u))) / (2.0 * u)
                              : std::log1p(u * u) / (2.0 * u);
    return log_term + std::atan(u) / (u * u) - 1.0 / u;
}

double xi_vacuum(double omega, const PhysicalConfig& cfg) {
    if (omega == 0.0) return 0.0;
    double s = omega > 0.0 ? 1.0 : -1.0;
    return s * (2.0 / pi) * cfg.hbar * cfg.hbar * cfg.transparency *
           zeta(std::abs(omega) / cfg.transparency);
}

double thermal_photon_number(double omega, double temperature, double hbar) {
    if (temperature == 0.0) return 0.0;
    return 1.0 / std::expm1(hbar * omega / temperature);
}

namespace {

// x * n_x, continuous at x = 0 where it equals T/hbar.
double x_times_n(double x, double temperature, double hbar) {
    if (temperature == 0.0) return 0.0;
    if (x == 0.0) return temperature / hbar;
    return x / std::expm1(hbar * x / temperature);
}

}  // namespace

double g_kernel(double omega, double omega_p, double temperature, double hbar) {
    double d = omega_p - omega;
    return x_times_n(std::abs(d), temperature, hbar) -
           d * thermal_photon_number(omega_p, temperature, hbar);
}

Estimate xi_thermal(double omega, const PhysicalConfig& cfg, const QuadOptions& opts) {
    if (!(omega > 0.0)) throw std::domain_error("xi_thermal: omega must be positive");
    if (!(cfg.temperature > 0.0)) throw std::domain_error("xi_thermal: temperature must be positive");
    const double T = cfg.temperature, hb = cfg.hbar, W = cfg.transparency;
    const double theta = T / hb;

    // w'[G(w,w') - G(-w,w')] expanded so that the 1/w' poles of n_{w'} cancel analytically.
    auto f = [&](double wp) {
        double num = wp * (x_times_n(std::abs(wp - omega), T, hb) - x_times_n(wp + omega, T, hb)) +
                     2.0 * omega * x_times_n(wp, T, hb);
        return num / (wp * wp + W * W);
    };

    const double a = 40.0 * theta;
    const double upper = omega + a;
    const double breaks[] = {omega, W, theta};
    auto r = quad::integrate_or_throw(f, 0.0, upper, breaks, opts, "xi_thermal");

    const double pref = 2.0 * hb * hb * W * W / (pi * omega * omega);
    // Beyond w + 40T/hbar every Bose factor is below e^{-40}.
    double tail = (1.0 + 2.0 * omega / upper) * theta * (a + theta) * std::exp(-a / theta) / upper;
    return {pref * r.value, pref * (r.error + tail)};
}

double sigma_from_fdt(double omega, double xi_value, double temperature, double hbar) {
    if (omega == 0.0) throw std::domain_error("sigma_from_fdt: omega must be nonzero");
    if (temperature == 0.0) return omega > 0.0 ? xi_value : -xi_value;
    return xi_value / std::tanh(hbar * omega / (2.0 * temperature));
}

double xi_total(double omega, const PhysicalConfig& cfg, const QuadOptions& opts) {
    if (omega == 0.0) return 0.0;
    double v = xi_vacuum(omega, cfg);
    if (cfg.temperature > 0.0) {
        double th = xi_thermal(std::abs(omega), cfg, opts).value;
        v += omega > 0.0 ? th : -th;
    }
    return v;
}

double sigma_total(double omega, const PhysicalConfig& cfg, const QuadOptions& opts) {
    return sigma_from_fdt(omega, xi_total(omega, cfg, opts), cfg.temperature, cfg.hbar);
}

SpectralTable make_spectral_table(const std::vector<double>& frequencies, const PhysicalConfig& cfg,
                                  const QuadOptions& opts) {
    cfg.validate();
    if (frequencies.empty()) throw std::invalid_argument("make_spectral_table: no frequencies");
    for (std::size_t i = 0; i < frequencies.size(); ++i) {
        if (!(frequencies[i] > 0.0))
            throw std::invalid_argument("make_spectral_table: frequencies must be positive");
        if (i > 0 && !(frequencies[i] > frequencies[i - 1]))
            throw std::invalid_argument("make_spectral_table: frequencies must be strictly increasing");
    }
    SpectralTable t;
    t.frequencies = frequencies;
    t.temperature = cfg.temperature;
    t.xi_values.resize(frequencies.size());
    t.sigma_values.resize(frequencies.size());
    for (std::size_t i = 0; i < frequencies.size(); ++i) {
        t.xi_values[i] = xi_total(frequencies[i], cfg, opts);
        t.sigma_values[i] = sigma_from_fdt(frequencies[i], t.xi_values[i], cfg.temperature, cfg.hbar);
    }
    std::size_t n = frequencies.size();
    if (n >= 2 && t.xi_values[n - 1] > 0.0 && t.xi_values[n - 2] > 0.0)
        t.tail_exponent = std::log(t.xi_values[n - 1] / t.xi_values[n - 2]) /
                          std::log(frequencies[n - 1] / frequencies[n - 2]);
    return t;
}

void write_spectral_csv(const std::filesystem::path& path, const SpectralTable& table) {
    io::write_csv_columns(path, {"omega", "xi", "sigma"},
                          {&table.frequencies, &table.xi_values, &table.sigma_values});
}

}  // namespace casdec
