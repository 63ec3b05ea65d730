#include "casdec/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include <gsl/gsl_sf_expint.h>

#include "casdec/io.hpp"
#include "casdec/quadrature.hpp"
#include "casdec/spectral.hpp"

namespace casdec {

double gamma_asymptotic(const PhysicalConfig& cfg, const QuadOptions& opts) {
    cfg.validate();
    return cfg.omega0 * xi_total(cfg.omega0, cfg, opts) / (4.0 * cfg.mass * cfg.hbar);
}

double gamma_closed_form_vacuum(const PhysicalConfig& cfg) {
    cfg.validate();
    if (cfg.temperature != 0.0)
        throw std::domain_error("gamma_closed_form_vacuum: only defined at T = 0");
    return cfg.hbar * cfg.transparency * cfg.omega0 * zeta(cfg.omega0 / cfg.transparency) /
           (2.0 * pi * cfg.mass);
}

double d1_asymptotic(const PhysicalConfig& cfg, const QuadOptions& opts) {
    cfg.validate();
    return sigma_total(cfg.omega0, cfg, opts) / (4.0 * cfg.mass * cfg.mass);
}

namespace {

// int_W^inf g, extrapolating the local power law of g at W.
double power_law_tail(const std::function<double(double)>& g, double W) {
    double g1 = g(W);
    if (g1 == 0.0) return 0.0;
    double g0 = g(0.5 * W);
    double p = std::log2(g0 / g1);
    if (!(p > 1.05))
        throw ConvergenceError("spectral integrand does not decay fast enough for a tail estimate",
                               std::abs(g1 * W));
    return g1 * W / (p - 1.0);
}

// int_0^inf a(w) [1/(w+w0) + s/(w-w0)] / 2 dw, principal value at w0.
Estimate pv_combination(const std::function<double(double)>& a, double w0, double s,
                        std::vector<double> breaks, const QuadOptions& opts) {
    double scale = w0;
    for (double b : breaks) scale = std::max(scale, b);
    const double W = 1e6 * scale;
    breaks.push_back(w0);

    auto near = [&](double w) { return a(w) / (2.0 * (w + w0)); };
    std::vector<double> inner;
    for (double b : breaks)
        if (b > 0.0 && b < 2.0 * w0) inner.push_back(b);
    auto r1 = quad::integrate_or_throw(near, 0.0, 2.0 * w0, inner, opts, "pv (w+w0) part");

    // Mirrored nodes: w = w0 +- x pairs the two sides of the pole.
    auto mirrored = [&](double x) { return 0.5 * (a(w0 + x) - a(w0 - x)) / x; };
    std::vector<double> mbreaks;
    for (double b : breaks) mbreaks.push_back(std::abs(b - w0));
    auto r2 = quad::integrate_or_throw(mirrored, 0.0, w0, mbreaks, opts, "pv symmetric part");

    auto far = [&](double w) { return 0.5 * a(w) * (1.0 / (w + w0) + s / (w - w0)); };
    std::vector<double> fbreaks;
    for (double b : breaks)
        if (b > 2.0 * w0) fbreaks.push_back(b);
    auto r3 = quad::integrate_or_throw(far, 2.0 * w0, W, fbreaks, opts, "pv outer part");
    double tail = power_law_tail(far, W);

    return {r1.value + s * r2.value + r3.value + tail,
            r1.error + r2.error + r3.error + 0.01 * std::abs(tail)};
}

void require_vacuum(const PhysicalConfig& cfg, const char* what) {
    if (cfg.temperature != 0.0)
        throw std::domain_error(std::string(what) +
                                ": the thermal spectrum grows as 1/w at small w and the integral "
                                "diverges; only T = 0 is supported");
}

}  // namespace

Estimate d2_asymptotic_pv(const std::function<double(double)>& sigma, double omega0, double mass,
                          const std::vector<double>& breakpoints, const QuadOptions& opts) {
    if (!(omega0 > 0.0) || !(mass > 0.0))
        throw std::invalid_argument("d2_asymptotic_pv: omega0 and mass must be positive");
    auto r = pv_combination(sigma, omega0, -1.0, breakpoints, opts);
    double pref = omega0 / (2.0 * pi * mass);
    return {pref * r.value, pref * r.error};
}

Estimate d2_asymptotic_pv(const PhysicalConfig& cfg, const QuadOptions& opts) {
    cfg.validate();
    require_vacuum(cfg, "d2_asymptotic_pv");
    auto sigma = [&](double w) { return xi_vacuum(w, cfg); };
    return d2_asymptotic_pv(sigma, cfg.omega0, cfg.mass,
                            {cfg.transparency, 3.0 * cfg.transparency}, opts);
}

Estimate delta_m2_asymptotic_pv(const PhysicalConfig& cfg, const QuadOptions& opts) {
    cfg.validate();
    require_vacuum(cfg, "delta_m2_asymptotic_pv");
    auto xi = [&](double w) { return xi_vacuum(w, cfg); };
    auto r = pv_combination(xi, cfg.omega0, 1.0, {cfg.transparency, 3.0 * cfg.transparency}, opts);
    double pref = 1.0 / (pi * cfg.hbar);
    return {pref * r.value, pref * r.error};
}

MassShift mass_shift_static(const PhysicalConfig& cfg, double phi_squared_input,
                            std::string cutoff_descriptor) {
    cfg.validate();
    if (!(phi_squared_input >= 0.0))
        throw std::invalid_argument("mass_shift_static: <phi^2> must be non-negative");
    return {cfg.transparency * phi_squared_input, phi_squared_input, std::move(cutoff_descriptor)};
}

double gamma_sphere(const PhysicalConfig& cfg, double radius, bool* warn) {
    cfg.validate();
    if (!(radius >= 0.0)) throw std::invalid_argument("gamma_sphere: radius must be >= 0");
    double x = cfg.omega0 * radius / cfg.speed_of_light;
    if (warn) *warn = x > 0.1;
    return cfg.hbar * cfg.omega0 * cfg.omega0 * std::pow(x, 6) / (1296.0 * pi * cfg.mass);
}

namespace kernels {

namespace {
double sx(double x, double t) {
    if (std::abs(x) * t < 1e-4) return t / 2.0 - x * x * t * t * t / 12.0;
    return std::sin(x * t) / (2.0 * x);
}
double cx(double x, double t) {
    if (std::abs(x) * t < 1e-4) return x * t * t / 4.0 - x * x * x * t * t * t * t / 48.0;
    double s = std::sin(0.5 * x * t);
    return s * s / x;
}
}  // namespace

double f_ss(double w, double w0, double t) { return sx(w - w0, t) - sx(w + w0, t); }
double f_cc(double w, double w0, double t) { return sx(w - w0, t) + sx(w + w0, t); }
double f_sc(double w, double w0, double t) { return cx(w + w0, t) - cx(w - w0, t); }
double f_cs(double w, double w0, double t) { return cx(w + w0, t) + cx(w - w0, t); }

}  // namespace kernels

namespace {

// Fourier data of one amplitude g on [lo, W] plus its tail beyond W.
struct PanelSet {
    osc::LegendrePanels panels;
    std::function<double(double)> g;
    double shift{0.0};
    double upper{0.0};
    double tail_integral{0.0};
    bool has_tail{false};

    double integral() const { return panels.integral() + tail_integral; }

    // int g e^{i(w-shift)t} dw and an error bound
    std::complex<double> fourier(double t, double* err) const {
        std::complex<double> v = panels.fourier(t, shift);
        *err = panels.error_bound();
        if (has_tail) {
            // Leading integration-by-parts term of the tail beyond W,
            // never larger than the tail of the plain integral.
            double ph = (upper - shift) * t;
            double mag = g(upper) / t;
            if (std::abs(mag) > std::abs(tail_integral)) mag = std::copysign(tail_integral, mag);
            std::complex<double> tail = std::complex<double>(0.0, mag) *
                                        std::complex<double>(std::cos(ph), std::sin(ph));
            v += tail;
            *err += std::abs(tail) * std::min(1.0, 2.0 / (upper * t)) + 0.01 * std::abs(tail_integral);
        }
        return v;
    }
};

}  // namespace

CoefficientTrace coefficient_trace(const PhysicalConfig& cfg, const std::vector<double>& times,
                                   const TraceOptions& opts) {
    cfg.validate();
    require_vacuum(cfg, "coefficient_trace");
    if (times.empty() || times.front() != 0.0)
        throw std::invalid_argument("coefficient_trace: time grid must start at 0");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw std::invalid_argument("coefficient_trace: time grid must be strictly increasing");

    const double w0 = cfg.omega0, Om = cfg.transparency;
    const double W = opts.cutoff_factor * std::max(w0, Om);
    auto a = [&](double w) { return xi_vacuum(w, cfg); };
    const double a0 = a(w0);

    std::vector<double> edges{Om, 3.0 * Om, w0, 2.0 * w0};

    PanelSet plus;
    plus.g = [=](double w) { return a(w) / (2.0 * (w + w0)); };
    plus.panels = osc::LegendrePanels(plus.g, 0.0, W, edges, opts.panels);
    plus.shift = -w0;
    plus.upper = W;
    plus.tail_integral = power_law_tail(plus.g, W);
    plus.has_tail = true;

    PanelSet near;
    near.g = [=](double w) { return (a(w) - a0) / (2.0 * (w - w0)); };
    near.panels = osc::LegendrePanels(near.g, 0.0, 2.0 * w0, edges, opts.panels);
    near.shift = w0;

    PanelSet minus;
    minus.g = [=](double w) { return a(w) / (2.0 * (w - w0)); };
    minus.panels = osc::LegendrePanels(minus.g, 2.0 * w0, W, edges, opts.panels);
    minus.shift = w0;
    minus.upper = W;
    minus.tail_integral = power_law_tail(minus.g, W);
    minus.has_tail = true;

    CoefficientTrace tr;
    tr.config = cfg;
    tr.times = times;
    const std::size_t n = times.size();
    for (auto* v : {&tr.gamma, &tr.d1, &tr.d2, &tr.delta_m2, &tr.gamma_error, &tr.d1_error,
                    &tr.d2_error, &tr.delta_m2_error})
        v->assign(n, 0.0);

    const double pg = w0 / (2.0 * pi * cfg.mass * cfg.hbar);
    const double pd1 = 1.0 / (2.0 * pi * cfg.mass * cfg.mass);
    const double pd2 = w0 / (2.0 * pi * cfg.mass);
    const double pm = 1.0 / (pi * cfg.hbar);
    const double i_plus = plus.integral();
    const double i_minus = near.integral() + minus.integral();

#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < n; ++i) {
        const double t = times[i];
        if (t == 0.0) continue;
        double e_p, e_n, e_m;
        auto fp = plus.fourier(t, &e_p);
        auto fn = near.fourier(t, &e_n);
        auto fm = minus.fourier(t, &e_m);
        const double s_plus = fp.imag();
        const double c_plus = i_plus - fp.real();
        const double s_minus = fn.imag() + fm.imag() + a0 * gsl_sf_Si(w0 * t);
        const double c_minus = i_minus - fn.real() - fm.real();
        const double ep = e_p, em = e_n + e_m;
        tr.gamma[i] = pg * (s_minus - s_plus);
        tr.d1[i] = pd1 * (s_minus + s_plus);
        tr.d2[i] = pd2 * (c_plus - c_minus);
        tr.delta_m2[i] = pm * (c_plus + c_minus);
        tr.gamma_error[i] = pg * (ep + em);
        tr.d1_error[i] = pd1 * (ep + em);
        tr.d2_error[i] = pd2 * 2.0 * (ep + em);
        tr.delta_m2_error[i] = pm * 2.0 * (ep + em);
    }

    tr.asymptotic_gamma = gamma_asymptotic(cfg, opts.quad);
    tr.asymptotic_d1 = d1_asymptotic(cfg, opts.quad);
    tr.asymptotic_d2 = d2_asymptotic_pv(cfg, opts.quad).value;
    tr.asymptotic_delta_m2 = delta_m2_asymptotic_pv(cfg, opts.quad).value;

    // The panel integrals give the same limits by a different route.
    double d2_panels = pd2 * (i_plus - i_minus);
    if (std::abs(d2_panels - tr.asymptotic_d2) > 1e-6 * std::abs(tr.asymptotic_d2) + 1e-14)
        tr.warnings.push_back("D2 limit from panels differs from the principal-value quadrature");

    for (std::size_t i = 0; i < n; ++i) {
        if (tr.d1[i] > tr.d1_peak) {
            tr.d1_peak = tr.d1[i];
            tr.d1_peak_time = times[i];
        }
    }

    std::size_t first = n - std::max<std::size_t>(1, n / 10);
    for (std::size_t i = first; i < n; ++i) {
        tr.tail_deviation_gamma =
            std::max(tr.tail_deviation_gamma, std::abs(tr.gamma[i] / tr.asymptotic_gamma - 1.0));
        tr.tail_deviation_d1 = std::max(tr.tail_deviation_d1, std::abs(tr.d1[i] / tr.asymptotic_d1 - 1.0));
    }
    tr.tail_checked = times.back() > 20.0 / w0 && Om > w0;
    if (tr.tail_checked && (tr.tail_deviation_gamma > 0.01 || tr.tail_deviation_d1 > 0.01))
        tr.warnings.push_back("trace has not settled within 1% of its asymptote on the last 10% of the grid");
    return tr;
}

double interpolate_trace(const std::vector<double>& times, const std::vector<double>& values, double t) {
    if (times.empty()) throw std::invalid_argument("interpolate_trace: empty trace");
    if (t <= times.front()) return values.front();
    if (t >= times.back()) return values.back();
    auto it = std::upper_bound(times.begin(), times.end(), t);
    std::size_t j = static_cast<std::size_t>(it - times.begin());
    double f = (t - times[j - 1]) / (times[j] - times[j - 1]);
    return values[j - 1] + f * (values[j] - values[j - 1]);
}

double tail_average(const std::vector<double>& times, const std::vector<double>& values, double window) {
    double t1 = times.back(), t0 = t1 - window;
    double acc = 0.0;
    for (std::size_t i = 1; i < times.size(); ++i) {
        double lo = std::max(times[i - 1], t0), hi = times[i];
        if (hi <= lo) continue;
        double vl = interpolate_trace(times, values, lo), vh = values[i];
        acc += 0.5 * (vl + vh) * (hi - lo);
    }
    return acc / std::min(window, t1 - times.front());
}

double oscillation_frequency(const std::vector<double>& times, const std::vector<double>& values,
                             double level, double t_from) {
    std::vector<double> crossings;
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (times[i - 1] < t_from) continue;
        double u = values[i - 1] - level, v = values[i] - level;
        if ((u < 0.0 && v >= 0.0) || (u >= 0.0 && v < 0.0))
            crossings.push_back(times[i - 1] + (times[i] - times[i - 1]) * u / (u - v));
    }
    if (crossings.size() < 3) return 0.0;
    return pi * static_cast<double>(crossings.size() - 1) / (crossings.back() - crossings.front());
}

nlohmann::json config_to_json(const PhysicalConfig& cfg) {
    return {{"mass", cfg.mass},
            {"omega0", cfg.omega0},
            {"transparency", cfg.transparency},
            {"temperature", cfg.temperature},
            {"hbar", cfg.hbar},
            {"speed_of_light", cfg.speed_of_light}};
}

void write_trace_csv(const std::filesystem::path& path, const CoefficientTrace& trace) {
    io::write_csv_columns(path, {"t", "gamma", "d1", "d2", "delta_m2"},
                          {&trace.times, &trace.gamma, &trace.d1, &trace.d2, &trace.delta_m2});
}

nlohmann::json trace_sidecar(const CoefficientTrace& tr) {
    const auto& c = tr.config;
    double gamma_perfect = c.hbar * c.omega0 * c.omega0 / (12.0 * pi * c.mass);
    double d1_perfect = c.hbar * c.hbar * c.omega0 / (12.0 * pi * c.mass * c.mass);
    double gamma_ht = c.hbar * c.transparency * c.transparency * std::log(c.omega0 / c.transparency) /
                      (2.0 * pi * c.mass);
    nlohmann::json j;
    j["config"] = config_to_json(c);
    j["asymptotes"] = {{"gamma", tr.asymptotic_gamma},
                       {"d1", tr.asymptotic_d1},
                       {"d2", tr.asymptotic_d2},
                       {"delta_m2", tr.asymptotic_delta_m2}};
    j["caption_formulas"] = {
        {"gamma_perfect_mirror", {{"formula", "hbar*omega0^2/(12*pi*M)"}, {"value", gamma_perfect}}},
        {"d1_perfect_mirror", {{"formula", "hbar^2*omega0/(12*pi*M^2)"}, {"value", d1_perfect}}},
        {"gamma_high_transmission",
         {{"formula", "hbar*Omega^2*ln(omega0/Omega)/(2*pi*M)"}, {"value", gamma_ht}}},
        {"gamma_closed_form",
         {{"formula", "hbar*Omega*omega0*zeta(omega0/Omega)/(2*pi*M)"},
          {"value", gamma_closed_form_vacuum(c)}}}};
    j["diagnostics"] = {{"tail_checked", tr.tail_checked},
                        {"tail_deviation_gamma", tr.tail_deviation_gamma},
                        {"tail_deviation_d1", tr.tail_deviation_d1},
                        {"d1_peak", tr.d1_peak},
                        {"d1_peak_time", tr.d1_peak_time},
                        {"warnings", tr.warnings}};
    return j;
}

}  // namespace casdec
