#include "casdec/pairs.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "casdec/io.hpp"
#include "casdec/quadrature.hpp"

namespace casdec {

double pair_density_perfect(double omega1, double omega2, double hbar) {
    double s = omega1 + omega2;
    if (s <= 0.0) return 0.0;
    return 2.0 * hbar * hbar / (pi * pi) * omega1 * omega2 / (s * s);
}

PairDensity perfect_mirror_density(double hbar) {
    return {[hbar](double a, double b) { return pair_density_perfect(a, b, hbar); }, "perfect-mirror"};
}

double line_density(double s, const PairDensity& density, const QuadOptions& opts) {
    if (s <= 0.0) return 0.0;
    // w1 = s u keeps the relative error target meaningful for tiny s
    auto f = [&](double u) { return s * density.eval(s * u, s * (1.0 - u)); };
    return quad::integrate_or_throw(f, 0.0, 1.0, {}, opts, "line_density").value;
}

double pair_probability(double omega1, double omega2, double dt, double qdot0, double omega0,
                        const PairDensity& density, double hbar) {
    double nu = omega1 + omega2 - omega0;
    double x = 0.5 * nu * dt;
    double sinc2 = std::abs(x) < 1e-8 ? 0.25 * dt * dt : std::pow(std::sin(x) / nu, 2);
    return qdot0 * qdot0 / (hbar * hbar) * density.eval(omega1, omega2) * sinc2;
}

namespace {

double sinc2(double nu, double dt) {
    double x = 0.5 * nu * dt;
    if (std::abs(x) < 1e-8) return 0.25 * dt * dt;
    double s = std::sin(x) / nu;
    return s * s;
}

}  // namespace

PairRun run_pairs(const PairRunParams& p, const QuadOptions& opts) {
    if (!(p.omega0 > 0.0) || !(p.dt >= 0.0) || !(p.mass > 0.0) || !(p.hbar > 0.0))
        throw std::invalid_argument("run_pairs: omega0, mass, hbar must be positive and dt >= 0");
    PairRun run;
    run.params = p;
    if (p.dt == 0.0 || p.qdot0 == 0.0) return run;

    const double w0 = p.omega0, dt = p.dt;
    run.s_max = w0 + 60.0 * pi / dt;
    const double pref = p.qdot0 * p.qdot0 / (p.hbar * p.hbar);

    // zeros of sin^2(nu dt / 2): s = w0 + 2 pi k / dt
    std::vector<double> zeros;
    const double step = 2.0 * pi / dt;
    for (double k = std::ceil(-w0 / step); w0 + k * step < run.s_max; k += 1.0)
        if (w0 + k * step > 0.0) zeros.push_back(w0 + k * step);

    QuadOptions inner = opts;
    auto L = [&](double s) { return line_density(s, p.density, inner); };
    auto prob = [&](double s) { return L(s) * sinc2(s - w0, dt); };
    auto energy = [&](double s) { return p.hbar * s * L(s) * sinc2(s - w0, dt); };

    auto rp = quad::integrate_or_throw(prob, 0.0, run.s_max, zeros, opts, "pair probability");
    auto re = quad::integrate_or_throw(energy, 0.0, run.s_max, zeros, opts, "radiated energy");
    run.total_probability = pref * rp.value;
    run.total_error = pref * rp.error;
    run.radiated_energy = 0.5 * pref * re.value;
    run.energy_error = 0.5 * pref * re.error;

    const double lo = std::max(0.0, w0 - step), hi = w0 + step;
    const double lobe_breaks[] = {w0};
    auto rl = quad::integrate_or_throw(prob, lo, hi, lobe_breaks, opts, "main lobe");
    run.main_lobe_fraction = rl.value / rp.value;

    // sin^2 averages to 1/2 beyond the window
    auto band = [&](double s) { return 0.5 * L(s) / ((s - w0) * (s - w0)); };
    run.truncation_estimate = pref * quad::integrate(band, run.s_max, run.s_max + w0, opts).value;
    return run;
}

double vacuum_persistence(const PairRun& run, bool* regime_violation) {
    if (regime_violation) *regime_violation = run.total_probability > 2.0;
    return 1.0 - 0.5 * run.total_probability;
}

double radiated_energy(const PairRun& run) { return run.radiated_energy; }

double gamma_from_pairs(const PairRun& run) {
    const auto& p = run.params;
    if (p.omega0 * p.dt < 200.0)
        throw std::domain_error("gamma_from_pairs: requires omega0 * dt >= 200 for the resonance limit");
    return run.radiated_energy / (p.mass * p.qdot0 * p.qdot0 * p.dt);
}

double gamma_from_line(const PairRunParams& p, const QuadOptions& opts) {
    return 0.25 * pi * p.omega0 / (p.mass * p.hbar) * line_density(p.omega0, p.density, opts);
}

double interference_decay(const PairRun& run) {
    if (!(run.params.dt > 0.0)) throw std::domain_error("interference_decay: dt must be positive");
    return run.total_probability / run.params.dt;
}

EntangledSummary entangled_state_summary(const PairRun& run, double alpha_abs) {
    EntangledSummary e;
    e.alpha_abs = alpha_abs;
    e.odd_weight = 0.5 * run.total_probability;
    e.even_weight = 1.0 - e.odd_weight;
    e.interference_weight = e.even_weight - e.odd_weight;
    return e;
}

void write_pairs_csv(const std::filesystem::path& path, const PairRun& run, std::size_t n) {
    if (n < 2) throw std::invalid_argument("write_pairs_csv: need at least 2 points per axis");
    const auto& p = run.params;
    const double top = run.s_max > 0.0 ? run.s_max : 2.0 * p.omega0;
    std::vector<std::vector<double>> rows;
    rows.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        double w1 = top * static_cast<double>(i) / (n - 1);
        for (std::size_t j = 0; j < n; ++j) {
            double w2 = top * static_cast<double>(j) / (n - 1);
            rows.push_back({w1, w2, pair_probability(w1, w2, p.dt, p.qdot0, p.omega0, p.density, p.hbar)});
        }
    }
    io::write_csv(path, {"omega1", "omega2", "prob_density"}, rows);
}

nlohmann::json pairs_summary_json(const PairRun& run) {
    const auto& p = run.params;
    nlohmann::json j{{"omega0", p.omega0},
                     {"qdot0", p.qdot0},
                     {"dt", p.dt},
                     {"mass", p.mass},
                     {"density_regime", p.density.regime},
                     {"s_max", run.s_max},
                     {"total_probability", run.total_probability},
                     {"persistence", vacuum_persistence(run)},
                     {"radiated_energy", run.radiated_energy},
                     {"main_lobe_fraction", run.main_lobe_fraction},
                     {"truncation_estimate", run.truncation_estimate}};
    if (p.dt > 0.0) j["decay_rate"] = interference_decay(run);
    if (p.omega0 * p.dt >= 200.0 && p.qdot0 != 0.0) j["gamma"] = gamma_from_pairs(run);
    return j;
}

}  // namespace casdec
