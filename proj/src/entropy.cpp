#include "casdec/entropy.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include <boost/math/tools/minima.hpp>

#include "casdec/io.hpp"

namespace casdec {

LinearEntropy linear_entropy(const WignerGrid& w, double hbar) {
    double s2 = 0.0;
    for (double v : w.values) s2 += v * v;
    LinearEntropy r;
    r.value = 1.0 - 2.0 * pi * hbar * s2 * w.dx() * w.dp();
    if (r.value < 0.0) {
        r.flagged = r.value < -1e-6;
        r.clamped = true;
        r.value = 0.0;
    }
    return r;
}

double linear_entropy(const GaussianState& s, double hbar) {
    double det = s.determinant();
    if (!(det > 0.0)) throw std::invalid_argument("linear_entropy: covariance must be positive definite");
    return 1.0 - hbar / (2.0 * std::sqrt(det));
}

double entropy_rate(const GaussianState& s, const FpCoefficients& c, double s_now, double hbar,
                    bool* outside_validity) {
    if (outside_validity) *outside_validity = s_now > 0.1;
    double h2 = hbar * hbar;
    return 2.0 * c.gamma * (s_now - 1.0) + 4.0 * c.d1 * s.var_p / h2 + 2.0 * c.d2 * (2.0 * s.cov_qp) / h2;
}

double entropy_after_period(const GaussianState& initial, double d1, double tau, const PhysicalConfig& cfg,
                            bool* short_tau) {
    if (short_tau) *short_tau = tau < 5.0 * 2.0 * pi / cfg.omega0;
    const double mw = cfg.mass * cfg.omega0;
    double bracket = initial.var_p + mw * mw * initial.var_q - cfg.mass * cfg.hbar * cfg.omega0;
    return 2.0 * tau * d1 / (cfg.hbar * cfg.hbar) * bracket;
}

GaussianState squeezed_state(double r, double phi, const PhysicalConfig& cfg) {
    auto g = cat_geometry(CatStateSpec{}, cfg);
    double ch = std::cosh(2.0 * r), sh = std::sinh(2.0 * r);
    GaussianState s;
    s.var_q = g.dq0 * g.dq0 * (ch - sh * std::cos(2.0 * phi));
    s.var_p = g.dp0 * g.dp0 * (ch + sh * std::cos(2.0 * phi));
    s.cov_qp = -g.dq0 * g.dp0 * sh * std::sin(2.0 * phi);
    return s;
}

SieveResult sieve_minimize(const FpCoefficients& coeffs, const PhysicalConfig& cfg, const SieveOptions& opts) {
    cfg.validate();
    if (!(opts.r_max > 0.0) || opts.n_r < 2 || opts.n_phi < 1)
        throw std::invalid_argument("sieve_minimize: need r_max > 0, n_r >= 2, n_phi >= 1");
    SieveResult res;
    res.tau = opts.tau > 0.0 ? opts.tau : 20.0 * 2.0 * pi / cfg.omega0;
    const double tau = res.tau;

    auto objective = [&](double r, double phi) {
        GaussianState s = squeezed_state(r, phi, cfg);
        if (opts.objective == SieveObjective::closed_form) return entropy_after_period(s, coeffs.d1, tau, cfg);
        auto e = gaussian_moment_evolution(s, constant_coefficients(coeffs), tau, cfg);
        return linear_entropy(e, cfg.hbar);
    };

    std::vector<double> phis(opts.n_phi);
    for (std::size_t j = 0; j < opts.n_phi; ++j) phis[j] = pi * static_cast<double>(j) / opts.n_phi;

    res.scan.resize(opts.n_r * opts.n_phi);
#pragma omp parallel for schedule(static)
    for (std::size_t k = 0; k < res.scan.size(); ++k) {
        std::size_t i = k / opts.n_phi, j = k % opts.n_phi;
        double r = -opts.r_max + 2.0 * opts.r_max * static_cast<double>(i) / (opts.n_r - 1);
        res.scan[k] = {r, phis[j], objective(r, phis[j])};
    }

    struct Best {
        double r, phi, s;
        bool ok;
    };
    std::vector<Best> per_phi(opts.n_phi);
    const int bits = std::numeric_limits<double>::digits / 2;
#pragma omp parallel for schedule(static)
    for (std::size_t j = 0; j < opts.n_phi; ++j) {
        std::uintmax_t iters = 200;
        auto m = boost::math::tools::brent_find_minima([&](double r) { return objective(r, phis[j]); },
                                                       -opts.r_max, opts.r_max, bits, iters);
        per_phi[j] = {m.first, phis[j], m.second, iters < 200};
    }
    std::size_t best = 0;
    for (std::size_t j = 1; j < per_phi.size(); ++j)
        if (per_phi[j].s < per_phi[best].s) best = j;
    res.r = per_phi[best].r;
    res.phi = per_phi[best].phi;
    res.entropy_at_optimum = per_phi[best].s;
    res.converged = per_phi[best].ok;
    auto s = squeezed_state(res.r, res.phi, cfg);
    res.var_q = s.var_q;
    res.var_p = s.var_p;
    res.cov_qp = s.cov_qp;
    return res;
}

void write_sieve_csv(const std::filesystem::path& path, const SieveResult& r) {
    std::vector<std::vector<double>> rows;
    for (const auto& row : r.scan) rows.push_back({row.r, row.phi, row.entropy});
    io::write_csv(path, {"r", "phi", "entropy"}, rows);
}

nlohmann::json sieve_json(const SieveResult& r) {
    return {{"optimum",
             {{"r", r.r}, {"phi", r.phi}, {"var_q", r.var_q}, {"var_p", r.var_p}, {"cov_qp", r.cov_qp}}},
            {"entropy_at_optimum", r.entropy_at_optimum},
            {"tau", r.tau},
            {"converged", r.converged},
            {"tolerances", {{"r", 1e-4}}}};
}

}  // namespace casdec
