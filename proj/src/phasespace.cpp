#include "casdec/phasespace.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>

#include <boost/numeric/odeint.hpp>
#include <fftw3.h>

#include "casdec/io.hpp"

namespace casdec {

double WignerGrid::norm() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s * dx() * dp();
}

CatGeometry cat_geometry(const CatStateSpec& spec, const PhysicalConfig& cfg) {
    CatGeometry g;
    g.dq0 = std::sqrt(cfg.hbar / (2.0 * cfg.mass * cfg.omega0));
    g.dp0 = cfg.hbar / (2.0 * g.dq0);
    g.q_alpha = std::sqrt(2.0 * cfg.hbar / (cfg.mass * cfg.omega0)) * spec.alpha.real();
    g.p_alpha = std::sqrt(2.0 * cfg.mass * cfg.hbar * cfg.omega0) * spec.alpha.imag();
    g.p0 = std::sqrt(2.0 * cfg.mass * cfg.hbar * cfg.omega0) * std::abs(spec.alpha);
    return g;
}

GridParams default_grid(const CatStateSpec& spec, const PhysicalConfig& cfg, std::size_t n) {
    auto g = cat_geometry(spec, cfg);
    double units = std::abs(spec.alpha) * std::sqrt(2.0) * 1.5 + 6.0;
    return {n, n, units * g.dq0, units * g.dp0};
}

namespace {

GridParams resolve(GridParams gp, const CatStateSpec& spec, const PhysicalConfig& cfg) {
    auto d = default_grid(spec, cfg, gp.nx);
    if (gp.x_extent <= 0.0) gp.x_extent = d.x_extent;
    if (gp.p_extent <= 0.0) gp.p_extent = d.p_extent;
    if (gp.nx < 8 || gp.np < 8 || gp.nx % 2 || gp.np % 2)
        throw std::invalid_argument("grid sizes must be even and at least 8");
    return gp;
}

WignerGrid empty_grid(const GridParams& gp) {
    WignerGrid w;
    w.nx = gp.nx;
    w.np = gp.np;
    w.x_extent = gp.x_extent;
    w.p_extent = gp.p_extent;
    w.values.assign(gp.nx * gp.np, 0.0);
    return w;
}

}  // namespace

WignerGrid cat_wigner(const CatStateSpec& spec, const GridParams& grid, const PhysicalConfig& cfg) {
    cfg.validate();
    if (spec.parity == Parity::odd && std::abs(spec.alpha) == 0.0)
        throw std::invalid_argument("cat_wigner: the odd cat does not exist at alpha = 0");
    auto gp = resolve(grid, spec, cfg);
    auto g = cat_geometry(spec, cfg);
    const double hb = cfg.hbar;

    if (spec.parity != Parity::mixture && g.p0 > 0.0) {
        // Fringe wavelength pi hbar / P0 in q, and pi hbar M w0 / P0 in p once rotated.
        double lam_q = pi * hb / g.p0;
        double lam_p = lam_q * cfg.mass * cfg.omega0;
        auto need = [](double extent, double lam) {
            auto n = static_cast<std::size_t>(std::ceil(16.0 * extent / lam));
            return n + (n % 2);
        };
        std::size_t nx_req = need(gp.x_extent, lam_q), np_req = need(gp.p_extent, lam_p);
        if (gp.nx < nx_req || gp.np < np_req)
            throw GridTooCoarse("cat_wigner: fewer than 8 points per fringe; need nx >= " +
                                    std::to_string(nx_req) + ", np >= " + std::to_string(np_req),
                                nx_req, np_req);
    }

    auto w = empty_grid(gp);
    const double a2 = std::norm(spec.alpha);
    const double overlap = std::exp(-2.0 * a2);
    const double c = 1.0 / (pi * hb);
    for (std::size_t ip = 0; ip < gp.np; ++ip) {
        double p = w.p(ip);
        for (std::size_t ix = 0; ix < gp.nx; ++ix) {
            double q = w.x(ix);
            auto gauss = [&](double q0, double p0) {
                double u = (q - q0) / g.dq0, v = (p - p0) / g.dp0;
                return c * std::exp(-0.5 * (u * u + v * v));
            };
            double wm = 0.5 * (gauss(g.q_alpha, g.p_alpha) + gauss(-g.q_alpha, -g.p_alpha));
            double val = wm;
            if (spec.parity != Parity::mixture) {
                double interf = gauss(0.0, 0.0) * std::cos(2.0 * (g.p_alpha * q - g.q_alpha * p) / hb);
                val = spec.parity == Parity::even ? (wm + interf) / (1.0 + overlap)
                                                  : (wm - interf) / (1.0 - overlap);
            }
            w.at(ix, ip) = val;
        }
    }
    return w;
}

WignerGrid gaussian_wigner(const GaussianState& s, const GridParams& grid, const PhysicalConfig& cfg) {
    cfg.validate();
    auto gp = resolve(grid, CatStateSpec{}, cfg);
    double det = s.determinant();
    if (!(det > 0.0)) throw std::invalid_argument("gaussian_wigner: covariance must be positive definite");
    auto w = empty_grid(gp);
    const double c = 1.0 / (2.0 * pi * std::sqrt(det));
    for (std::size_t ip = 0; ip < gp.np; ++ip) {
        double p = w.p(ip) - s.mean_p;
        for (std::size_t ix = 0; ix < gp.nx; ++ix) {
            double q = w.x(ix) - s.mean_q;
            double quad = (s.var_p * q * q - 2.0 * s.cov_qp * q * p + s.var_q * p * p) / det;
            w.at(ix, ip) = c * std::exp(-0.5 * quad);
        }
    }
    return w;
}

GaussianState grid_moments(const WignerGrid& w) {
    double m0 = 0, mq = 0, mp = 0, mqq = 0, mpp = 0, mqp = 0;
    for (std::size_t ip = 0; ip < w.np; ++ip) {
        double p = w.p(ip);
        for (std::size_t ix = 0; ix < w.nx; ++ix) {
            double q = w.x(ix), v = w.at(ix, ip);
            m0 += v;
            mq += q * v;
            mp += p * v;
            mqq += q * q * v;
            mpp += p * p * v;
            mqp += q * p * v;
        }
    }
    GaussianState s;
    s.mean_q = mq / m0;
    s.mean_p = mp / m0;
    s.var_q = mqq / m0 - s.mean_q * s.mean_q;
    s.var_p = mpp / m0 - s.mean_p * s.mean_p;
    s.cov_qp = mqp / m0 - s.mean_q * s.mean_p;
    return s;
}

CoefficientSource constant_coefficients(const FpCoefficients& c) {
    return [c](double) { return c; };
}

CoefficientSource trace_coefficients(const CoefficientTrace& trace, bool include_mass_shift) {
    auto tr = std::make_shared<CoefficientTrace>(trace);
    return [tr, include_mass_shift](double t) {
        FpCoefficients c;
        c.gamma = interpolate_trace(tr->times, tr->gamma, t);
        c.d1 = interpolate_trace(tr->times, tr->d1, t);
        c.d2 = interpolate_trace(tr->times, tr->d2, t);
        if (include_mass_shift) c.delta_m = interpolate_trace(tr->times, tr->delta_m2, t);
        return c;
    };
}

double max_stable_dt(const WignerGrid& w, const FpCoefficients& c) {
    // RK4 is stable for |z| <= 2.8 on the imaginary axis and z >= -2.78 on the
    // real axis; the dissipative substep spans dt/2.
    const double k = pi / w.dx();
    double rate = 2.0 * std::abs(c.gamma) * w.x_extent * k / 2.5 + std::abs(c.d1) * k * k / 2.7 +
                  std::abs(c.d2) * k / (w.dp() * 2.5);
    if (rate == 0.0) return std::numeric_limits<double>::infinity();
    return 2.0 / rate;
}

namespace {

std::mutex& fftw_plan_mutex() {
    static std::mutex m;
    return m;
}

// Work buffers and FFTW plans for one grid shape.
class SplitSolver {
public:
    SplitSolver(const WignerGrid& shape, const PhysicalConfig& cfg)
        : nx_(shape.nx), np_(shape.np), dx_(shape.dx()), dp_(shape.dp()), x_extent_(shape.x_extent),
          p_extent_(shape.p_extent), cfg_(cfg) {
        const std::size_t n = nx_ * np_;
        real_ = fftw_alloc_real(n);
        aux_ = fftw_alloc_real(n);
        row_spec_ = fftw_alloc_complex((nx_ / 2 + 1) * np_);
        row_spec2_ = fftw_alloc_complex((nx_ / 2 + 1) * np_);
        col_spec_ = fftw_alloc_complex((np_ / 2 + 1) * nx_);
        int nx = static_cast<int>(nx_), np = static_cast<int>(np_);
        int nxc = nx / 2 + 1;
        std::lock_guard lock(fftw_plan_mutex());
        row_fwd_ = fftw_plan_many_dft_r2c(1, &nx, np, real_, nullptr, 1, nx, row_spec_, nullptr, 1, nxc,
                                          FFTW_ESTIMATE);
        row_fwd_aux_ = fftw_plan_many_dft_r2c(1, &nx, np, aux_, nullptr, 1, nx, row_spec2_, nullptr, 1, nxc,
                                              FFTW_ESTIMATE);
        row_bwd_ = fftw_plan_many_dft_c2r(1, &nx, np, row_spec_, nullptr, 1, nxc, real_, nullptr, 1, nx,
                                          FFTW_ESTIMATE);
        col_fwd_ = fftw_plan_many_dft_r2c(1, &np, nx, real_, nullptr, nx, 1, col_spec_, nullptr, nx, 1,
                                          FFTW_ESTIMATE);
        col_bwd_ = fftw_plan_many_dft_c2r(1, &np, nx, col_spec_, nullptr, nx, 1, real_, nullptr, nx, 1,
                                          FFTW_ESTIMATE);
    }
    ~SplitSolver() {
        {
            std::lock_guard lock(fftw_plan_mutex());
            for (auto p : {row_fwd_, row_fwd_aux_, row_bwd_, col_fwd_, col_bwd_}) fftw_destroy_plan(p);
        }
        fftw_free(real_);
        fftw_free(aux_);
        fftw_free(row_spec_);
        fftw_free(row_spec2_);
        fftw_free(col_spec_);
    }
    SplitSolver(const SplitSolver&) = delete;
    SplitSolver& operator=(const SplitSolver&) = delete;

    // Exact phase-space rotation over dt for the free-flight factor mu.
    void rotate(std::vector<double>& w, double dt, double mu) {
        const double theta = cfg_.omega0 * std::sqrt(mu) * dt;
        const double t = std::tan(0.5 * theta), s = std::sin(theta);
        // y = sqrt(mu) p / (M w0); new W(x, y) = old W at the back-rotated point.
        const double y_of_p = std::sqrt(mu) / (cfg_.mass * cfg_.omega0);
        const double p_of_y = 1.0 / y_of_p;
        std::copy(w.begin(), w.end(), real_);
        shear_rows([&](std::size_t ip) { return -t * y_of_p * (-p_extent_ + ip * dp_); });
        shear_cols([&](std::size_t ix) { return s * p_of_y * (-x_extent_ + ix * dx_); });
        shear_rows([&](std::size_t ip) { return -t * y_of_p * (-p_extent_ + ip * dp_); });
        std::copy(real_, real_ + nx_ * np_, w.begin());
    }

    // out = d/dx [2 gamma x W + d1 dW/dx - d2 dW/dp]
    void dissipative_rhs(const std::vector<double>& w, const FpCoefficients& c, std::vector<double>& out) {
        const std::size_t nxc = nx_ / 2 + 1;
        std::copy(w.begin(), w.end(), real_);
        for (std::size_t ip = 0; ip < np_; ++ip) {
            const double* up = &w[((ip + 1) % np_) * nx_];
            const double* dn = &w[((ip + np_ - 1) % np_) * nx_];
            const double* row = &w[ip * nx_];
            double* g = aux_ + ip * nx_;
            for (std::size_t ix = 0; ix < nx_; ++ix) {
                double x = -x_extent_ + ix * dx_;
                g[ix] = 2.0 * c.gamma * x * row[ix] - c.d2 * (up[ix] - dn[ix]) / (2.0 * dp_);
            }
        }
        fftw_execute(row_fwd_);
        fftw_execute(row_fwd_aux_);
        const double k0 = 2.0 * pi / (nx_ * dx_);
        const double inv_n = 1.0 / static_cast<double>(nx_);
        for (std::size_t ip = 0; ip < np_; ++ip) {
            for (std::size_t m = 0; m < nxc; ++m) {
                double k = k0 * m;
                double* a = row_spec_[ip * nxc + m];
                double* b = row_spec2_[ip * nxc + m];
                double ik = (m == nx_ / 2) ? 0.0 : k;  // odd derivative drops the Nyquist mode
                // i k * b - d1 k^2 * a
                double re = -ik * b[1] - c.d1 * k * k * a[0];
                double im = ik * b[0] - c.d1 * k * k * a[1];
                a[0] = re * inv_n;
                a[1] = im * inv_n;
            }
        }
        fftw_execute(row_bwd_);
        out.assign(real_, real_ + nx_ * np_);
    }

    void dissipative_step(std::vector<double>& w, const FpCoefficients& c, double h) {
        if (c.gamma == 0.0 && c.d1 == 0.0 && c.d2 == 0.0) return;
        const std::size_t n = w.size();
        k1_.resize(n);
        tmp_.resize(n);
        dissipative_rhs(w, c, k1_);
        for (std::size_t i = 0; i < n; ++i) tmp_[i] = w[i] + 0.5 * h * k1_[i];
        dissipative_rhs(tmp_, c, k2_);
        for (std::size_t i = 0; i < n; ++i) tmp_[i] = w[i] + 0.5 * h * k2_[i];
        dissipative_rhs(tmp_, c, k3_);
        for (std::size_t i = 0; i < n; ++i) tmp_[i] = w[i] + h * k3_[i];
        dissipative_rhs(tmp_, c, k4_);
        for (std::size_t i = 0; i < n; ++i) w[i] += h / 6.0 * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
    }

private:
    // Each row ip becomes f(x + shift(ip)); band-limited interpolation.
    template <class Shift>
    void shear_rows(Shift shift) {
        const std::size_t nxc = nx_ / 2 + 1;
        fftw_execute(row_fwd_);
        const double k0 = 2.0 * pi / (nx_ * dx_);
        const double inv_n = 1.0 / static_cast<double>(nx_);
#pragma omp parallel for schedule(static)
        for (std::size_t ip = 0; ip < np_; ++ip) {
            double d = shift(ip);
            for (std::size_t m = 0; m < nxc; ++m) apply_shift(row_spec_[ip * nxc + m], k0 * m * d, m == nx_ / 2, inv_n);
        }
        fftw_execute(row_bwd_);
    }

    template <class Shift>
    void shear_cols(Shift shift) {
        const std::size_t npc = np_ / 2 + 1;
        fftw_execute(col_fwd_);
        const double k0 = 2.0 * pi / (np_ * dp_);
        const double inv_n = 1.0 / static_cast<double>(np_);
#pragma omp parallel for schedule(static)
        for (std::size_t ix = 0; ix < nx_; ++ix) {
            double d = shift(ix);
            for (std::size_t m = 0; m < npc; ++m) apply_shift(col_spec_[m * nx_ + ix], k0 * m * d, m == np_ / 2, inv_n);
        }
        fftw_execute(col_bwd_);
    }

    static void apply_shift(double* z, double phase, bool nyquist, double scale) {
        if (nyquist) {
            // the Nyquist coefficient of real data is real; keep it so
            z[0] *= std::cos(phase) * scale;
            z[1] = 0.0;
            return;
        }
        double c = std::cos(phase), s = std::sin(phase);
        double re = z[0] * c - z[1] * s, im = z[0] * s + z[1] * c;
        z[0] = re * scale;
        z[1] = im * scale;
    }

    std::size_t nx_, np_;
    double dx_, dp_, x_extent_, p_extent_;
    PhysicalConfig cfg_;
    double* real_{nullptr};
    double* aux_{nullptr};
    fftw_complex* row_spec_{nullptr};
    fftw_complex* row_spec2_{nullptr};
    fftw_complex* col_spec_{nullptr};
    fftw_plan row_fwd_{}, row_fwd_aux_{}, row_bwd_{}, col_fwd_{}, col_bwd_{};
    std::vector<double> k1_, k2_, k3_, k4_, tmp_;
};

double boundary_leakage(const WignerGrid& w) {
    const std::size_t bx = std::max<std::size_t>(2, w.nx / 32), bp = std::max<std::size_t>(2, w.np / 32);
    double edge = 0.0, total = 0.0;
    for (std::size_t ip = 0; ip < w.np; ++ip) {
        bool pe = ip < bp || ip >= w.np - bp;
        for (std::size_t ix = 0; ix < w.nx; ++ix) {
            double a = std::abs(w.at(ix, ip));
            total += a;
            if (pe || ix < bx || ix >= w.nx - bx) edge += a;
        }
    }
    return total > 0.0 ? edge / total : 0.0;
}

TrajectorySample sample_of(const WignerGrid& w, double t) {
    return {t, w.origin_value(), w.norm(), grid_moments(w), boundary_leakage(w)};
}

double mu_of(const FpCoefficients& c, const PhysicalConfig& cfg) { return 1.0 - c.delta_m / cfg.mass; }

}  // namespace

Trajectory evolve_fokker_planck(const WignerGrid& initial, const CoefficientSource& coeffs, double t_final,
                                const SolverOptions& opts, const PhysicalConfig& cfg) {
    cfg.validate();
    if (!(t_final >= 0.0)) throw std::invalid_argument("evolve_fokker_planck: t_final must be >= 0");
    if (!(opts.dt > 0.0)) throw std::invalid_argument("evolve_fokker_planck: dt must be positive");
    if (initial.values.size() != initial.nx * initial.np || initial.nx % 2 || initial.np % 2)
        throw std::invalid_argument("evolve_fokker_planck: malformed grid");

    const std::size_t steps = t_final == 0.0 ? 0 : static_cast<std::size_t>(std::ceil(t_final / opts.dt - 1e-9));
    const double dt = steps ? t_final / static_cast<double>(steps) : 0.0;

    Trajectory tr;
    WignerGrid w = initial;
    SplitSolver solver(w, cfg);

    auto record = [&](double t) {
        auto s = sample_of(w, t);
        tr.max_leakage = std::max(tr.max_leakage, s.leakage);
        tr.samples.push_back(s);
    };
    std::vector<double> snaps = opts.snapshot_times;
    std::sort(snaps.begin(), snaps.end());
    std::size_t next_snap = 0;
    auto maybe_snapshot = [&](double t) {
        while (next_snap < snaps.size() && snaps[next_snap] <= t + 0.5 * dt) {
            tr.snapshot_times.push_back(t);
            tr.snapshots.push_back(w);
            ++next_snap;
        }
    };

    record(0.0);
    maybe_snapshot(0.0);
    double next_sample = opts.sample_interval;
    for (std::size_t n = 0; n < steps; ++n) {
        const double t0 = n * dt;
        FpCoefficients c1 = coeffs(t0 + 0.25 * dt), cm = coeffs(t0 + 0.5 * dt), c2 = coeffs(t0 + 0.75 * dt);
        for (const auto* c : {&c1, &c2}) {
            double lim = max_stable_dt(w, *c);
            if (dt > lim)
                throw CflViolation("evolve_fokker_planck: dt = " + io::format_double(dt) +
                                       " exceeds the stability limit " + io::format_double(lim),
                                   lim);
        }
        double mu = mu_of(cm, cfg);
        if (!(mu > 0.0)) throw std::domain_error("evolve_fokker_planck: mass correction makes 1 - dM/M <= 0");
        solver.dissipative_step(w.values, c1, 0.5 * dt);
        solver.rotate(w.values, dt, mu);
        solver.dissipative_step(w.values, c2, 0.5 * dt);
        const double t = (n + 1 == steps) ? t_final : (n + 1) * dt;
        if (opts.sample_interval <= 0.0 || t >= next_sample - 1e-9 * dt || n + 1 == steps) {
            record(t);
            while (opts.sample_interval > 0.0 && next_sample <= t + 1e-9 * dt) next_sample += opts.sample_interval;
        }
        maybe_snapshot(t);
    }
    tr.steps = steps;
    tr.leakage_flagged = tr.max_leakage > opts.leakage_threshold;
    tr.final_state = std::move(w);
    return tr;
}

GaussianState gaussian_moment_evolution(const GaussianState& state, const CoefficientSource& coeffs, double t,
                                        const PhysicalConfig& cfg, double t0) {
    cfg.validate();
    using State = std::array<double, 5>;  // q, p, Vq, Vp, C
    const double M = cfg.mass, w2 = cfg.omega0 * cfg.omega0;
    auto rhs = [&](const State& s, State& d, double time) {
        FpCoefficients c = coeffs(time);
        double mu = mu_of(c, cfg);
        d[0] = mu * s[1] / M - 2.0 * c.gamma * s[0];
        d[1] = -M * w2 * s[0];
        d[2] = 2.0 * mu * s[4] / M - 4.0 * c.gamma * s[2] + 2.0 * c.d1;
        d[3] = -2.0 * M * w2 * s[4];
        d[4] = mu * s[3] / M - M * w2 * s[2] - 2.0 * c.gamma * s[4] - c.d2;
    };
    State x{state.mean_q, state.mean_p, state.var_q, state.var_p, state.cov_qp};
    if (t != t0) {
        namespace odeint = boost::numeric::odeint;
        auto stepper = odeint::make_controlled(1e-13, 1e-13, odeint::runge_kutta_dopri5<State>());
        double h = 0.01 / cfg.omega0 * (t > t0 ? 1.0 : -1.0);
        odeint::integrate_adaptive(stepper, rhs, x, t0, t, h);
    }
    for (double v : x)
        if (!std::isfinite(v)) throw ConvergenceError("gaussian_moment_evolution: solution is not finite", 0.0);
    return {x[0], x[1], x[2], x[3], x[4]};
}

CoherenceSeries coherence_factor(const Trajectory& cat, const Trajectory& mixture, double td_predicted,
                                 const PhysicalConfig& cfg) {
    if (cat.samples.size() != mixture.samples.size() || cat.samples.empty())
        throw std::invalid_argument("coherence_factor: trajectories must share their sample times");
    CoherenceSeries s;
    const double denom = cat.samples.front().origin_value - mixture.samples.front().origin_value;
    const bool degenerate = std::abs(denom) <= 1e-12 * std::abs(cat.samples.front().origin_value) ||
                            denom == 0.0;
    for (std::size_t i = 0; i < cat.samples.size(); ++i) {
        if (std::abs(cat.samples[i].t - mixture.samples[i].t) > 1e-9 * (1.0 + std::abs(cat.samples[i].t)))
            throw std::invalid_argument("coherence_factor: trajectories must share their sample times");
        s.t.push_back(cat.samples[i].t);
        s.c.push_back(degenerate ? 0.0 : (cat.samples[i].origin_value - mixture.samples[i].origin_value) / denom);
    }

    s.window_start = 2.0 * pi / cfg.omega0;
    s.window_end = std::min(s.t.back(), 3.0 * td_predicted);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < s.t.size(); ++i) {
        if (s.t[i] < s.window_start || s.t[i] > s.window_end || !(s.c[i] > 0.0)) continue;
        double y = std::log(s.c[i]);
        sx += s.t[i];
        sy += y;
        sxx += s.t[i] * s.t[i];
        sxy += s.t[i] * y;
        ++n;
    }
    if (n < 3 || degenerate) {
        s.flagged = true;
        return s;
    }
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    double icpt = (sy - slope * sx) / n;
    s.fit_rate = -slope;
    s.fit_amplitude = std::exp(icpt);
    for (std::size_t i = 0; i < s.t.size(); ++i) {
        if (s.t[i] < s.window_start || s.t[i] > s.window_end) continue;
        double fit = s.fit_amplitude * std::exp(-s.fit_rate * s.t[i]);
        s.fit_residual = std::max(s.fit_residual, std::abs(s.c[i] - fit) / s.fit_amplitude);
    }
    s.flagged = s.fit_residual > 0.1;
    return s;
}

namespace td {

double from_diffusion(double p0, double d1, double hbar) { return hbar * hbar / (2.0 * p0 * p0 * d1); }

double res1(double gamma, double alpha_abs, double temperature, double omega0, double hbar) {
    double th = temperature == 0.0 ? 1.0 : std::tanh(hbar * omega0 / (2.0 * temperature));
    return th / (4.0 * alpha_abs * alpha_abs * gamma);
}

double res2(double gamma, double delta_p, double dp0) {
    double r = dp0 / delta_p;
    return 4.0 * r * r / gamma;
}

double res3(double gamma, double delta_q, double lambda_T) {
    double r = lambda_T / delta_q;
    return 2.0 * r * r / gamma;
}

double res6(double v_over_c, double omega0) { return 3.0 / (v_over_c * v_over_c) * (2.0 * pi / omega0); }

double sphere(double v_over_c, double omega0, double radius_over_c) {
    return 324.0 / (v_over_c * v_over_c) * std::pow(omega0 * radius_over_c, -6) * (2.0 * pi / omega0);
}

double thermal_de_broglie(double mass, double temperature, double hbar) {
    return hbar / std::sqrt(2.0 * mass * temperature);
}

}  // namespace td

DecoherencePredictors decoherence_time_predictors(const PhysicalConfig& cfg, const CatStateSpec& spec,
                                                  double gamma, double d1, double sphere_radius) {
    cfg.validate();
    auto g = cat_geometry(spec, cfg);
    double a = std::abs(spec.alpha);
    if (!(a > 0.0) || !(gamma > 0.0)) throw std::invalid_argument("decoherence_time_predictors: need alpha != 0 and gamma > 0");
    DecoherencePredictors r;
    r.from_diffusion = td::from_diffusion(g.p0, d1, cfg.hbar);
    r.res1 = td::res1(gamma, a, cfg.temperature, cfg.omega0, cfg.hbar);
    r.res2 = td::res2(gamma, 2.0 * g.p0, g.dp0);
    if (cfg.temperature > 0.0) {
        // separation in position of the rotated components
        double dq = 2.0 * g.p0 / (cfg.mass * cfg.omega0);
        r.res3 = td::res3(gamma, dq, td::thermal_de_broglie(cfg.mass, cfg.temperature, cfg.hbar));
    }
    double v = g.p0 / (cfg.mass * cfg.speed_of_light);
    r.res6 = td::res6(v, cfg.omega0);
    if (sphere_radius > 0.0) r.sphere = td::sphere(v, cfg.omega0, sphere_radius / cfg.speed_of_light);
    r.slow_decoherence_ok = cfg.omega0 * r.res1 > 10.0;
    return r;
}

void write_snapshot_csv(const std::filesystem::path& path, const WignerGrid& w) {
    std::vector<std::vector<double>> rows;
    rows.reserve(w.nx * w.np);
    for (std::size_t ip = 0; ip < w.np; ++ip)
        for (std::size_t ix = 0; ix < w.nx; ++ix) rows.push_back({w.x(ix), w.p(ip), w.at(ix, ip)});
    io::write_csv(path, {"x", "p", "w"}, rows);
}

nlohmann::json snapshot_metadata(const WignerGrid& w, double t, const PhysicalConfig& cfg) {
    return {{"t", t},
            {"nx", w.nx},
            {"np", w.np},
            {"x_min", w.x_min()},
            {"x_max", w.x_max()},
            {"p_min", w.p_min()},
            {"p_max", w.p_max()},
            {"dx", w.dx()},
            {"dp", w.dp()},
            {"norm", w.norm()},
            {"config", config_to_json(cfg)}};
}

void write_coherence_csv(const std::filesystem::path& path, const CoherenceSeries& s) {
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < s.t.size(); ++i) rows.push_back({s.t[i], s.c[i], s.fit_rate, s.fit_residual});
    io::write_csv(path, {"t", "c", "fit_rate", "fit_residual"}, rows);
}

}  // namespace casdec
