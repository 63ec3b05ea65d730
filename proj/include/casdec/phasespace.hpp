// phasespace.hpp: Wigner functions, Fokker-Planck evolution, decoherence times

#pragma once

#include <complex>
#include <filesystem>
#include <functional>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "casdec/coefficients.hpp"
#include "casdec/config.hpp"

namespace casdec {

// Periodic grid: x_i = -Lx + i dx with dx = 2 Lx / nx, so x_{nx/2} = 0.
// values are stored row by row, index ip * nx + ix.
struct WignerGrid {
    std::size_t nx{0}, np{0};
    double x_extent{0.0}, p_extent{0.0};  // half-widths Lx, Lp
    std::vector<double> values;

    double dx() const { return 2.0 * x_extent / static_cast<double>(nx); }
    double dp() const { return 2.0 * p_extent / static_cast<double>(np); }
    double x(std::size_t ix) const { return -x_extent + static_cast<double>(ix) * dx(); }
    double p(std::size_t ip) const { return -p_extent + static_cast<double>(ip) * dp(); }
    double x_min() const { return -x_extent; }
    double x_max() const { return x(nx - 1); }
    double p_min() const { return -p_extent; }
    double p_max() const { return p(np - 1); }
    double& at(std::size_t ix, std::size_t ip) { return values[ip * nx + ix]; }
    double at(std::size_t ix, std::size_t ip) const { return values[ip * nx + ix]; }
    double origin_value() const { return at(nx / 2, np / 2); }
    double norm() const;
};

struct GaussianState {
    double mean_q{0.0}, mean_p{0.0};
    double var_q{0.5}, var_p{0.5};
    double cov_qp{0.0};  // symmetrized covariance; the entropy rate uses sigma_qp = 2 cov_qp

    double determinant() const { return var_q * var_p - cov_qp * cov_qp; }
};

enum class Parity { even, odd, mixture };

struct CatStateSpec {
    std::complex<double> alpha{0.0, 0.0};
    Parity parity{Parity::even};
};

// Ground-state widths and coherent-state centre for the given configuration.
struct CatGeometry {
    double dq0{0.0}, dp0{0.0};  // sqrt(hbar/2 M w0), hbar / (2 dq0)
    double q_alpha{0.0}, p_alpha{0.0};
    double p0{0.0};  // sqrt(2 M hbar w0) |alpha|
};
CatGeometry cat_geometry(const CatStateSpec& spec, const PhysicalConfig& cfg);

struct GridParams {
    std::size_t nx{256}, np{256};
    double x_extent{0.0};  // 0 selects the default extent
    double p_extent{0.0};
};

// Default half-widths (|alpha| sqrt2 * 1.5 + 6) in units of dq0 and dp0.
GridParams default_grid(const CatStateSpec& spec, const PhysicalConfig& cfg, std::size_t n = 256);

class GridTooCoarse : public std::invalid_argument {
public:
    GridTooCoarse(const std::string& what, std::size_t required_nx, std::size_t required_np)
        : std::invalid_argument(what), required_nx_(required_nx), required_np_(required_np) {}
    std::size_t required_nx() const { return required_nx_; }
    std::size_t required_np() const { return required_np_; }

private:
    std::size_t required_nx_, required_np_;
};

// Even/odd cat or the matching mixture. Throws GridTooCoarse when the
// interference fringes get fewer than 8 points per wavelength.
WignerGrid cat_wigner(const CatStateSpec& spec, const GridParams& grid, const PhysicalConfig& cfg);

// Gaussian Wigner function with the given moments.
WignerGrid gaussian_wigner(const GaussianState& state, const GridParams& grid, const PhysicalConfig& cfg);

// First and second moments of a grid; cov_qp is <qp>_W - <q><p>.
GaussianState grid_moments(const WignerGrid& w);

struct FpCoefficients {
    double gamma{0.0}, d1{0.0}, d2{0.0};
    double delta_m{0.0};  // mass correction entering through 1 - delta_m / M
};

// Coefficients as a function of time: constants or a tabulated trace.
using CoefficientSource = std::function<FpCoefficients(double)>;
CoefficientSource constant_coefficients(const FpCoefficients& c);
// include_mass_shift feeds delta_m2(t) into the free-flight term.
CoefficientSource trace_coefficients(const CoefficientTrace& trace, bool include_mass_shift = false);

class CflViolation : public std::invalid_argument {
public:
    CflViolation(const std::string& what, double max_dt) : std::invalid_argument(what), max_dt_(max_dt) {}
    double max_dt() const { return max_dt_; }

private:
    double max_dt_;
};

struct SolverOptions {
    double dt{0.05};
    double sample_interval{0.0};      // 0: every step
    std::vector<double> snapshot_times;
    double leakage_threshold{1e-4};
};

struct TrajectorySample {
    double t{0.0};
    double origin_value{0.0};
    double norm{0.0};
    GaussianState moments{};
    double leakage{0.0};
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    std::vector<double> snapshot_times;
    std::vector<WignerGrid> snapshots;
    WignerGrid final_state;
    bool leakage_flagged{false};
    double max_leakage{0.0};
    std::size_t steps{0};
};

// Largest step that keeps the explicit damping/diffusion substep stable.
double max_stable_dt(const WignerGrid& w, const FpCoefficients& c);

// Strang splitting: half dissipative step, exact rotation, half dissipative
// step. The rotation is three FFT shears and therefore dissipation free.
Trajectory evolve_fokker_planck(const WignerGrid& initial, const CoefficientSource& coeffs, double t_final,
                                const SolverOptions& opts, const PhysicalConfig& cfg);

// Exact moment dynamics of the Fokker-Planck equation for Gaussian data.
GaussianState gaussian_moment_evolution(const GaussianState& state, const CoefficientSource& coeffs, double t,
                                        const PhysicalConfig& cfg, double t0 = 0.0);

struct CoherenceSeries {
    std::vector<double> t, c;
    double fit_rate{0.0};
    double fit_amplitude{0.0};
    double fit_residual{0.0};  // max |c - fit| over the window, relative to the amplitude
    double window_start{0.0}, window_end{0.0};
    bool flagged{false};
};

// c(t) from the origin values of a cat run and its matching mixture run, and
// an exponential fit over [2 pi / w0, min(t_final, 3 td_predicted)].
CoherenceSeries coherence_factor(const Trajectory& cat, const Trajectory& mixture, double td_predicted,
                                 const PhysicalConfig& cfg);

// Closed-form decoherence times.
namespace td {
// hbar^2 / (2 P0^2 D1)
double from_diffusion(double p0, double d1, double hbar = 1.0);
// tanh(hbar w0 / 2T) / (4 |alpha|^2 gamma)
double res1(double gamma, double alpha_abs, double temperature, double omega0 = 1.0, double hbar = 1.0);
// 4 (dp0 / delta_p)^2 / gamma, delta_p the momentum separation of the components
double res2(double gamma, double delta_p, double dp0);
// 2 (lambda_T / delta_q)^2 / gamma
double res3(double gamma, double delta_q, double lambda_T);
// (3 / v^2)(2 pi / w0), v in units of c
double res6(double v_over_c, double omega0);
// (324 / v^2)(w0 R / c)^-6 (2 pi / w0)
double sphere(double v_over_c, double omega0, double radius_over_c);
// hbar / sqrt(2 M T)
double thermal_de_broglie(double mass, double temperature, double hbar = 1.0);
}  // namespace td

struct DecoherencePredictors {
    double from_diffusion{0.0};
    double res1{0.0};
    double res2{0.0};
    double res3{0.0};  // 0 at T = 0
    double res6{0.0};  // perfect mirror only
    double sphere{0.0};  // when a radius is given
    bool slow_decoherence_ok{true};  // w0 t_d > 10
};

// All predictors applicable to an even cat with momentum separation 2 P0.
DecoherencePredictors decoherence_time_predictors(const PhysicalConfig& cfg, const CatStateSpec& spec,
                                                  double gamma, double d1, double sphere_radius = 0.0);

// Snapshot export: long-format x,p,w CSV and metadata JSON.
void write_snapshot_csv(const std::filesystem::path& path, const WignerGrid& w);
nlohmann::json snapshot_metadata(const WignerGrid& w, double t, const PhysicalConfig& cfg);
// t,c,fit_rate,fit_residual
void write_coherence_csv(const std::filesystem::path& path, const CoherenceSeries& s);

}  // namespace casdec
