// entropy.hpp: linear entropy and the predictability sieve

#pragma once

#include <filesystem>
#include <vector>

#include <json.hpp>

#include "casdec/phasespace.hpp"

namespace casdec {

struct LinearEntropy {
    double value{0.0};
    bool clamped{false};  // a negative value was reset to 0
    bool flagged{false};  // ... and it was below -1e-6
};

// 1 - 2 pi hbar sum W^2 dx dp
LinearEntropy linear_entropy(const WignerGrid& w, double hbar = 1.0);

// 1 - hbar / (2 sqrt(var_q var_p - cov^2))
double linear_entropy(const GaussianState& s, double hbar = 1.0);

// 2 gamma (s - 1) + 4 d1 var_p / hbar^2 + 2 d2 sigma_qp / hbar^2 with
// sigma_qp = 2 cov_qp. Sets *outside_validity when s_now > 0.1.
double entropy_rate(const GaussianState& s, const FpCoefficients& c, double s_now, double hbar = 1.0,
                    bool* outside_validity = nullptr);

// 2 tau (d1 / hbar^2) [var_p + (M w0)^2 var_q - M hbar w0]. Sets *short_tau
// when tau spans fewer than 5 periods.
double entropy_after_period(const GaussianState& initial, double d1, double tau, const PhysicalConfig& cfg,
                            bool* short_tau = nullptr);

// Pure squeezed state with squeezing r along angle phi, centred at the origin.
GaussianState squeezed_state(double r, double phi, const PhysicalConfig& cfg);

enum class SieveObjective {
    closed_form,  // entropy_after_period
    moment_ode,   // entropy of the moment-evolved state at tau
};

struct SieveOptions {
    SieveObjective objective{SieveObjective::closed_form};
    double r_max{2.0};
    std::size_t n_r{41};    // scan table resolution
    std::size_t n_phi{8};   // angles in [0, pi)
    double tau{0.0};        // 0: twenty periods
};

struct SieveRow {
    double r, phi, entropy;
};

struct SieveResult {
    double r{0.0}, phi{0.0};
    double var_q{0.0}, var_p{0.0}, cov_qp{0.0};
    double entropy_at_optimum{0.0};
    double tau{0.0};
    bool converged{true};
    std::vector<SieveRow> scan;
};

// Minimises the entropy produced over tau among pure Gaussian states.
SieveResult sieve_minimize(const FpCoefficients& coeffs, const PhysicalConfig& cfg, const SieveOptions& opts = {});

void write_sieve_csv(const std::filesystem::path& path, const SieveResult& r);
nlohmann::json sieve_json(const SieveResult& r);

}  // namespace casdec
