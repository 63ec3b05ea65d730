// pairs.hpp: two-photon emission by a mirror in prescribed oscillation

#pragma once

#include <filesystem>
#include <functional>
#include <string>

#include <json.hpp>

#include "casdec/config.hpp"

namespace casdec {

// Joint density of the pair (w1, w2); units hbar^2 * time.
struct PairDensity {
    std::function<double(double, double)> eval;
    std::string regime{"perfect-mirror"};
};

// (2 hbar^2 / pi^2) w1 w2 / (w1 + w2)^2. The shape off the resonance line is
// a modelling choice; only its integral along w1 + w2 = w is fixed by the
// vacuum spectrum.
double pair_density_perfect(double omega1, double omega2, double hbar = 1.0);
PairDensity perfect_mirror_density(double hbar = 1.0);

// int_0^s P(w1, s - w1) dw1; hbar^2 s / (3 pi^2) for the perfect mirror.
double line_density(double s, const PairDensity& density, const QuadOptions& opts = {});

// |b|^2 = (qdot0^2 / hbar^2) P(w1, w2) sin^2(nu dt / 2) / nu^2, nu = w1 + w2 - w0.
double pair_probability(double omega1, double omega2, double dt, double qdot0, double omega0,
                        const PairDensity& density, double hbar = 1.0);

struct PairRunParams {
    double omega0{1.0};
    double qdot0{1e-3};
    double dt{400.0};
    double mass{1.0};
    double hbar{1.0};
    PairDensity density{perfect_mirror_density()};
};

struct PairRun {
    PairRunParams params;
    double s_max{0.0};               // w1 + w2 <= w0 + 60 pi / dt
    double total_probability{0.0};  // double integral of |b|^2
    double total_error{0.0};
    double radiated_energy{0.0};
    double energy_error{0.0};
    double main_lobe_fraction{0.0};  // share of |nu| < 2 pi / dt
    double truncation_estimate{0.0};  // probability in the next omega0-wide band past s_max
};

// Integrates |b|^2 in the rotated coordinates (s = w1 + w2, w1): the inner
// integral is the line density, the outer one is split at every zero of the
// sin^2 factor.
PairRun run_pairs(const PairRunParams& params, const QuadOptions& opts = {});

// 1 - (1/2) total; sets *regime_violation when the total exceeds 2.
double vacuum_persistence(const PairRun& run, bool* regime_violation = nullptr);

// (1/2) sum |b|^2 hbar (w1 + w2)
double radiated_energy(const PairRun& run);

// dE / (M qdot0^2 dt). Throws std::domain_error when w0 dt < 200.
double gamma_from_pairs(const PairRun& run);

// (pi/4)(w0 / M hbar) L(w0): the same damping from the resonance line alone.
double gamma_from_line(const PairRunParams& params, const QuadOptions& opts = {});

// Decay rate of the cat interference term: total / dt. The weight of the
// interference term after dt is |B|^2 - total/2 = 1 - total.
double interference_decay(const PairRun& run);

struct EntangledSummary {
    double even_weight{1.0};  // vacuum branch, even cat
    double odd_weight{0.0};   // two-photon branch, odd cat
    double interference_weight{1.0};
    double alpha_abs{0.0};
};
EntangledSummary entangled_state_summary(const PairRun& run, double alpha_abs);

// omega1,omega2,prob_density on an n x n grid over [0, s_max]^2.
void write_pairs_csv(const std::filesystem::path& path, const PairRun& run, std::size_t n);
nlohmann::json pairs_summary_json(const PairRun& run);

}  // namespace casdec
