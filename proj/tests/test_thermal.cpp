// Thermal damping, reflected blackbody power and SI decoherence times.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "casdec/io.hpp"
#include "casdec/phasespace.hpp"
#include "casdec/thermal.hpp"

using namespace casdec;

namespace {

MirrorGeometry line(double cutoff = INFINITY) { return {MirrorGeometry::Kind::line, 0.0, 0.0, cutoff}; }
MirrorGeometry plate(double area, double cutoff = INFINITY) {
    return {MirrorGeometry::Kind::plate, 0.0, area, cutoff};
}

}  // namespace

TEST_CASE("Stefan-Boltzmann plate power pi^2/15 A T^4") {
    CHECK(reflected_power(1.0, plate(1.0)).value == doctest::Approx(0.657973626739290575).epsilon(1e-15));
    // finite but remote cutoff goes through quadrature
    CHECK(reflected_power(1.0, plate(1.0, 1e8)).value == doctest::Approx(0.657973626739290575).epsilon(1e-7));
}

TEST_CASE("Stefan scaling T^4 across a decade") {
    auto g = plate(2.0, 1e9);
    double lo = reflected_power(1.0, g).value, hi = reflected_power(10.0, g).value;
    CHECK(hi / lo == doctest::Approx(1e4).epsilon(1e-6));
}

TEST_CASE("line mirror power pi T^2 / (6 hbar)") {
    CHECK(reflected_power(2.0, line()).value == doctest::Approx(pi * 4.0 / 6.0).epsilon(1e-15));
    CHECK(reflected_power(2.0, line(1e6)).value == doctest::Approx(pi * 4.0 / 6.0).epsilon(1e-5));
    CHECK(reflected_power(0.0, line()).value == 0.0);
}

TEST_CASE("high-temperature line power Omega T / 2") {
    // |R|^2 n hbar w -> T Omega^2/(w^2 + Omega^2) when T >> hbar Omega
    CHECK(reflected_power(1e4, line(1.0)).value == doctest::Approx(0.5 * 1e4).epsilon(1e-3));
}

TEST_CASE("Doppler friction") {
    CHECK(doppler_friction(1.0, line(), 0.0) == 0.0);
    CHECK(doppler_friction(1.0, line(), 0.1) == doctest::Approx(-2.0 * pi / 6.0 * 0.1));
    CHECK_THROWS(reflected_power(1.0, MirrorGeometry{MirrorGeometry::Kind::sphere, 1.0, 0.0}));
    CHECK_THROWS(reflected_power(1.0, plate(0.0)));
}

TEST_CASE("Doppler damping is half the exact mid-regime damping") {
    PhysicalConfig c;
    c.transparency = 1e4;
    c.temperature = 30.0;
    bool outside = true;
    double exact = gamma_thermal_exact(c, ThermalRegime::mid, &outside);
    CHECK_FALSE(outside);
    CHECK(exact == doctest::Approx(pi * 900.0 / 3.0));
    CHECK(gamma_doppler(30.0, line(1e4), 1.0) / exact == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("high-temperature damping Omega T / 2M") {
    PhysicalConfig c;
    c.transparency = 2.0;
    c.temperature = 100.0;
    c.mass = 4.0;
    bool outside = true;
    CHECK(gamma_thermal_exact(c, ThermalRegime::high, &outside) == doctest::Approx(25.0));
    CHECK_FALSE(outside);
    gamma_thermal_exact(c, ThermalRegime::mid, &outside);
    CHECK(outside);
}

TEST_CASE("thermal photon wavelength at 50 K") {
    CHECK(thermal_wavelength(50.0) == doctest::Approx(2.9e-4).epsilon(0.02));
    CHECK(thermal_wavelength(50.0) ==
          doctest::Approx(2.0 * pi * codata::hbar * codata::c / (codata::k_boltzmann * 50.0)).epsilon(1e-15));
    CHECK_THROWS(thermal_wavelength(0.0));
}

TEST_CASE("plate decoherence time at 50 K and 1 mm^2") {
    auto r = plate_decoherence_time({50.0, 1e-6, 1e-9, 1e-3, 0.0});
    CHECK(r.td_coeff_s_m2 == doctest::Approx(1.0e-24).epsilon(0.05));
    CHECK(r.td_s == doctest::Approx(r.td_coeff_s_m2 / 1e-18));
    CHECK(r.diffraction_ok);
    auto hot = plate_decoherence_time({300.0, 1e-6, 1e-9, 1e-3, 0.0});
    CHECK(r.td_coeff_s_m2 / hot.td_coeff_s_m2 == doctest::Approx(std::pow(6.0, 5)).epsilon(1e-12));
    auto small = plate_decoherence_time({50.0, 1e-8, 1e-9, 1e-3, 0.0});
    CHECK_FALSE(small.diffraction_ok);
}

TEST_CASE("plate t_d equals the de Broglie form with the plate damping") {
    PlateParams p{80.0, 4e-6, 3e-10, 2e-3, 0.0};
    auto r = plate_decoherence_time(p);
    const double kT = codata::k_boltzmann * p.temperature_kelvin;
    const double lambda_T = codata::hbar / std::sqrt(2.0 * p.mass_kg * kT);
    CHECK(td::res3(r.gamma_per_s, p.delta_q_m, lambda_T) == doctest::Approx(r.td_s).epsilon(1e-6));
}

TEST_CASE("SI round trip of the plate damping") {
    SIUnits u{2e-3, 1e3};
    const double T = 80.0 * codata::k_boltzmann, A = 4e-6;
    MirrorGeometry g = plate(A);
    double si = gamma_doppler(T, g, u.mass_kg, codata::hbar, codata::c);
    double internal = plate_gamma_internal(T / u.energy(), A / (u.length() * u.length()), codata::c * u.time() / u.length());
    CHECK(u.rate_to_si(internal) == doctest::Approx(si).epsilon(1e-12));
    CHECK(u.rate_from_si(u.rate_to_si(internal)) == doctest::Approx(internal).epsilon(1e-12));
}

TEST_CASE("slow-decoherence flag uses the optional w0") {
    auto r = plate_decoherence_time({50.0, 1e-6, 1e-9, 1e-3, 1e3});
    CHECK_FALSE(r.slow_decoherence_ok);
    auto slow = plate_decoherence_time({50.0, 1e-6, 1e-20, 1e-3, 1e3});
    CHECK(slow.slow_decoherence_ok);
}

TEST_CASE("thermal CSV and JSON") {
    std::vector<SIReport> rows{plate_decoherence_time({50.0, 1e-6, 1e-9, 1e-3, 0.0})};
    auto path = std::filesystem::temp_directory_path() / "casdec_thermal_test.csv";
    write_thermal_csv(path, rows);
    auto t = io::read_csv(path);
    CHECK(t.header == std::vector<std::string>{"T_kelvin", "lambda_th_m", "gamma_per_s", "td_coeff_s_m2"});
    CHECK(t.rows.at(0).at(0) == 50.0);
    std::filesystem::remove(path);
    auto j = si_report_json(rows[0]);
    CHECK(j["flags"]["diffraction_ok"].get<bool>());
}
