// Damping, diffusion and mass-shift coefficients, asymptotic and time-dependent.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "casdec/coefficients.hpp"
#include "casdec/spectral.hpp"

using namespace casdec;

namespace {

PhysicalConfig vacuum(double transparency) {
    PhysicalConfig c;
    c.transparency = transparency;
    return c;
}

std::vector<double> grid(double t_max, int n) {
    std::vector<double> t;
    for (int i = 0; i <= n; ++i) t.push_back(t_max * i / n);
    return t;
}

// sin((w -+ w0) t) / 2(w -+ w0) evaluated in long double
long double sx_ref(long double x, long double t) { return std::sin(x * t) / (2.0L * x); }
long double cx_ref(long double x, long double t) {
    long double s = std::sin(0.5L * x * t);
    return s * s / x;
}

}  // namespace

TEST_CASE("vacuum damping: closed form against references") {
    CHECK(gamma_closed_form_vacuum(vacuum(1e-4)) == doctest::Approx(1.30674125387118543e-8).epsilon(1e-12));
    CHECK(gamma_closed_form_vacuum(vacuum(1e4)) == doctest::Approx(0.026525823769071751).epsilon(1e-12));
    CHECK(gamma_asymptotic(vacuum(1e4)) == doctest::Approx(gamma_closed_form_vacuum(vacuum(1e4))).epsilon(1e-13));
}

TEST_CASE("perfect-mirror damping hbar w0^2 / (12 pi M)") {
    CHECK(gamma_asymptotic(vacuum(1e4)) == doctest::Approx(1.0 / (12.0 * pi)).epsilon(1e-3));
    PhysicalConfig c = vacuum(1e6);
    c.mass = 3.0;
    c.omega0 = 2.0;
    CHECK(gamma_asymptotic(c) == doctest::Approx(4.0 / (12.0 * pi * 3.0)).epsilon(1e-4));
}

TEST_CASE("closed form refuses T > 0") {
    PhysicalConfig c = vacuum(1.0);
    c.temperature = 0.1;
    CHECK_THROWS_AS(gamma_closed_form_vacuum(c), std::domain_error);
}

TEST_CASE("fluctuation-dissipation identity D1 tanh(hbar w0/2T) = hbar Gamma / (M w0)") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> lt(-2.0, 3.0), lw(-3.0, 3.0);
    for (int i = 0; i < 8; ++i) {
        PhysicalConfig c;
        c.transparency = std::pow(10.0, lw(rng));
        c.temperature = i == 0 ? 0.0 : std::pow(10.0, lt(rng));
        c.mass = 1.5;
        double th = c.temperature == 0.0 ? 1.0 : std::tanh(c.omega0 / (2.0 * c.temperature));
        CHECK(d1_asymptotic(c) * th == doctest::Approx(gamma_asymptotic(c) / (c.mass * c.omega0)).epsilon(1e-10));
    }
}

TEST_CASE("kernels agree with a long-double evaluation on both sides of the series switch") {
    const double w0 = 1.0;
    for (double w : {0.2, 1.0 + 3e-5, 3.0, 50.0}) {
        for (double t : {1e-6, 2e-5, 9.9e-5, 1.01e-4, 0.5, 30.0}) {
            long double m = w - w0, p = w + w0;
            auto ss = static_cast<double>(sx_ref(m, t) - sx_ref(p, t));
            auto cc = static_cast<double>(sx_ref(m, t) + sx_ref(p, t));
            auto sc = static_cast<double>(cx_ref(p, t) - cx_ref(m, t));
            auto cs = static_cast<double>(cx_ref(p, t) + cx_ref(m, t));
            // the terms are of size t, so cancellation limits absolute accuracy to ~eps t
            auto near = [t](double a, double b) { return std::abs(a - b) <= 1e-14 * t + 1e-12 * std::abs(b); };
            CHECK(near(kernels::f_ss(w, w0, t), ss));
            CHECK(near(kernels::f_cc(w, w0, t), cc));
            CHECK(near(kernels::f_sc(w, w0, t), sc));
            CHECK(near(kernels::f_cs(w, w0, t), cs));
        }
    }
}

TEST_CASE("kernels vanish at t = 0 and rise as t^3 on resonance") {
    CHECK(kernels::f_ss(2.0, 1.0, 0.0) == 0.0);
    CHECK(kernels::f_cs(2.0, 1.0, 0.0) == 0.0);
    // w = w0: t/2 - sin(2 w0 t)/(4 w0) ~ w0^2 t^3 / 3
    double t = 1e-3;
    CHECK(kernels::f_ss(1.0, 1.0, t) == doctest::Approx(t * t * t / 3.0).epsilon(1e-5));
}

TEST_CASE("principal-value D2 and mass shift: frozen values") {
    CHECK(d2_asymptotic_pv(vacuum(1e-4)).value == doctest::Approx(3.42400866e-08).epsilon(1e-7));
    CHECK(d2_asymptotic_pv(vacuum(1.0)).value == doctest::Approx(-0.01231886787).epsilon(1e-7));
    CHECK(delta_m2_asymptotic_pv(vacuum(1.0)).value == doctest::Approx(0.1396822073).epsilon(1e-7));
    CHECK(delta_m2_asymptotic_pv(vacuum(1e4)).value == doctest::Approx(1591.549506).epsilon(1e-7));
}

TEST_CASE("panel trace and principal-value route agree on D2 and the mass shift") {
    auto c = vacuum(1e-2);
    auto tr = coefficient_trace(c, grid(120.0, 800));
    CHECK(tail_average(tr.times, tr.d2, 2.0 * pi) == doctest::Approx(tr.asymptotic_d2).epsilon(2e-3));
    CHECK(tail_average(tr.times, tr.delta_m2, 2.0 * pi) == doctest::Approx(tr.asymptotic_delta_m2).epsilon(2e-3));
}

TEST_CASE("coefficient trace: perfect-mirror plateau") {
    auto tr = coefficient_trace(vacuum(1e4), grid(60.0, 300));
    CHECK(tr.times.size() == 301);
    CHECK(tr.gamma.front() == 0.0);
    CHECK(tr.d1.front() == 0.0);
    CHECK(tr.gamma.back() == doctest::Approx(1.0 / (12.0 * pi)).epsilon(1e-3));
    CHECK(tr.d1.back() == doctest::Approx(1.0 / (12.0 * pi)).epsilon(1e-3));
    CHECK(tr.tail_checked);
    CHECK(tr.tail_deviation_gamma < 0.01);
    CHECK(tr.d1_peak > tr.asymptotic_d1);
}

TEST_CASE("coefficient trace: high transmission oscillates at w0") {
    auto tr = coefficient_trace(vacuum(1e-4), grid(60.0, 400));
    CHECK(tail_average(tr.times, tr.gamma, 2.0 * pi) == doctest::Approx(tr.asymptotic_gamma).epsilon(0.01));
    CHECK(tail_average(tr.times, tr.d1, 2.0 * pi) == doctest::Approx(tr.asymptotic_d1).epsilon(0.01));
    CHECK(oscillation_frequency(tr.times, tr.gamma, tr.asymptotic_gamma, 20.0) == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("coefficient trace: input validation") {
    CHECK_THROWS_AS(coefficient_trace(vacuum(1.0), {0.5, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(coefficient_trace(vacuum(1.0), {0.0, 2.0, 1.0}), std::invalid_argument);
    PhysicalConfig hot = vacuum(1.0);
    hot.temperature = 1.0;
    CHECK_THROWS_AS(coefficient_trace(hot, {0.0, 1.0}), std::domain_error);
    auto single = coefficient_trace(vacuum(1.0), {0.0});
    CHECK(single.gamma.size() == 1);
    CHECK(single.gamma[0] == 0.0);
}

TEST_CASE("trace helpers") {
    std::vector<double> t{0.0, 1.0, 2.0}, v{0.0, 2.0, 6.0};
    CHECK(interpolate_trace(t, v, 1.5) == doctest::Approx(4.0));
    CHECK(interpolate_trace(t, v, -1.0) == 0.0);
    CHECK(interpolate_trace(t, v, 9.0) == 6.0);
    // cos crossings of its mean: exactly w = 3
    std::vector<double> tt, cc;
    for (int i = 0; i <= 4000; ++i) {
        tt.push_back(40.0 * i / 4000);
        cc.push_back(std::cos(3.0 * tt.back()));
    }
    CHECK(oscillation_frequency(tt, cc, 0.0, 0.0) == doctest::Approx(3.0).epsilon(1e-3));
}

TEST_CASE("sphere damping hbar w0^8 R^6 / (1296 pi M c^8)") {
    bool warn = false;
    CHECK(gamma_sphere(vacuum(1.0), 1.0, &warn) == doctest::Approx(2.45609480080085395e-4).epsilon(1e-14));
    CHECK(warn);
    gamma_sphere(vacuum(1.0), 0.05, &warn);
    CHECK_FALSE(warn);
}

TEST_CASE("static mass shift needs the field variance from the caller") {
    auto m = mass_shift_static(vacuum(2.5), 0.4, "hard cutoff");
    CHECK(m.delta_m1 == doctest::Approx(1.0));
    CHECK(m.cutoff_descriptor == "hard cutoff");
}

TEST_CASE("trace sidecar carries the caption formulas") {
    auto tr = coefficient_trace(vacuum(1e4), grid(10.0, 20));
    auto j = trace_sidecar(tr);
    for (const char* k : {"gamma_perfect_mirror", "d1_perfect_mirror", "gamma_high_transmission", "gamma_closed_form"}) {
        REQUIRE(j["caption_formulas"].contains(k));
        CHECK(j["caption_formulas"][k].contains("formula"));
    }
    CHECK(j["caption_formulas"]["gamma_perfect_mirror"]["value"].get<double>() ==
          doctest::Approx(1.0 / (12.0 * pi)));
}
