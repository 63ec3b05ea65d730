#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <limits>
#include <map>
#include <set>

#include <CLI11.hpp>
#include <boost/math/tools/minima.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "casdec/coefficients.hpp"
#include "casdec/entropy.hpp"
#include "casdec/io.hpp"
#include "casdec/pairs.hpp"
#include "casdec/phasespace.hpp"
#include "casdec/spectral.hpp"
#include "casdec/thermal.hpp"

namespace casdec::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
    static const std::map<std::string, std::set<std::string>> s{
        {"physics", {"mass", "omega0", "transparency", "temperature", "hbar"}},
        {"spectrum", {"u_min", "u_max", "n", "frequencies"}},
        {"coeffs", {"preset", "t_max", "n_times", "cutoff_factor"}},
        {"evolve",
         {"alpha_re", "alpha_im", "parity", "gamma", "d1", "d2", "delta_m", "grid", "x_extent", "p_extent",
          "periods", "dt", "sample_interval", "snapshots"}},
        {"sieve", {"objective", "r_max", "n_r", "n_phi", "tau", "gamma", "d1", "d2"}},
        {"pairs", {"qdot0", "dt", "n_grid", "alpha"}},
        {"thermal", {"temperatures_kelvin", "area_m2", "delta_q_m", "mass_kg", "omega0_rad_s"}},
    };
    return s;
}

const json& section(const Config& c, const char* name) {
    static const json empty = json::object();
    auto it = c.raw.find(name);
    return it == c.raw.end() ? empty : *it;
}

template <class T>
T get(const json& obj, const char* key, T def, const char* where) {
    auto it = obj.find(key);
    if (it == obj.end()) return def;
    try {
        return it->template get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string(where) + "." + key + ": wrong type");
    }
}

double positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string(what) + " must be positive and finite");
    return v;
}

void save_summary(const fs::path& out, const std::string& name, const json& j) {
    io::write_json(out / (name + ".json"), j);
}

std::vector<double> log_space(double lo, double hi, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(n - 1));
    return v;
}

json zeta_table(const Config& cfg, const fs::path& csv) {
    const json& s = section(cfg, "spectrum");
    double u_min = positive(get(s, "u_min", 1e-2, "spectrum"), "spectrum.u_min");
    double u_max = positive(get(s, "u_max", 1e2, "spectrum"), "spectrum.u_max");
    auto n = get<std::size_t>(s, "n", 512, "spectrum");
    if (n < 2 || !(u_max > u_min)) throw ConfigError("spectrum: need n >= 2 and u_max > u_min");
    auto u = log_space(u_min, u_max, n);
    std::vector<double> z(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = zeta(u[i]);
    io::write_csv_columns(csv, {"u", "zeta"}, {&u, &z});

    std::uintmax_t iters = 200;
    auto m = boost::math::tools::brent_find_minima([](double x) { return -zeta(x); }, 1.0, 10.0,
                                                   std::numeric_limits<double>::digits / 2, iters);
    return {{"zeta_argmax", m.first}, {"zeta_max", -m.second}, {"u_min", u_min}, {"u_max", u_max}, {"n", n}};
}

CoefficientTrace run_trace(const Config& cfg, const std::string& preset, json& meta) {
    const json& s = section(cfg, "coeffs");
    PhysicalConfig p = cfg.physics;
    if (preset == "figure-1")
        p.transparency = 1e4 * p.omega0;
    else if (preset == "figure-2")
        p.transparency = 1e-4 * p.omega0;
    else if (preset != "custom")
        throw ConfigError("coeffs.preset must be figure-1, figure-2 or custom");
    double t_max = get(s, "t_max", 60.0 / p.omega0, "coeffs");
    auto n = get<std::size_t>(s, "n_times", 401, "coeffs");
    if (t_max < 0.0 || n < 1) throw ConfigError("coeffs: need t_max >= 0 and n_times >= 1");
    TraceOptions opts;
    opts.cutoff_factor = positive(get(s, "cutoff_factor", opts.cutoff_factor, "coeffs"), "coeffs.cutoff_factor");
    std::vector<double> times;
    if (t_max == 0.0 || n == 1) {
        times = {0.0};
    } else {
        for (std::size_t i = 0; i < n; ++i) times.push_back(t_max * static_cast<double>(i) / static_cast<double>(n - 1));
    }
    auto trace = coefficient_trace(p, times, opts);
    meta = trace_sidecar(trace);
    meta["preset"] = preset;
    return trace;
}

FpCoefficients read_coefficients(const json& s, const PhysicalConfig& p, const char* where) {
    FpCoefficients c;
    c.gamma = get(s, "gamma", 1e-3, where);
    // default diffusion from the fluctuation-dissipation relation at w0
    double fdt = c.gamma * p.hbar / (p.mass * p.omega0);
    if (p.temperature > 0.0) fdt /= std::tanh(p.hbar * p.omega0 / (2.0 * p.temperature));
    c.d1 = get(s, "d1", fdt, where);
    c.d2 = get(s, "d2", 0.0, where);
    if (c.gamma < 0.0 || c.d1 < 0.0) throw ConfigError(std::string(where) + ": gamma and d1 must be >= 0");
    return c;
}

}  // namespace

Config parse_config(const json& j) {
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        auto sec = schema().find(it.key());
        if (sec == schema().end()) throw ConfigError("config: unknown section '" + it.key() + "'");
        if (!it->is_object()) throw ConfigError("config: section '" + it.key() + "' must be an object");
        for (auto k = it->begin(); k != it->end(); ++k)
            if (!sec->second.count(k.key()))
                throw ConfigError("config: unknown key '" + it.key() + "." + k.key() + "'");
    }
    Config c;
    c.raw = j;
    const json& p = section(c, "physics");
    c.physics.mass = get(p, "mass", 1.0, "physics");
    c.physics.omega0 = get(p, "omega0", 1.0, "physics");
    c.physics.transparency = get(p, "transparency", 1.0, "physics");
    c.physics.temperature = get(p, "temperature", 0.0, "physics");
    c.physics.hbar = get(p, "hbar", 1.0, "physics");
    try {
        c.physics.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return c;
}

Config load_config(const fs::path& path) {
    json j;
    try {
        j = io::read_json(path);
    } catch (const std::exception& e) {
        throw ConfigError("config: cannot read " + path.string() + ": " + e.what());
    }
    return parse_config(j);
}

json cmd_spectrum(const Config& cfg, const fs::path& out) {
    const json& s = section(cfg, "spectrum");
    json summary = zeta_table(cfg, out / "spectrum.csv");
    std::vector<double> freqs;
    if (s.contains("frequencies")) {
        freqs = get<std::vector<double>>(s, "frequencies", {}, "spectrum");
        if (freqs.empty()) throw ConfigError("spectrum.frequencies must not be empty");
        for (double w : freqs)
            if (!(w > 0.0)) throw ConfigError("spectrum.frequencies must be positive");
    } else {
        freqs = log_space(1e-2 * cfg.physics.omega0, 1e2 * cfg.physics.omega0, 64);
    }
    auto table = make_spectral_table(freqs, cfg.physics);
    write_spectral_csv(out / "xi_table.csv", table);
    summary["tail_exponent"] = table.tail_exponent;
    summary["config"] = config_to_json(cfg.physics);
    save_summary(out, "spectrum", summary);
    return summary;
}

json cmd_coeffs(const Config& cfg, const fs::path& out) {
    json meta;
    auto preset = get<std::string>(section(cfg, "coeffs"), "preset", "custom", "coeffs");
    auto trace = run_trace(cfg, preset, meta);
    write_trace_csv(out / "coeffs.csv", trace);
    save_summary(out, "coeffs", meta);
    return meta;
}

json cmd_evolve(const Config& cfg, const fs::path& out) {
    const json& s = section(cfg, "evolve");
    const PhysicalConfig& p = cfg.physics;
    CatStateSpec spec;
    spec.alpha = {get(s, "alpha_re", 0.0, "evolve"), get(s, "alpha_im", 3.0, "evolve")};
    auto parity = get<std::string>(s, "parity", "even", "evolve");
    if (parity == "even")
        spec.parity = Parity::even;
    else if (parity == "odd")
        spec.parity = Parity::odd;
    else if (parity == "mixture")
        spec.parity = Parity::mixture;
    else
        throw ConfigError("evolve.parity must be even, odd or mixture");
    FpCoefficients k = read_coefficients(s, p, "evolve");
    k.delta_m = get(s, "delta_m", 0.0, "evolve");

    auto n = get<std::size_t>(s, "grid", 256, "evolve");
    GridParams grid = default_grid(spec, p, n);
    if (double lx = get(s, "x_extent", 0.0, "evolve"); lx > 0.0) grid.x_extent = lx;
    if (double lp = get(s, "p_extent", 0.0, "evolve"); lp > 0.0) grid.p_extent = lp;

    const double period = 2.0 * pi / p.omega0;
    const double t_final = positive(get(s, "periods", 10.0, "evolve"), "evolve.periods") * period;
    SolverOptions opts;
    opts.dt = positive(get(s, "dt", 0.05, "evolve"), "evolve.dt");
    opts.sample_interval = get(s, "sample_interval", 0.5, "evolve");
    opts.snapshot_times = get<std::vector<double>>(s, "snapshots", {0.0, t_final}, "evolve");

    CatStateSpec mix = spec;
    mix.parity = Parity::mixture;
    auto coeffs = constant_coefficients(k);
    auto cat = evolve_fokker_planck(cat_wigner(spec, grid, p), coeffs, t_final, opts, p);
    auto mixture = evolve_fokker_planck(cat_wigner(mix, grid, p), coeffs, t_final, opts, p);

    // without damping there is no decoherence time to predict; fit over the whole run
    DecoherencePredictors pred;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    pred.from_diffusion = pred.res1 = pred.res2 = pred.res3 = nan;
    if (k.gamma > 0.0) pred = decoherence_time_predictors(p, spec, k.gamma, k.d1);
    const double window = std::isfinite(pred.from_diffusion) ? pred.from_diffusion
                                                              : std::numeric_limits<double>::infinity();
    auto series = coherence_factor(cat, mixture, window, p);
    write_coherence_csv(out / "coherence.csv", series);
    json snaps = json::array();
    for (std::size_t i = 0; i < cat.snapshots.size(); ++i) {
        std::string stem = "snapshot_" + std::to_string(i);
        write_snapshot_csv(out / (stem + ".csv"), cat.snapshots[i]);
        auto meta = snapshot_metadata(cat.snapshots[i], cat.snapshot_times[i], p);
        io::write_json(out / (stem + ".json"), meta);
        snaps.push_back({{"file", stem + ".csv"}, {"t", cat.snapshot_times[i]}});
    }
    json summary{{"config", config_to_json(p)},
                 {"coefficients", {{"gamma", k.gamma}, {"d1", k.d1}, {"d2", k.d2}, {"delta_m", k.delta_m}}},
                 {"grid", {{"nx", grid.nx}, {"np", grid.np}, {"x_extent", grid.x_extent}, {"p_extent", grid.p_extent}}},
                 {"fit_rate", series.fit_rate},
                 {"fit_residual", series.fit_residual},
                 {"fit_flagged", series.flagged},
                 {"td_fit", series.fit_rate > 0.0 ? io::number_or_null(1.0 / series.fit_rate) : json(nullptr)},
                 {"predictors",
                  {{"from_diffusion", io::number_or_null(pred.from_diffusion)},
                   {"res1", io::number_or_null(pred.res1)},
                   {"res2", io::number_or_null(pred.res2)},
                   {"res3", io::number_or_null(pred.res3)}}},
                 {"leakage", {{"max", cat.max_leakage}, {"flagged", cat.leakage_flagged}}},
                 {"steps", cat.steps},
                 {"snapshots", snaps}};
    if (std::isfinite(pred.from_diffusion) && pred.from_diffusion > 0.0)
        summary["fit_vs_predictor"] = series.fit_rate * pred.from_diffusion - 1.0;
    save_summary(out, "evolve", summary);
    return summary;
}

json cmd_sieve(const Config& cfg, const fs::path& out) {
    const json& s = section(cfg, "sieve");
    SieveOptions opts;
    auto objective = get<std::string>(s, "objective", "closed-form", "sieve");
    if (objective == "closed-form")
        opts.objective = SieveObjective::closed_form;
    else if (objective == "moment-ode")
        opts.objective = SieveObjective::moment_ode;
    else
        throw ConfigError("sieve.objective must be closed-form or moment-ode");
    opts.r_max = positive(get(s, "r_max", opts.r_max, "sieve"), "sieve.r_max");
    opts.n_r = get(s, "n_r", opts.n_r, "sieve");
    opts.n_phi = get(s, "n_phi", opts.n_phi, "sieve");
    opts.tau = get(s, "tau", opts.tau, "sieve");
    auto res = sieve_minimize(read_coefficients(s, cfg.physics, "sieve"), cfg.physics, opts);
    write_sieve_csv(out / "sieve.csv", res);
    json summary = sieve_json(res);
    summary["objective"] = objective;
    save_summary(out, "sieve", summary);
    return summary;
}

json cmd_pairs(const Config& cfg, const fs::path& out) {
    const json& s = section(cfg, "pairs");
    const PhysicalConfig& p = cfg.physics;
    PairRunParams params;
    params.omega0 = p.omega0;
    params.mass = p.mass;
    params.hbar = p.hbar;
    params.density = perfect_mirror_density(p.hbar);
    params.qdot0 = get(s, "qdot0", params.qdot0, "pairs");
    params.dt = get(s, "dt", params.dt, "pairs");
    if (params.dt < 0.0) throw ConfigError("pairs.dt must be >= 0");
    auto n = get<std::size_t>(s, "n_grid", 64, "pairs");
    double alpha = get(s, "alpha", 3.0, "pairs");
    auto run = run_pairs(params);
    write_pairs_csv(out / "pairs.csv", run, n);
    json summary = pairs_summary_json(run);
    summary["gamma_line"] = gamma_from_line(params);
    if (params.dt > 0.0 && params.qdot0 != 0.0)
        summary["decay_times_td"] = interference_decay(run) * td::res6(params.qdot0, params.omega0);
    auto e = entangled_state_summary(run, alpha);
    summary["entangled_state"] = {{"even_weight", e.even_weight},
                                  {"odd_weight", e.odd_weight},
                                  {"interference_weight", e.interference_weight},
                                  {"alpha", e.alpha_abs}};
    save_summary(out, "pairs", summary);
    return summary;
}

json cmd_thermal(const Config& cfg, const fs::path& out) {
    const json& s = section(cfg, "thermal");
    auto temps = get<std::vector<double>>(s, "temperatures_kelvin", {50.0, 300.0}, "thermal");
    if (temps.empty()) throw ConfigError("thermal.temperatures_kelvin must not be empty");
    PlateParams base;
    base.area_m2 = positive(get(s, "area_m2", base.area_m2, "thermal"), "thermal.area_m2");
    base.delta_q_m = positive(get(s, "delta_q_m", base.delta_q_m, "thermal"), "thermal.delta_q_m");
    base.mass_kg = positive(get(s, "mass_kg", base.mass_kg, "thermal"), "thermal.mass_kg");
    base.omega0 = get(s, "omega0_rad_s", 0.0, "thermal");
    std::vector<SIReport> rows;
    json reports = json::array();
    for (double t : temps) {
        PlateParams q = base;
        q.temperature_kelvin = positive(t, "thermal.temperatures_kelvin");
        rows.push_back(plate_decoherence_time(q));
        reports.push_back(si_report_json(rows.back()));
    }
    write_thermal_csv(out / "thermal.csv", rows);
    json summary{{"reports", reports}};
    save_summary(out, "thermal", summary);
    return summary;
}

json cmd_figure(int which, const Config& cfg, const fs::path& out) {
    const std::string stem = "figure" + std::to_string(which);
    if (which == 1 || which == 2) {
        json meta;
        auto trace = run_trace(cfg, which == 1 ? "figure-1" : "figure-2", meta);
        write_trace_csv(out / (stem + ".csv"), trace);
        save_summary(out, stem, meta);
        return meta;
    }
    if (which == 3) {
        json meta = zeta_table(cfg, out / (stem + ".csv"));
        meta["caption_formulas"] = {{"xi_vacuum", "(2/pi) hbar^2 Omega zeta(omega/Omega)"},
                                    {"zeta", "ln(1+u^2)/(2u) + atan(u)/u^2 - 1/u"}};
        save_summary(out, stem, meta);
        return meta;
    }
    throw ConfigError("figures: expected 1, 2 or 3");
}

int exit_code(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e)) return config_error;
    if (dynamic_cast<const ConvergenceError*>(&e)) return convergence_error;
    // grid and step-size guards derive from invalid_argument
    if (dynamic_cast<const std::invalid_argument*>(&e) || dynamic_cast<const std::domain_error*>(&e))
        return config_error;
    return failure;
}

int run(int argc, char** argv) {
    CLI::App app{"Radiation-pressure decoherence of a moving mirror"};
    app.require_subcommand(1);
    std::string config_path, out_dir = ".";
    int threads = 0;
    app.add_option("--config", config_path, "JSON configuration file");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--threads", threads, "worker threads (default: CASIMIR_DECOHERENCE_THREADS or all)");
    const std::pair<const char*, const char*> subcommands[] = {
        {"spectrum", "zeta(u) table and noise/dissipation kernels"},
        {"coeffs", "time-dependent damping and diffusion coefficients"},
        {"evolve", "Fokker-Planck evolution of a cat state against its mixture"},
        {"sieve", "entropy production over squeezed initial states"},
        {"pairs", "photon-pair emission probabilities and energy balance"},
        {"thermal", "thermal damping and SI decoherence times for a plate"},
    };
    for (auto [name, help] : subcommands) app.add_subcommand(name, help);
    int figure = 0;
    auto* fig = app.add_subcommand("figures", "figure presets 1, 2 or 3");
    fig->add_option("which", figure)->required()->check(CLI::Range(1, 3));
    app.fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return config_error;
    }

    if (threads <= 0) {
        if (const char* env = std::getenv("CASIMIR_DECOHERENCE_THREADS")) threads = std::atoi(env);
    }
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#endif

    try {
        Config cfg = config_path.empty() ? parse_config(json::object()) : load_config(config_path);
        fs::path out = out_dir;
        fs::create_directories(out);
        auto* sub = app.get_subcommands().front();
        const std::string name = sub->get_name();
        json summary;
        if (name == "spectrum") summary = cmd_spectrum(cfg, out);
        else if (name == "coeffs") summary = cmd_coeffs(cfg, out);
        else if (name == "evolve") summary = cmd_evolve(cfg, out);
        else if (name == "sieve") summary = cmd_sieve(cfg, out);
        else if (name == "pairs") summary = cmd_pairs(cfg, out);
        else if (name == "thermal") summary = cmd_thermal(cfg, out);
        else summary = cmd_figure(figure, cfg, out);
        std::cout << summary.dump(2) << "\n";
        return ok;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code(e);
    }
}

}  // namespace casdec::cli
