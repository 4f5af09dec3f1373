#include "slk/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include "slk/continuous.hpp"
#include "slk/discrete.hpp"
#include "slk/error.hpp"
#include "slk/io.hpp"

namespace slk {

using nlohmann::json;

namespace {

constexpr const char* kManifestFormat = "slk-manifest/1";

WaveFunction gaussian(const Grid1D& grid, double center, double sigma, double momentum) {
    std::vector<Complex> amp(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double y = grid.x(i) - center;
        amp[i] = std::polar(std::exp(-y * y / (4.0 * sigma * sigma)), momentum * grid.x(i));
    }
    return normalize(WaveFunction(grid, std::move(amp)));
}

Grid1D make_grid(const GridNumerics& g) { return {g.x_min, g.x_max, g.n}; }

double grid_nu(const ExperimentConfig& cfg) {
    switch (cfg.kind) {
        case ExperimentKind::toy1:
            return cfg.toy1.nu;
        case ExperimentKind::toy2:
            return cfg.toy2.nu;
        default:
            return cfg.custom.nu;
    }
}

double grid_beta(const ExperimentConfig& cfg) {
    switch (cfg.kind) {
        case ExperimentKind::toy1:
            return cfg.toy1.beta;
        case ExperimentKind::toy2:
            return cfg.toy2.beta;
        default:
            return cfg.custom.beta;
    }
}

// Initial centre and width of the toy-2 packet after defaults.
std::pair<double, double> toy2_start(const Toy2Physical& p) {
    const double center = p.initial_center.value_or(p.well.a_plus);
    if (p.initial_sigma) {
        return {center, *p.initial_sigma};
    }
    if (!(p.well.v0 > 0.0)) {
        throw ConfigError("physical.initial_sigma", "required when v0 <= 0 (no harmonic width)");
    }
    const double k = 8.0 * p.well.v0 / (p.well.a_plus * p.well.a_plus);
    return {center, std::sqrt(p.nu / (2.0 * std::sqrt(k)))};
}

double lattice_beta(const ExperimentConfig& cfg) {
    return cfg.kind == ExperimentKind::custom ? cfg.custom.beta : resolve_lattice(cfg).beta;
}

std::size_t lattice_delta(const ExperimentConfig& cfg) {
    if (cfg.kind == ExperimentKind::custom) {
        return cfg.custom.arrival_sites.value_or(2 * cfg.custom.epsilon);
    }
    return resolve_lattice(cfg).delta;
}

double lattice_t_max(const ExperimentConfig& cfg) {
    if (cfg.kind == ExperimentKind::custom) {
        return cfg.chain.t_max.value_or(4.0 * static_cast<double>(cfg.custom.s));
    }
    return resolve_lattice(cfg).t_max;
}

json derived_block(const Scenario& sc) {
    const auto& cfg = sc.config;
    json d = json::object();
    if (cfg.on_lattice()) {
        if (cfg.kind != ExperimentKind::custom) {
            const auto r = resolve_lattice(cfg);
            d = {{"g0", r.g0}, {"sigma0", r.sigma0}, {"g", r.g},         {"beta", r.beta},
                 {"sigma", r.sigma}, {"k", r.k},    {"arrival_sites", r.delta}, {"t_max", r.t_max}};
        } else {
            d = {{"arrival_sites", lattice_delta(cfg)}, {"t_max", lattice_t_max(cfg)}};
        }
        d["steps"] = step_count(lattice_t_max(cfg), cfg.chain.dt);
        d["disorder_seed"] = cfg.seed;
    } else {
        const auto& grid = std::get<Grid1D>(sc.potential.domain());
        d["dx"] = grid.dx();
        d["steps"] = step_count(cfg.grid.t_max, cfg.grid.dt);
        if (sc.reference) {
            d["ground_energy"] = sc.reference->eigenvalues.front();
        }
        if (cfg.kind == ExperimentKind::toy1) {
            d["initial_center"] = -cfg.toy1.mixture.a;
            d["initial_sigma"] = cfg.toy1.mixture.sigma_minus;
        } else if (cfg.kind == ExperimentKind::toy2) {
            const auto [c, s] = toy2_start(cfg.toy2);
            d["initial_center"] = c;
            d["initial_sigma"] = s;
        }
    }
    return d;
}

json summary_block(const RunResult& run) {
    const auto& s = run.series;
    json j = {{"records", s.size()}, {"final_time", s.times.back()}, {"final_energy", s.energy.back()}};
    double worst_norm = 0.0;
    for (double n : s.norm) {
        worst_norm = std::max(worst_norm, std::abs(n - 1.0));
    }
    j["max_norm_deviation"] = worst_norm;
    double worst_rise = 0.0;
    for (std::size_t i = 1; i < s.size(); ++i) {
        worst_rise = std::max(worst_rise, s.energy[i] - s.energy[i - 1]);
    }
    j["max_energy_increase"] = worst_rise;
    if (s.overlap) {
        j["final_overlap"] = s.overlap->back();
    }
    if (s.arrival_prob) {
        j["final_arrival"] = s.arrival_prob->back();
        j["max_arrival"] = *std::ranges::max_element(*s.arrival_prob);
    }
    return j;
}

Manifest finish_manifest(const std::filesystem::path& dir, std::vector<std::string> files, json doc) {
    files.push_back("manifest.json");
    std::ranges::sort(files);
    doc["files"] = files;
    io::write_text(dir / "manifest.json", doc.dump(2) + "\n");
    return {dir, std::move(files), std::move(doc)};
}

}  // namespace

Scenario build_scenario(const ExperimentConfig& cfg) {
    switch (cfg.kind) {
        case ExperimentKind::toy1: {
            const Grid1D grid = make_grid(cfg.grid);
            auto v = toy1_potential(cfg.toy1.mixture, cfg.toy1.nu, grid);
            auto psi = gaussian(grid, -cfg.toy1.mixture.a, cfg.toy1.mixture.sigma_minus, 0.0);
            auto ref = ground_state(v, cfg.toy1.nu);
            return {cfg, std::move(v), std::move(psi), std::move(ref)};
        }
        case ExperimentKind::toy2: {
            const Grid1D grid = make_grid(cfg.grid);
            auto v = double_well(cfg.toy2.well, grid);
            const auto [center, sigma] = toy2_start(cfg.toy2);
            auto psi = gaussian(grid, center, sigma, 0.0);
            auto ref = ground_state(v, cfg.toy2.nu);
            return {cfg, std::move(v), std::move(psi), std::move(ref)};
        }
        case ExperimentKind::bloch:
        case ExperimentKind::anderson: {
            const Lattice lattice(cfg.lattice.s);
            const auto r = resolve_lattice(cfg);
            auto v = linear_tilt(r.g, lattice) + anderson_disorder({r.sigma, cfg.seed}, lattice);
            auto psi = sine_packet({cfg.lattice.epsilon, r.k}, lattice);
            return {cfg, std::move(v), std::move(psi), std::nullopt};
        }
        case ExperimentKind::custom: {
            const auto& p = cfg.custom;
            if (p.domain == "grid") {
                const Grid1D grid = make_grid(cfg.grid);
                auto v = tabulated_potential(p.potential_file, grid);
                auto psi = gaussian(grid, p.initial_center, p.initial_sigma, p.initial_momentum);
                auto ref = ground_state(v, p.nu);
                return {cfg, std::move(v), std::move(psi), std::move(ref)};
            }
            const Lattice lattice(p.s);
            auto v = tabulated_potential(p.potential_file, lattice);
            auto psi = sine_packet({p.epsilon, p.k}, lattice);
            return {cfg, std::move(v), std::move(psi), std::nullopt};
        }
    }
    throw InvalidArgument("unknown experiment kind");
}

ExperimentOutcome execute(const ExperimentConfig& cfg) {
    Scenario sc = build_scenario(cfg);
    if (cfg.on_lattice()) {
        const DiscreteSlkParams p{lattice_beta(cfg), cfg.chain.dt, lattice_t_max(cfg)};
        const DiscreteRunOptions opt{cfg.chain.record_every, cfg.chain.map_every, lattice_delta(cfg)};
        auto run = run_discrete(sc.initial, sc.potential, p, opt);
        return {std::move(sc), std::move(run)};
    }
    const auto& g = cfg.grid;
    SlkParams p;
    p.nu = grid_nu(cfg);
    p.beta = grid_beta(cfg);
    p.dt = g.dt;
    p.t_max = g.t_max;
    p.rho_floor = g.rho_floor;
    p.subtract_mean_phase = g.subtract_mean_phase;
    ContinuousRunOptions opt;
    opt.record_every = g.record_every;
    opt.snapshot_every = g.snapshot_every;
    opt.w_rho_floor = g.w_rho_floor;
    if (sc.reference) {
        opt.reference = sc.reference->ground_state;
    }
    auto run = run_continuous(sc.initial, sc.potential, p, opt);
    return {std::move(sc), std::move(run)};
}

Manifest emit_outputs(const ExperimentOutcome& outcome, const std::filesystem::path& dir) {
    const auto& sc = outcome.scenario;
    std::vector<std::string> files;
    io::write_series(dir / "series.csv", outcome.run.series);
    files.emplace_back("series.csv");
    io::write_potential(dir / "potential.csv", sc.potential);
    files.emplace_back("potential.csv");
    if (sc.config.on_lattice()) {
        if (!outcome.run.density_map.empty()) {
            io::write_density_map(dir / "density_map.csv", outcome.run.density_map);
            files.emplace_back("density_map.csv");
        }
    } else {
        for (const auto& snap : outcome.run.snapshots) {
            const std::string name = "snapshots/" + io::snapshot_filename(snap.time);
            io::write_snapshot(dir / name, snap, sc.potential);
            files.push_back(name);
        }
    }
    json doc = {{"format", kManifestFormat},
                {"command", "run"},
                {"config", to_json(sc.config)},
                {"derived", derived_block(sc)},
                {"summary", summary_block(outcome.run)}};
    return finish_manifest(dir, std::move(files), std::move(doc));
}

Manifest run_experiment(const ExperimentConfig& cfg) { return emit_outputs(execute(cfg), cfg.output_dir); }

Manifest write_spectrum(const ExperimentConfig& cfg) {
    const Scenario sc = build_scenario(cfg);
    const double coefficient = cfg.on_lattice() ? kLatticeHopping : grid_nu(cfg);
    const auto spectrum = sc.reference ? *sc.reference : ground_state(sc.potential, coefficient);
    const auto& dir = cfg.output_dir;
    io::write_spectrum(dir / "spectrum.csv", spectrum.eigenvalues);
    io::write_ground_state(dir / "ground_state.csv", spectrum.ground_state);
    io::write_potential(dir / "potential.csv", sc.potential);
    json doc = {{"format", kManifestFormat},
                {"command", "spectrum"},
                {"config", to_json(cfg)},
                {"derived", derived_block(sc)},
                {"summary",
                 {{"ground_energy", spectrum.eigenvalues.front()},
                  {"residual", spectrum.residual},
                  {"dimension", spectrum.eigenvalues.size()}}}};
    return finish_manifest(dir, {"spectrum.csv", "ground_state.csv", "potential.csv"}, std::move(doc));
}

double quantile(std::vector<double> values, double q) {
    if (values.empty()) {
        throw InvalidArgument("quantile of an empty sample");
    }
    std::ranges::sort(values);
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

EnsembleResult disorder_ensemble(const ExperimentConfig& cfg, std::size_t n_realizations, std::size_t threads) {
    if (cfg.kind != ExperimentKind::bloch && cfg.kind != ExperimentKind::anderson) {
        throw ConfigError("kind", "ensembles need a lattice kind (bloch or anderson)");
    }
    if (n_realizations == 0) {
        throw ConfigError("realizations", "must be positive");
    }
    EnsembleResult out;
    out.arrival.resize(n_realizations);
    out.max_arrival.resize(n_realizations);
    out.final_arrival.resize(n_realizations);
    std::vector<std::vector<double>> times(n_realizations);
    std::vector<std::exception_ptr> errors(n_realizations);
    for (std::size_t r = 0; r < n_realizations; ++r) {
        out.seeds.push_back(cfg.seed + r);
    }

    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t r = next++; r < n_realizations; r = next++) {
            try {
                ExperimentConfig c = cfg;
                c.seed = out.seeds[r];
                c.chain.map_every = std::numeric_limits<std::size_t>::max();  // no density map needed
                auto outcome = execute(c);
                auto& arrival = *outcome.run.series.arrival_prob;
                out.max_arrival[r] = *std::ranges::max_element(arrival);
                out.final_arrival[r] = arrival.back();
                out.arrival[r] = std::move(arrival);
                times[r] = std::move(outcome.run.series.times);
            } catch (...) {
                errors[r] = std::current_exception();
            }
        }
    };
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = std::min(threads, n_realizations);
    {
        std::vector<std::jthread> pool;
        for (std::size_t t = 1; t < threads; ++t) {
            pool.emplace_back(worker);
        }
        worker();
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }

    out.times = std::move(times.front());
    const std::size_t n_times = out.times.size();
    std::vector<double> column(n_realizations);
    for (std::size_t i = 0; i < n_times; ++i) {
        for (std::size_t r = 0; r < n_realizations; ++r) {
            column[r] = out.arrival[r][i];
        }
        out.q1.push_back(quantile(column, 0.25));
        out.median.push_back(quantile(column, 0.5));
        out.q3.push_back(quantile(column, 0.75));
    }
    return out;
}

Manifest emit_ensemble(const ExperimentConfig& cfg, const EnsembleResult& result) {
    const auto& dir = cfg.output_dir;
    std::vector<std::string> header{"t"};
    for (std::size_t r = 0; r < result.arrival.size(); ++r) {
        header.push_back("r" + std::to_string(r));
    }
    {
        io::CsvWriter w(dir / "ensemble_arrival.csv", header);
        for (std::size_t i = 0; i < result.times.size(); ++i) {
            w.cell(result.times[i]);
            for (const auto& curve : result.arrival) {
                w.cell(curve[i]);
            }
            w.end_row();
        }
        w.close();
    }
    {
        io::CsvWriter w(dir / "ensemble_stats.csv", {"t", "q1", "median", "q3"});
        for (std::size_t i = 0; i < result.times.size(); ++i) {
            w.cell(result.times[i]).cell(result.q1[i]).cell(result.median[i]).cell(result.q3[i]);
            w.end_row();
        }
        w.close();
    }
    json doc = {{"format", kManifestFormat},
                {"command", "ensemble"},
                {"config", to_json(cfg)},
                {"derived", derived_block(build_scenario(cfg))},
                {"summary",
                 {{"realizations", result.arrival.size()},
                  {"seeds", result.seeds},
                  {"max_arrival", result.max_arrival},
                  {"final_arrival", result.final_arrival},
                  {"median_max_arrival", quantile(result.max_arrival, 0.5)},
                  {"median_final_arrival", quantile(result.final_arrival, 0.5)}}}};
    return finish_manifest(dir, {"ensemble_arrival.csv", "ensemble_stats.csv"}, std::move(doc));
}

}  // namespace slk
