#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "slk/config.hpp"
#include "slk/potentials.hpp"
#include "slk/run_result.hpp"
#include "slk/spectral.hpp"

namespace slk {

/// Everything a scenario needs before time stepping starts.
struct Scenario {
    ExperimentConfig config;
    PotentialField potential;
    WaveFunction initial;
    /// Spectral-oracle ground state for grid scenarios (overlap reference).
    std::optional<SpectrumResult> reference;
};

Scenario build_scenario(const ExperimentConfig& cfg);

struct ExperimentOutcome {
    Scenario scenario;
    RunResult run;
};

/// Runs the scenario in memory; no files are written.
ExperimentOutcome execute(const ExperimentConfig& cfg);

/// Paths are relative to the output directory, sorted.
struct Manifest {
    std::filesystem::path directory;
    std::vector<std::string> files;
    nlohmann::json document;
};

/// Runs the scenario and writes series.csv, potential.csv, manifest.json and
/// snapshots/t_<time>.csv (grid) or density_map.csv (lattice) into cfg.output_dir.
Manifest run_experiment(const ExperimentConfig& cfg);

/// Writes the files for an outcome that has already been computed.
Manifest emit_outputs(const ExperimentOutcome& outcome, const std::filesystem::path& dir);

/// Spectrum of the scenario's Hamiltonian: spectrum.csv, ground_state.csv, potential.csv, manifest.json.
Manifest write_spectrum(const ExperimentConfig& cfg);

struct EnsembleResult {
    std::vector<std::uint64_t> seeds;
    std::vector<double> times;
    /// arrival[r][i]: realization r at times[i].
    std::vector<std::vector<double>> arrival;
    std::vector<double> q1;
    std::vector<double> median;
    std::vector<double> q3;
    std::vector<double> max_arrival;    // per realization, over the horizon
    std::vector<double> final_arrival;  // per realization, at t_max
};

/// Runs seeds seed, seed+1, ... on up to `threads` worker threads (0: hardware
/// concurrency). Realizations are independent and merged by index, so the result
/// does not depend on the thread count. Requires a lattice kind.
EnsembleResult disorder_ensemble(const ExperimentConfig& cfg, std::size_t n_realizations, std::size_t threads = 0);

/// Writes ensemble_arrival.csv (t, r0, r1, ...), ensemble_stats.csv (t, q1, median, q3)
/// and manifest.json.
Manifest emit_ensemble(const ExperimentConfig& cfg, const EnsembleResult& result);

/// Quantile with linear interpolation between order statistics (q in [0, 1]).
double quantile(std::vector<double> values, double q);

}  // namespace slk
