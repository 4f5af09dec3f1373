#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "slk/potentials.hpp"

namespace slk {

enum class ExperimentKind { toy1, toy2, bloch, anderson, custom };

std::string to_string(ExperimentKind kind);

/// Numerics for runs on Grid1D.
struct GridNumerics {
    double x_min = -10.0;
    double x_max = 10.0;
    std::size_t n = 1024;
    double dt = 1e-3;
    double t_max = 50.0;
    std::size_t record_every = 10;
    std::size_t snapshot_every = 5000;
    double rho_floor = 1e-12;
    double w_rho_floor = 1e-6;
    bool subtract_mean_phase = true;
};

/// Numerics for runs on the open chain. A null t_max means 4s (bloch) or 20s (anderson).
struct LatticeNumerics {
    double dt = 0.02;
    std::optional<double> t_max;
    std::size_t record_every = 5;
    std::size_t map_every = 25;
};

struct Toy1Physical {
    double nu = 1.0;
    double beta = 0.5;
    TripleGaussianGroundState mixture;
};

/// Start is a Gaussian at initial_center (null: +a_plus) with width initial_sigma
/// (null: harmonic width of the right well, sigma^2 = nu / (2 sqrt(8 v0 / a_plus^2))).
struct Toy2Physical {
    double nu = 1.0;
    double beta = 0.3;
    DoubleWellParams well;
    std::optional<double> initial_center;
    std::optional<double> initial_sigma;
};

/// Tilt, friction and disorder in units of g0 = 2/s and sigma0 = (10/s)^(3/2).
struct LatticePhysical {
    std::size_t s = 100;
    std::size_t epsilon = 17;
    std::optional<std::size_t> k;  // null: (epsilon - 1) / 2
    double g_factor = 0.0;
    double beta_factor = 0.0;
    double sigma_factor = 0.0;
    std::optional<std::size_t> arrival_sites;  // null: 2 epsilon
};

/// User-supplied potential table on a grid (Gaussian start) or a lattice (sine packet).
struct CustomPhysical {
    std::string domain = "grid";
    std::string potential_file;
    double nu = 1.0;
    double beta = 0.0;
    double initial_center = 0.0;
    double initial_sigma = 1.0;
    double initial_momentum = 0.0;
    std::size_t s = 100;
    std::size_t epsilon = 17;
    std::size_t k = 8;
    std::optional<std::size_t> arrival_sites;
};

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::toy1;
    std::optional<std::string> preset;
    std::uint64_t seed = 42;
    std::filesystem::path output_dir = "out";

    Toy1Physical toy1;
    Toy2Physical toy2;
    LatticePhysical lattice;
    CustomPhysical custom;
    GridNumerics grid;
    LatticeNumerics chain;

    bool on_lattice() const noexcept;
};

/// Lattice quantities after defaults are resolved.
struct ResolvedLattice {
    double g0 = 0.0;
    double sigma0 = 0.0;
    double g = 0.0;
    double beta = 0.0;
    double sigma = 0.0;
    std::size_t k = 0;
    std::size_t delta = 0;
    double t_max = 0.0;
};

ResolvedLattice resolve_lattice(const ExperimentConfig& cfg);

/// Names accepted by `preset`, in display order.
const std::vector<std::string>& preset_names();
std::string preset_description(const std::string& name);

/// The JSON patch a preset applies on top of its kind's defaults.
nlohmann::json preset_patch(const std::string& name);

/// Builds a config from JSON. The document may name a preset, whose values are
/// applied first; the document's own values win. A manifest written by a run is
/// accepted too (its "config" member is used). Unknown keys, wrong types and
/// out-of-range values raise ConfigError with the dotted field path.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& file);

/// Reads a JSON config file; a run manifest is reduced to its "config" member.
nlohmann::json read_config_document(const std::filesystem::path& file);

/// Applies `key=value` overrides (dotted keys; the value is read as JSON when it
/// parses, otherwise as a string) to a config document.
void apply_override(nlohmann::json& doc, const std::string& assignment);

/// The fully resolved config; parse_config(to_json(cfg)) reproduces cfg, with null
/// defaults written out as concrete values.
nlohmann::json to_json(const ExperimentConfig& cfg);

}  // namespace slk
