#pragma once

#include <optional>
#include <vector>

#include "slk/grid.hpp"
#include "slk/observables.hpp"
#include "slk/wavefunction.hpp"

namespace slk {

/// W(t, x) on a grid; points below the density floor are absent.
struct ReconstructedPotential {
    Grid1D grid;
    std::vector<std::optional<double>> values;
    /// Largest |Im| of the pointwise ratio over the defined points (zero for a real eigenstate).
    double max_imag_residual = 0.0;
};

struct Snapshot {
    double time = 0.0;
    DensityPhase density_phase;
    std::optional<ReconstructedPotential> w;
};

struct DensityRow {
    double time = 0.0;
    std::vector<double> rho;
};

/// Output of a continuous or discrete run.
struct RunResult {
    WaveFunction final_state;
    ObservableSeries series;
    std::vector<Snapshot> snapshots;   // continuous runs
    std::vector<DensityRow> density_map;  // lattice runs
};

}  // namespace slk
