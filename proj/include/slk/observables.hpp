#pragma once

#include <optional>
#include <vector>

#include "slk/wavefunction.hpp"

namespace slk {

/// Per-record time series shared by both propagators.
struct ObservableSeries {
    std::vector<double> times;
    std::vector<double> norm;
    std::vector<double> energy;
    std::optional<std::vector<double>> overlap;
    std::optional<std::vector<double>> arrival_prob;

    std::size_t size() const noexcept { return times.size(); }

    /// Appends one record. Optional columns must be supplied consistently from the first record on.
    void record(double t, double norm_value, double energy_value, std::optional<double> overlap_value,
                std::optional<double> arrival_value);

    /// Throws InvalidArgument if the columns disagree in length, times are not
    /// strictly increasing, or an overlap/arrival value leaves [0, 1 + 1e-10].
    void validate() const;
};

/// |<reference|psi>|^2
double vacuum_overlap(const WaveFunction& psi, const WaveFunction& reference);

/// Probability mass on the `delta` rightmost lattice sites.
/// Throws InvalidArgument if psi is not on a lattice or delta is outside 1..s.
double arrival_probability(const WaveFunction& psi, std::size_t delta);

/// Same as above on raw lattice amplitudes (no checks beyond delta <= size).
double arrival_probability(std::span<const Complex> amplitudes, std::size_t delta);

}  // namespace slk
