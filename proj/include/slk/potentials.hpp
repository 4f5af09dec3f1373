#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "slk/grid.hpp"
#include "slk/wavefunction.hpp"

namespace slk {

/// Real potential sampled on a domain. Values are finite everywhere.
class PotentialField {
public:
    PotentialField(Domain domain, std::vector<double> values);

    const Domain& domain() const noexcept { return domain_; }
    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const noexcept { return values_[i]; }

    double min() const;
    double max_abs() const;

private:
    Domain domain_;
    std::vector<double> values_;
};

/// Pointwise sum; both fields must share a domain.
PotentialField operator+(const PotentialField& a, const PotentialField& b);
PotentialField shifted(const PotentialField& v, double c);

/// phi(x) = c_plus g(x - a; sigma_plus) + c_minus g(x + a; sigma_minus) + c_0 g(x; sigma_0),
/// with g(y; s) = exp(-y^2 / (4 s^2)).
struct TripleGaussianGroundState {
    double a = 1.75;
    double sigma_plus = 0.45;
    double sigma_minus = 0.55;
    double sigma_0 = 0.5;
    double c_plus = 1.0;
    double c_minus = 0.8;
    double c_0 = 0.6;
};

/// Asymmetric quartic double well with a linear tilt.
struct DoubleWellParams {
    double a_plus = 2.25;
    double a_minus = 1.75;
    double v0 = 1.0;
    double delta = 0.1;
};

struct DisorderSpec {
    double sigma = 0.0;
    std::uint64_t seed = 42;
};

/// Samples the triple-Gaussian mixture and normalizes it.
/// Throws InvalidArgument if the mixture is not strictly positive on the grid.
WaveFunction toy1_ground_state(const TripleGaussianGroundState& params, const Grid1D& grid);

/// V = (nu^2 / 2) phi'' / phi from the analytic second derivative, so that
/// -(nu^2/2) phi'' + V phi = 0 pointwise. Evaluated as a weighted average of the
/// per-Gaussian log-derivative terms, which stays finite far in the tails.
PotentialField toy1_potential(const TripleGaussianGroundState& params, double nu, const Grid1D& grid);

/// V0 (x^2 - a^2)^2 / a^4 + delta x with a = a_plus for x >= 0 and a = a_minus for x < 0.
PotentialField double_well(const DoubleWellParams& params, const Grid1D& grid);

/// V(x) = -g x on sites x = 1..s.
PotentialField linear_tilt(double g, const Lattice& lattice);

/// Independent N(0, sigma^2) values on each site drawn from GaussianStream(seed).
PotentialField anderson_disorder(const DisorderSpec& spec, const Lattice& lattice);

/// Harmonic well 0.5 * k * (x - center)^2 on a grid.
PotentialField harmonic(double k, double center, const Grid1D& grid);

/// Reads a two-column CSV (x,V) with an optional header row; the value count must match the domain.
PotentialField tabulated_potential(const std::filesystem::path& file, const Domain& domain);

}  // namespace slk
