#pragma once

#include <cstdint>
#include <optional>
#include <random>

namespace slk {

/// Reproducible standard-normal stream.
///
/// Engine: std::mt19937_64 seeded directly with the 64-bit seed (its output
/// sequence is fixed by the C++ standard). Uniforms take the top 53 bits,
/// u = (bits + 0.5) / 2^53, so u lies strictly inside (0, 1). Normals use the
/// basic Box-Muller transform on consecutive uniform pairs (u1, u2):
///   z0 = sqrt(-2 ln u1) cos(2 pi u2),  z1 = sqrt(-2 ln u1) sin(2 pi u2),
/// returned in the order z0, z1. std::normal_distribution is avoided because
/// its algorithm differs between standard libraries.
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}

    double uniform();
    double next();

private:
    std::mt19937_64 engine_;
    std::optional<double> pending_;
};

}  // namespace slk
