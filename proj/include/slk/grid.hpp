#pragma once

#include <cstddef>
#include <variant>

namespace slk {

/// Uniform discretization of [x_min, x_max] with n points, both endpoints included.
class Grid1D {
public:
    Grid1D(double x_min, double x_max, std::size_t n);

    double x_min() const noexcept { return x_min_; }
    double x_max() const noexcept { return x_max_; }
    std::size_t size() const noexcept { return n_; }
    double dx() const noexcept { return dx_; }
    double x(std::size_t i) const noexcept { return x_min_ + static_cast<double>(i) * dx_; }

    friend bool operator==(const Grid1D&, const Grid1D&) = default;

private:
    double x_min_;
    double x_max_;
    std::size_t n_;
    double dx_;
};

/// The chain {1, ..., s} with nearest-neighbour edges. Index i stores site i + 1.
class Lattice {
public:
    explicit Lattice(std::size_t s);

    std::size_t size() const noexcept { return s_; }
    /// Site label of storage index i.
    double x(std::size_t i) const noexcept { return static_cast<double>(i + 1); }

    friend bool operator==(const Lattice&, const Lattice&) = default;

private:
    std::size_t s_;
};

using Domain = std::variant<Grid1D, Lattice>;

std::size_t domain_size(const Domain& d) noexcept;

/// Quadrature weight of one point: dx on a grid, 1 on a lattice.
double domain_weight(const Domain& d) noexcept;

/// Coordinate of storage index i (grid position or lattice site label).
double domain_coordinate(const Domain& d, std::size_t i) noexcept;

inline bool is_lattice(const Domain& d) noexcept { return std::holds_alternative<Lattice>(d); }

}  // namespace slk
