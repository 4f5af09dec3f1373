#include "slk/grid.hpp"

#include <cmath>
#include <string>

#include "slk/error.hpp"

namespace slk {

Grid1D::Grid1D(double x_min, double x_max, std::size_t n) : x_min_(x_min), x_max_(x_max), n_(n) {
    if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_min < x_max)) {
        throw InvalidArgument("grid requires finite x_min < x_max");
    }
    if (n < 3) {
        throw InvalidArgument("grid requires at least 3 points, got " + std::to_string(n));
    }
    dx_ = (x_max - x_min) / static_cast<double>(n - 1);
}

Lattice::Lattice(std::size_t s) : s_(s) {
    if (s == 0) {
        throw InvalidArgument("lattice requires at least one site");
    }
}

std::size_t domain_size(const Domain& d) noexcept {
    return std::visit([](const auto& dom) { return dom.size(); }, d);
}

double domain_weight(const Domain& d) noexcept {
    if (const auto* g = std::get_if<Grid1D>(&d)) {
        return g->dx();
    }
    return 1.0;
}

double domain_coordinate(const Domain& d, std::size_t i) noexcept {
    return std::visit([i](const auto& dom) { return dom.x(i); }, d);
}

}  // namespace slk
