#include "slk/rng.hpp"

#include <cmath>
#include <numbers>

namespace slk {

double GaussianStream::uniform() {
    constexpr double scale = 1.0 / 9007199254740992.0;  // 2^-53
    return (static_cast<double>(engine_() >> 11) + 0.5) * scale;
}

double GaussianStream::next() {
    if (pending_) {
        const double z = *pending_;
        pending_.reset();
        return z;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    pending_ = r * std::sin(angle);
    return r * std::cos(angle);
}

}  // namespace slk
