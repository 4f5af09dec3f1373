#include "slk/observables.hpp"

#include <cmath>
#include <string>

#include "slk/error.hpp"

namespace slk {

void ObservableSeries::record(double t, double norm_value, double energy_value, std::optional<double> overlap_value,
                              std::optional<double> arrival_value) {
    if (times.empty()) {
        if (overlap_value) {
            overlap.emplace();
        }
        if (arrival_value) {
            arrival_prob.emplace();
        }
    }
    if (overlap.has_value() != overlap_value.has_value() || arrival_prob.has_value() != arrival_value.has_value()) {
        throw InvalidArgument("observable columns must be recorded consistently");
    }
    times.push_back(t);
    norm.push_back(norm_value);
    energy.push_back(energy_value);
    if (overlap_value) {
        overlap->push_back(*overlap_value);
    }
    if (arrival_value) {
        arrival_prob->push_back(*arrival_value);
    }
}

void ObservableSeries::validate() const {
    const std::size_t n = times.size();
    if (norm.size() != n || energy.size() != n || (overlap && overlap->size() != n) ||
        (arrival_prob && arrival_prob->size() != n)) {
        throw InvalidArgument("observable series columns have different lengths");
    }
    for (std::size_t i = 1; i < n; ++i) {
        if (!(times[i] > times[i - 1])) {
            throw InvalidArgument("observable times are not strictly increasing at record " + std::to_string(i));
        }
    }
    const auto check_unit = [](const std::optional<std::vector<double>>& col, const char* name) {
        if (!col) {
            return;
        }
        for (double v : *col) {
            if (!(v >= 0.0 && v <= 1.0 + 1e-10)) {
                throw InvalidArgument(std::string(name) + " value " + std::to_string(v) + " outside [0, 1]");
            }
        }
    };
    check_unit(overlap, "overlap");
    check_unit(arrival_prob, "arrival probability");
}

double vacuum_overlap(const WaveFunction& psi, const WaveFunction& reference) {
    return std::norm(inner(reference, psi));
}

double arrival_probability(std::span<const Complex> amplitudes, std::size_t delta) {
    const std::size_t s = amplitudes.size();
    if (delta == 0 || delta > s) {
        throw InvalidArgument("arrival window " + std::to_string(delta) + " outside 1.." + std::to_string(s));
    }
    double sum = 0.0;
    for (std::size_t i = s - delta; i < s; ++i) {
        sum += std::norm(amplitudes[i]);
    }
    return sum;
}

double arrival_probability(const WaveFunction& psi, std::size_t delta) {
    if (!is_lattice(psi.domain())) {
        throw InvalidArgument("arrival probability is defined on lattice states only");
    }
    return arrival_probability(psi.amplitudes(), delta);
}

}  // namespace slk
