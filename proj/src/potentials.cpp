#include "slk/potentials.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "slk/error.hpp"
#include "slk/rng.hpp"

namespace slk {

PotentialField::PotentialField(Domain domain, std::vector<double> values)
    : domain_(std::move(domain)), values_(std::move(values)) {
    if (values_.size() != domain_size(domain_)) {
        throw InvalidArgument("potential has " + std::to_string(values_.size()) + " values for a domain of size " +
                              std::to_string(domain_size(domain_)));
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw InvalidArgument("potential is not finite at index " + std::to_string(i));
        }
    }
}

double PotentialField::min() const { return *std::min_element(values_.begin(), values_.end()); }

double PotentialField::max_abs() const {
    double m = 0.0;
    for (double v : values_) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

PotentialField operator+(const PotentialField& a, const PotentialField& b) {
    if (!(a.domain() == b.domain())) {
        throw InvalidArgument("cannot add potentials on different domains");
    }
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = a[i] + b[i];
    }
    return {a.domain(), std::move(out)};
}

PotentialField shifted(const PotentialField& v, double c) {
    std::vector<double> out(v.values().begin(), v.values().end());
    for (double& x : out) {
        x += c;
    }
    return {v.domain(), std::move(out)};
}

namespace {

struct GaussianTerm {
    double center;
    double sigma;
    double coeff;
};

std::array<GaussianTerm, 3> terms_of(const TripleGaussianGroundState& p) {
    if (!(p.sigma_plus > 0.0) || !(p.sigma_minus > 0.0) || !(p.sigma_0 > 0.0)) {
        throw InvalidArgument("triple-Gaussian widths must be positive");
    }
    return {{{p.a, p.sigma_plus, p.c_plus}, {-p.a, p.sigma_minus, p.c_minus}, {0.0, p.sigma_0, p.c_0}}};
}

double exponent(const GaussianTerm& t, double x) {
    const double y = x - t.center;
    return -y * y / (4.0 * t.sigma * t.sigma);
}

// Mixture weights rescaled by exp(-max exponent); their sum has the sign of phi(x).
std::array<double, 3> scaled_weights(const std::array<GaussianTerm, 3>& terms, double x) {
    std::array<double, 3> e{};
    double top = -INFINITY;
    for (std::size_t k = 0; k < 3; ++k) {
        e[k] = exponent(terms[k], x);
        if (terms[k].coeff != 0.0) {
            top = std::max(top, e[k]);
        }
    }
    std::array<double, 3> w{};
    for (std::size_t k = 0; k < 3; ++k) {
        w[k] = terms[k].coeff == 0.0 ? 0.0 : terms[k].coeff * std::exp(e[k] - top);
    }
    return w;
}

void require_positive(double scaled_sum, double x) {
    if (!(scaled_sum > 0.0)) {
        throw InvalidArgument("triple-Gaussian ground state is not positive at x = " + std::to_string(x));
    }
}

}  // namespace

WaveFunction toy1_ground_state(const TripleGaussianGroundState& params, const Grid1D& grid) {
    const auto terms = terms_of(params);
    std::vector<Complex> amp(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid.x(i);
        const auto w = scaled_weights(terms, x);
        require_positive(w[0] + w[1] + w[2], x);
        double phi = 0.0;
        for (const auto& t : terms) {
            phi += t.coeff * std::exp(exponent(t, x));
        }
        amp[i] = phi;
    }
    return normalize(WaveFunction(grid, std::move(amp)));
}

PotentialField toy1_potential(const TripleGaussianGroundState& params, double nu, const Grid1D& grid) {
    if (!(nu > 0.0)) {
        throw InvalidArgument("nu must be positive");
    }
    const auto terms = terms_of(params);
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid.x(i);
        const auto w = scaled_weights(terms, x);
        const double total = w[0] + w[1] + w[2];
        require_positive(total, x);
        // g'' / g = ((x - mu) / (2 s^2))^2 - 1 / (2 s^2)
        double weighted = 0.0;
        for (std::size_t k = 0; k < 3; ++k) {
            const double s2 = terms[k].sigma * terms[k].sigma;
            const double slope = (x - terms[k].center) / (2.0 * s2);
            weighted += w[k] * (slope * slope - 1.0 / (2.0 * s2));
        }
        v[i] = 0.5 * nu * nu * weighted / total;
    }
    return {grid, std::move(v)};
}

PotentialField double_well(const DoubleWellParams& p, const Grid1D& grid) {
    if (!(p.a_plus > 0.0) || !(p.a_minus > 0.0)) {
        throw InvalidArgument("double well positions a_plus and a_minus must be positive");
    }
    const double ap4 = std::pow(p.a_plus, 4);
    const double am4 = std::pow(p.a_minus, 4);
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid.x(i);
        const double x2 = x * x;
        if (x >= 0.0) {
            const double d = x2 - p.a_plus * p.a_plus;
            v[i] = p.v0 * d * d / ap4 + p.delta * x;
        } else {
            const double d = x2 - p.a_minus * p.a_minus;
            v[i] = p.v0 * d * d / am4 + p.delta * x;
        }
    }
    return {grid, std::move(v)};
}

PotentialField linear_tilt(double g, const Lattice& lattice) {
    std::vector<double> v(lattice.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = -g * lattice.x(i);
    }
    return {lattice, std::move(v)};
}

PotentialField anderson_disorder(const DisorderSpec& spec, const Lattice& lattice) {
    if (!(spec.sigma >= 0.0) || !std::isfinite(spec.sigma)) {
        throw InvalidArgument("disorder sigma must be a finite nonnegative number");
    }
    std::vector<double> v(lattice.size(), 0.0);
    if (spec.sigma > 0.0) {
        GaussianStream stream(spec.seed);
        for (double& x : v) {
            x = spec.sigma * stream.next();
        }
    }
    return {lattice, std::move(v)};
}

PotentialField harmonic(double k, double center, const Grid1D& grid) {
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double y = grid.x(i) - center;
        v[i] = 0.5 * k * y * y;
    }
    return {grid, std::move(v)};
}

namespace {

bool parse_double(std::string_view text, double& out) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) {
        text.remove_prefix(1);
    }
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
        text.remove_suffix(1);
    }
    if (!text.empty() && text.front() == '+') {
        text.remove_prefix(1);
    }
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc() && ptr == text.data() + text.size();
}

}  // namespace

PotentialField tabulated_potential(const std::filesystem::path& file, const Domain& domain) {
    std::ifstream in(file);
    if (!in) {
        throw InvalidArgument("cannot open potential table " + file.string());
    }
    std::vector<double> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") {
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw InvalidArgument(file.string() + ":" + std::to_string(line_no) + ": expected two columns x,V");
        }
        double x = 0.0;
        double v = 0.0;
        const std::string_view lv(line);
        if (!parse_double(lv.substr(0, comma), x) || !parse_double(lv.substr(comma + 1), v)) {
            if (line_no == 1 && values.empty()) {
                continue;  // header
            }
            throw InvalidArgument(file.string() + ":" + std::to_string(line_no) + ": not a number");
        }
        values.push_back(v);
    }
    return {domain, std::move(values)};
}

}  // namespace slk
