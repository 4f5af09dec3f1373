#include "slk/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "slk/error.hpp"

namespace slk::io {

namespace {

void open_for_write(std::ofstream& out, const std::filesystem::path& file) {
    std::error_code ec;
    if (file.has_parent_path()) {
        std::filesystem::create_directories(file.parent_path(), ec);
        if (ec) {
            throw RuntimeFailure("cannot create directory " + file.parent_path().string() + ": " + ec.message());
        }
    }
    out.open(file, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw RuntimeFailure("cannot write " + file.string());
    }
}

}  // namespace

std::string format_real(double value) {
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
    return {buf, res.ptr};
}

CsvWriter::CsvWriter(const std::filesystem::path& file, std::initializer_list<std::string_view> header)
    : CsvWriter(file, std::vector<std::string>(header.begin(), header.end())) {}

CsvWriter::CsvWriter(const std::filesystem::path& file, const std::vector<std::string>& header) : path_(file) {
    open_for_write(out_, file);
    for (std::size_t i = 0; i < header.size(); ++i) {
        out_ << (i ? "," : "") << header[i];
    }
    out_ << '\n';
}

void CsvWriter::separator() {
    if (row_started_) {
        line_ += ',';
    }
    row_started_ = true;
}

CsvWriter& CsvWriter::cell(double value) {
    separator();
    line_ += format_real(value);
    return *this;
}

CsvWriter& CsvWriter::cell(std::optional<double> value) {
    separator();
    if (value) {
        line_ += format_real(*value);
    }
    return *this;
}

CsvWriter& CsvWriter::cell(std::size_t value) {
    separator();
    line_ += std::to_string(value);
    return *this;
}

void CsvWriter::end_row() {
    line_ += '\n';
    out_ << line_;
    line_.clear();
    row_started_ = false;
}

void CsvWriter::close() {
    out_.close();
    if (!out_) {
        throw RuntimeFailure("error while writing " + path_.string());
    }
}

std::string snapshot_filename(double time) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "t_%.6f.csv", time);
    return buf;
}

void write_series(const std::filesystem::path& file, const ObservableSeries& s) {
    s.validate();
    const bool arrival = s.arrival_prob.has_value();
    const bool overlap = s.overlap.has_value();
    CsvWriter w = arrival   ? CsvWriter(file, {"t", "norm", "energy", "arrival_prob"})
                  : overlap ? CsvWriter(file, {"t", "norm", "energy", "overlap"})
                            : CsvWriter(file, {"t", "norm", "energy"});
    for (std::size_t i = 0; i < s.size(); ++i) {
        w.cell(s.times[i]).cell(s.norm[i]).cell(s.energy[i]);
        if (arrival) {
            w.cell((*s.arrival_prob)[i]);
        } else if (overlap) {
            w.cell((*s.overlap)[i]);
        }
        w.end_row();
    }
    w.close();
}

void write_snapshot(const std::filesystem::path& file, const Snapshot& snap, const PotentialField& v) {
    const auto& dp = snap.density_phase;
    CsvWriter w(file, {"x", "rho", "S", "V", "W"});
    for (std::size_t i = 0; i < dp.rho.size(); ++i) {
        std::optional<double> wv;
        if (snap.w) {
            wv = snap.w->values[i];
        }
        w.cell(domain_coordinate(dp.domain, i)).cell(dp.rho[i]).cell(dp.phase[i]).cell(v.values()[i]).cell(wv);
        w.end_row();
    }
    w.close();
}

void write_density_map(const std::filesystem::path& file, const std::vector<DensityRow>& rows) {
    CsvWriter w(file, {"t", "x", "rho"});
    for (const auto& row : rows) {
        for (std::size_t x = 0; x < row.rho.size(); ++x) {
            w.cell(row.time).cell(x + 1).cell(row.rho[x]);
            w.end_row();
        }
    }
    w.close();
}

void write_potential(const std::filesystem::path& file, const PotentialField& v) {
    CsvWriter w(file, {"x", "V"});
    for (std::size_t i = 0; i < v.size(); ++i) {
        w.cell(domain_coordinate(v.domain(), i)).cell(v.values()[i]);
        w.end_row();
    }
    w.close();
}

void write_spectrum(const std::filesystem::path& file, const std::vector<double>& eigenvalues) {
    CsvWriter w(file, {"index", "eigenvalue"});
    for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
        w.cell(i).cell(eigenvalues[i]);
        w.end_row();
    }
    w.close();
}

void write_ground_state(const std::filesystem::path& file, const WaveFunction& phi) {
    CsvWriter w(file, {"x", "amplitude"});
    for (std::size_t i = 0; i < phi.size(); ++i) {
        w.cell(domain_coordinate(phi.domain(), i)).cell(phi[i].real());
        w.end_row();
    }
    w.close();
}

void write_text(const std::filesystem::path& file, std::string_view text) {
    std::ofstream out;
    open_for_write(out, file);
    out << text;
    out.close();
    if (!out) {
        throw RuntimeFailure("error while writing " + file.string());
    }
}

}  // namespace slk::io
