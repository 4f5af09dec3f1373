#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "slk/potentials.hpp"
#include "slk/run_result.hpp"
#include "slk/spectral.hpp"

namespace slk::io {

/// Locale-independent rendering with 17 significant digits.
std::string format_real(double value);

/// Minimal CSV emitter: comma separated, '\n' line endings, 17-digit reals.
/// Throws RuntimeFailure if the file cannot be written.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& file, std::initializer_list<std::string_view> header);
    CsvWriter(const std::filesystem::path& file, const std::vector<std::string>& header);

    CsvWriter& cell(double value);
    CsvWriter& cell(std::optional<double> value);  // absent -> empty field
    CsvWriter& cell(std::size_t value);
    void end_row();
    void close();

private:
    void separator();

    std::filesystem::path path_;
    std::ofstream out_;
    std::string line_;
    bool row_started_ = false;
};

/// "t_<time with 6 decimals>.csv"
std::string snapshot_filename(double time);

void write_series(const std::filesystem::path& file, const ObservableSeries& series);
void write_snapshot(const std::filesystem::path& file, const Snapshot& snap, const PotentialField& v);
void write_density_map(const std::filesystem::path& file, const std::vector<DensityRow>& rows);
void write_potential(const std::filesystem::path& file, const PotentialField& v);
void write_spectrum(const std::filesystem::path& file, const std::vector<double>& eigenvalues);
void write_ground_state(const std::filesystem::path& file, const WaveFunction& phi);

/// Writes text with '\n' endings, creating parent directories.
void write_text(const std::filesystem::path& file, std::string_view text);

}  // namespace slk::io
