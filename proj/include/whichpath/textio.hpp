#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "whichpath/spectral.hpp"

namespace whichpath {

// Fixed notation with 9 significant digits; "nan" for NaN.
std::string format_fixed9(double value);
// Shortest decimal string that parses back to the same double.
std::string format_shortest(double value);

double parse_double(std::string_view text);  // throws ErrorCode::parse
std::string_view trim(std::string_view text);
std::vector<std::string_view> split(std::string_view text, char delimiter);

// Rows are buffered and written in one go so a failed command leaves no partial file.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);

    CsvWriter& row(const std::vector<std::string>& cells);
    const std::string& text() const { return text_; }
    void save(const std::string& path) const;

private:
    std::size_t columns_;
    std::string text_;
};

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

// Two- or three-column measured spectrum: wavelength_nm, density[, uncertainty].
struct MeasuredSpectrum {
    std::vector<double> wavelengths;
    std::vector<double> densities;
    std::optional<std::vector<double>> uncertainties;
};

MeasuredSpectrum parse_spectrum(std::string_view text, const std::string& source_name = "<input>");
MeasuredSpectrum read_spectrum(const std::string& path);
std::string format_spectrum(const SpectralDensity& density,
                            const std::vector<double>* uncertainties = nullptr);
void write_spectrum(const std::string& path, const SpectralDensity& density);

// Linear interpolation onto the grid, zero outside the measured span.
SpectralDensity resample(const MeasuredSpectrum& spectrum, const SpectralGrid& grid);
std::vector<double> resample_uncertainty(const MeasuredSpectrum& spectrum, const SpectralGrid& grid);

// Smallest whole-step widening of `grid` that covers both spans.
SpectralGrid covering_grid(const SpectralGrid& grid, double lambda_lo, double lambda_hi);

}  // namespace whichpath
