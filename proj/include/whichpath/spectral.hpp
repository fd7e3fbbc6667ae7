#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace whichpath {

// Uniform wavelength axis in nm. Points are lambda_min + i * step, i = 0..size()-1.
class SpectralGrid {
public:
    SpectralGrid(double lambda_min, double lambda_max, double step);

    double lambda_min() const { return lambda_min_; }
    double lambda_max() const { return lambda_max_; }
    double step() const { return step_; }
    std::size_t size() const { return count_; }
    double at(std::size_t i) const { return lambda_min_ + static_cast<double>(i) * step_; }
    std::vector<double> points() const;

    // Same step, widened by whole steps on each side.
    SpectralGrid extended(std::size_t below, std::size_t above) const;

    bool operator==(const SpectralGrid& other) const;

private:
    double lambda_min_;
    double lambda_max_;
    double step_;
    std::size_t count_;
};

// Nonnegative power density sampled on a grid (power units / nm).
class SpectralDensity {
public:
    SpectralDensity(SpectralGrid grid, std::vector<double> values);

    static SpectralDensity zeros(const SpectralGrid& grid);

    const SpectralGrid& grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    std::size_t size() const { return values_.size(); }

    double max() const;
    SpectralDensity scaled(double factor) const;

    // Linear interpolation; zero outside the grid.
    double interpolate(double lambda) const;

private:
    SpectralGrid grid_;
    std::vector<double> values_;
};

enum class FilterShape { gaussian, supergaussian };

// Narrow-band transmission window. `blocking` is the out-of-band transmission
// floor as a fraction of peak; zero gives the ideal window.
struct FilterProfile {
    double center = 826.0;
    double fwhm = 3.0;
    double peak_transmission = 1.0;
    FilterShape shape = FilterShape::gaussian;
    int order = 1;
    double blocking = 0.0;

    void validate() const;
    double transmission(double lambda) const;
};

struct SourceSpectrum {
    double center = 826.0;
    double fwhm = 10.0;
    double total_power = 1.0;

    void validate() const;
    // Gaussian density normalized so its integral over all wavelengths is total_power.
    double density(double lambda) const;
};

SpectralDensity evaluate_filter(const FilterProfile& profile, const SpectralGrid& grid);

// Blue shift by delta_lambda >= 0 nm.
FilterProfile shift_filter(const FilterProfile& profile, double delta_lambda);

SpectralDensity evaluate_source(const SourceSpectrum& source, const SpectralGrid& grid);

SpectralDensity arm_spectrum(const SourceSpectrum& source, const FilterProfile& filter,
                             const SpectralGrid& grid);

// Trapezoidal integral of the density over its grid.
double integrate(const SpectralDensity& density);

void require_same_grid(const SpectralDensity& a, const SpectralDensity& b);

}  // namespace whichpath
