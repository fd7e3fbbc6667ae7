#include "whichpath/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "whichpath/error.hpp"

namespace whichpath {

namespace {

constexpr double kGridTolerance = 1e-9;

}  // namespace

SpectralGrid::SpectralGrid(double lambda_min, double lambda_max, double step)
    : lambda_min_(lambda_min), lambda_max_(lambda_max), step_(step), count_(0) {
    require(std::isfinite(lambda_min) && std::isfinite(lambda_max) && std::isfinite(step),
            "spectral grid bounds must be finite");
    require(lambda_min < lambda_max, "spectral grid needs lambda_min < lambda_max");
    require(step > 0.0, "spectral grid step must be positive");
    const double intervals = (lambda_max - lambda_min) / step;
    const double whole = std::round(intervals);
    require(std::abs(intervals - whole) <= kGridTolerance * std::max(1.0, whole),
            "spectral grid span is not a whole number of steps");
    count_ = static_cast<std::size_t>(whole) + 1;
}

std::vector<double> SpectralGrid::points() const {
    std::vector<double> out(count_);
    for (std::size_t i = 0; i < count_; ++i) out[i] = at(i);
    return out;
}

SpectralGrid SpectralGrid::extended(std::size_t below, std::size_t above) const {
    const double lo = lambda_min_ - static_cast<double>(below) * step_;
    const double hi = lo + static_cast<double>(count_ - 1 + below + above) * step_;
    return SpectralGrid(lo, hi, step_);
}

bool SpectralGrid::operator==(const SpectralGrid& other) const {
    return count_ == other.count_ &&
           std::abs(step_ - other.step_) <= kGridTolerance * step_ &&
           std::abs(lambda_min_ - other.lambda_min_) <= kGridTolerance * step_;
}

SpectralDensity::SpectralDensity(SpectralGrid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    require(values_.size() == grid_.size(), "density length does not match its grid");
    for (double v : values_) {
        require(std::isfinite(v) && v >= 0.0, "spectral density values must be finite and >= 0");
    }
}

SpectralDensity SpectralDensity::zeros(const SpectralGrid& grid) {
    return SpectralDensity(grid, std::vector<double>(grid.size(), 0.0));
}

double SpectralDensity::max() const { return *std::max_element(values_.begin(), values_.end()); }

SpectralDensity SpectralDensity::scaled(double factor) const {
    require(factor >= 0.0, "density scale factor must be >= 0");
    std::vector<double> out(values_);
    for (double& v : out) v *= factor;
    return SpectralDensity(grid_, std::move(out));
}

double SpectralDensity::interpolate(double lambda) const {
    const double pos = (lambda - grid_.lambda_min()) / grid_.step();
    const double last = static_cast<double>(values_.size() - 1);
    if (pos < -kGridTolerance || pos > last + kGridTolerance) return 0.0;
    const double clamped = std::clamp(pos, 0.0, last);
    const auto i = static_cast<std::size_t>(std::floor(clamped));
    if (i + 1 >= values_.size()) return values_.back();
    const double t = clamped - static_cast<double>(i);
    if (t == 0.0) return values_[i];
    return values_[i] + t * (values_[i + 1] - values_[i]);
}

void FilterProfile::validate() const {
    require(std::isfinite(center), "filter center must be finite");
    require(fwhm > 0.0, "filter fwhm must be positive");
    require(peak_transmission >= 0.0 && peak_transmission <= 1.0,
            "filter peak transmission must lie in [0, 1]");
    require(order >= 1, "supergaussian order must be >= 1");
    require(shape == FilterShape::supergaussian || order == 1, "gaussian filters have order 1");
    require(blocking >= 0.0 && blocking < 0.5, "filter blocking floor must lie in [0, 0.5)");
}

double FilterProfile::transmission(double lambda) const {
    // Exponent constant chosen so t(center +- fwhm/2) = peak/2 for any order and floor.
    const double kappa = std::log((1.0 - blocking) / (0.5 - blocking));
    const double u2 = std::pow(2.0 * (lambda - center) / fwhm, 2);
    const double core = std::exp(-kappa * std::pow(u2, order));
    return peak_transmission * (blocking + (1.0 - blocking) * core);
}

void SourceSpectrum::validate() const {
    require(std::isfinite(center), "source center must be finite");
    require(fwhm > 0.0, "source fwhm must be positive");
    require(total_power > 0.0, "source total power must be positive");
}

double SourceSpectrum::density(double lambda) const {
    const double sigma = fwhm / (2.0 * std::sqrt(2.0 * std::numbers::ln2));
    const double z = (lambda - center) / sigma;
    return total_power * std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

SpectralDensity evaluate_filter(const FilterProfile& profile, const SpectralGrid& grid) {
    profile.validate();
    std::vector<double> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) out[i] = profile.transmission(grid.at(i));
    return SpectralDensity(grid, std::move(out));
}

FilterProfile shift_filter(const FilterProfile& profile, double delta_lambda) {
    require(delta_lambda >= 0.0, "filter rotation only shifts toward shorter wavelengths");
    FilterProfile out = profile;
    out.center -= delta_lambda;
    return out;
}

SpectralDensity evaluate_source(const SourceSpectrum& source, const SpectralGrid& grid) {
    source.validate();
    std::vector<double> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) out[i] = source.density(grid.at(i));
    return SpectralDensity(grid, std::move(out));
}

SpectralDensity arm_spectrum(const SourceSpectrum& source, const FilterProfile& filter,
                             const SpectralGrid& grid) {
    source.validate();
    filter.validate();
    std::vector<double> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double lambda = grid.at(i);
        out[i] = source.density(lambda) * filter.transmission(lambda);
    }
    return SpectralDensity(grid, std::move(out));
}

double integrate(const SpectralDensity& density) {
    const auto v = density.values();
    if (v.size() < 2) return 0.0;
    double sum = 0.5 * (v.front() + v.back());
    for (std::size_t i = 1; i + 1 < v.size(); ++i) sum += v[i];
    return sum * density.grid().step();
}

void require_same_grid(const SpectralDensity& a, const SpectralDensity& b) {
    if (!(a.grid() == b.grid())) {
        fail(ErrorCode::incompatible_spectra, "spectra are sampled on different grids");
    }
}

}  // namespace whichpath
