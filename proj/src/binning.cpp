#include "whichpath/binning.hpp"

#include <gsl/gsl_sf_expint.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "whichpath/error.hpp"

namespace whichpath {

std::vector<double> lower_bin_weights(const SpectralGrid& grid, double lambda_s) {
    const double h = grid.step();
    std::vector<double> w(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double z = std::numbers::pi * (lambda_s - grid.at(j)) / h;
        w[j] = h * (0.5 + gsl_sf_Si(z) / std::numbers::pi);
    }
    return w;
}

bool edges_truncated(const SpectralDensity& density, double threshold) {
    const double peak = density.max();
    if (peak <= 0.0) return false;
    return density[0] > threshold * peak || density[density.size() - 1] > threshold * peak;
}

BinnedPowers bin_powers(const SpectralDensity& i_min, const SpectralDensity& i_max, double lambda_s) {
    require_same_grid(i_min, i_max);
    const auto& grid = i_min.grid();
    require(std::isfinite(lambda_s) && lambda_s >= grid.lambda_min() && lambda_s <= grid.lambda_max(),
            "split wavelength must lie inside the grid");

    const double h = grid.step();
    double denom = 0.0;
    for (double v : i_max.values()) denom += h * v;
    if (!(denom > 0.0)) fail(ErrorCode::zero_reference, "no constructive power to normalize the bins");

    const std::vector<double> w = lower_bin_weights(grid, lambda_s);
    double lower = 0.0, upper = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        lower += w[j] * i_min[j];
        upper += (h - w[j]) * i_min[j];
    }

    BinnedPowers out;
    out.lambda_s = lambda_s;
    out.P_plus = lower / denom;
    out.P_minus = upper / denom;
    if (out.P_plus < 0.0) {
        out.P_plus = 0.0;
        out.clamped = true;
    }
    if (out.P_minus < 0.0) {
        out.P_minus = 0.0;
        out.clamped = true;
    }
    out.delta_P = out.P_plus - out.P_minus;
    // Both curves are judged against the constructive peak that sets the scale.
    const double scale = kTruncationThreshold * i_max.max();
    const std::size_t last = grid.size() - 1;
    out.truncated = std::max({i_min[0], i_min[last], i_max[0], i_max[last]}) > scale;
    return out;
}

SweepSummary summarize_sweep(std::vector<SweepEntry> entries) {
    require(!entries.empty(), "sweep needs at least one setting");
    SweepSummary s;
    for (const auto& e : entries) {
        if (!e.powers) continue;
        s.mean_P_plus += e.powers->P_plus;
        s.mean_P_minus += e.powers->P_minus;
        s.mean_delta_P += e.powers->delta_P;
        ++s.used;
    }
    if (s.used > 0) {
        const double n = static_cast<double>(s.used);
        s.mean_P_plus /= n;
        s.mean_P_minus /= n;
        s.mean_delta_P /= n;
        s.difference_of_means = s.mean_P_plus - s.mean_P_minus;
    }
    s.entries = std::move(entries);
    return s;
}

}  // namespace whichpath
