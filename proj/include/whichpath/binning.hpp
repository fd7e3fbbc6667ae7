#pragma once

#include <optional>
#include <string>
#include <vector>

#include "whichpath/spectral.hpp"

namespace whichpath {

inline constexpr double kTruncationThreshold = 1e-9;

struct BinnedPowers {
    double delta_lambda = 0.0;
    double lambda_s = 0.0;
    double P_plus = 0.0;
    double P_minus = 0.0;
    double delta_P = 0.0;
    bool truncated = false;  // densities at the grid edges above 1e-9 of peak
    bool clamped = false;    // a bin came out slightly negative and was set to 0
};

// Integrates I_min below and above lambda_s and divides by the integral of I_max.
// Quadrature is band-limited: each node carries a sinc interpolant, so the split
// point may sit anywhere between nodes without biasing the two bins.
BinnedPowers bin_powers(const SpectralDensity& i_min, const SpectralDensity& i_max, double lambda_s);

// Left-bin share of node j for a split at lambda_s: h (1/2 + Si(pi (lambda_s - x_j) / h) / pi).
std::vector<double> lower_bin_weights(const SpectralGrid& grid, double lambda_s);

bool edges_truncated(const SpectralDensity& density, double threshold = kTruncationThreshold);

struct SweepEntry {
    double delta_lambda;
    std::optional<BinnedPowers> powers;
    std::string warning;  // set when the setting was skipped
};

struct SweepSummary {
    std::vector<SweepEntry> entries;
    std::size_t used = 0;
    double mean_P_plus = 0.0;
    double mean_P_minus = 0.0;
    double mean_delta_P = 0.0;      // mean of per-setting differences
    double difference_of_means = 0.0;
};

// Averages the settings that produced powers, keeping input order.
SweepSummary summarize_sweep(std::vector<SweepEntry> entries);

}  // namespace whichpath
