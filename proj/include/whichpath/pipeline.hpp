#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "whichpath/binning.hpp"
#include "whichpath/config.hpp"
#include "whichpath/error.hpp"
#include "whichpath/interference.hpp"
#include "whichpath/textio.hpp"

namespace whichpath {

struct ArmPair {
    SpectralDensity arm1;
    SpectralDensity arm2;
    FilterProfile filter1;  // after balancing
    FilterProfile filter2;
};

// Configured grid widened by whole steps until both arms fall below 1e-10 of
// their peak at the edges (unless grid.extend is off).
SpectralGrid simulation_grid(const RunConfig& config, double delta_lambda);

// Source times each filter, filter2 blue-shifted by delta_lambda; with
// balancing the stronger arm's peak transmission is lowered until both arms
// carry the same integrated power.
ArmPair simulate_arms(const RunConfig& config, double delta_lambda);

struct ModeRow {
    char mode;
    double lambda;
    double i_max;  // normalized
    double i_min;
    double V;
    double D;
    double sum_of_squares;
};

struct ModeRowError {
    double i_max, i_min, V, D, sum_of_squares;
};

struct SettingAnalysis {
    double delta_lambda;
    SpectralDensity arm1;
    SpectralDensity arm2;
    double mode_overlap;
    Extrema extrema;     // closed forms at phi = 0 and pi
    Extrema normalized;  // divided by 4 * max(arm1)
    RatioCurve V;
    RatioCurve D;
    ModeSelection modes;
    BinnedPowers bins;
    std::array<ModeRow, 3> rows;  // A, B, E
};

// Everything downstream of the arm spectra; shared by simulation and ingest.
SettingAnalysis analyze_arms(const SpectralDensity& arm1, const SpectralDensity& arm2, double mode_overlap,
                             const ModeSelectionOptions& options, double delta_lambda);

SettingAnalysis analyze_setting(const RunConfig& config, double delta_lambda);

struct SettingOutcome {
    double delta_lambda;
    std::optional<SettingAnalysis> analysis;
    std::optional<ErrorCode> error;
    std::string message;
};

// One outcome per configured delta_lambda, in input order; settings run concurrently.
std::vector<SettingOutcome> analyze_sweep(const RunConfig& config);

SweepSummary bin_sweep(const std::vector<SettingOutcome>& outcomes);

struct IngestResult {
    SettingAnalysis analysis;
    std::array<ModeRowError, 3> row_errors;
    double P_plus_error;
    double P_minus_error;
    double delta_P_error;
    bool has_uncertainty;
};

// Resamples measured arms onto the configured grid (widened to cover the files)
// and propagates per-point uncertainties to first order.
IngestResult ingest_spectra(const RunConfig& config, const MeasuredSpectrum& arm1, const MeasuredSpectrum& arm2);

}  // namespace whichpath
