#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "whichpath/spectral.hpp"

namespace whichpath {

// Fraction of the global maximum below which V and D are left undefined.
inline constexpr double kPowerFloor = 1e-6;
inline constexpr double kDualityTolerance = 1e-9;

// Two-beam fringe I(lambda, phi) = I1 + I2 + 2 mu sqrt(I1 I2) cos(phi).
// phi = 0 is constructive, phi = pi destructive.
double fringe_intensity(double i1, double i2, double mode_overlap, double phase);
// The complementary output port (cos(phi) negated).
double complementary_port_intensity(double i1, double i2, double mode_overlap, double phase);

// n equally spaced phases over [0, 2 pi); even n samples both 0 and pi.
std::vector<double> full_period_phases(std::size_t count);

struct FringeScan {
    SpectralDensity arm1;
    SpectralDensity arm2;
    std::vector<double> phases;
    std::vector<double> intensity;  // row-major, one row of phases per wavelength
    double mode_overlap;

    const SpectralGrid& grid() const { return arm1.grid(); }
    double at(std::size_t lambda_index, std::size_t phase_index) const {
        return intensity[lambda_index * phases.size() + phase_index];
    }
};

struct Extrema {
    SpectralDensity max;
    SpectralDensity min;
};

// Per-wavelength ratio that is undefined where there is no light.
struct RatioCurve {
    SpectralGrid grid;
    std::vector<std::optional<double>> values;
};

struct DualityRecord {
    double visibility;
    double distinguishability;
    double sum_of_squares;
    bool pass;
};

struct ModeSelection {
    std::size_t index_A, index_B, index_E;
    double lambda_A, lambda_B, lambda_E;
    double V_A, V_B, V_E;
    double D_A, D_B, D_E;
    // Sub-grid position of the arm crossing next to lambda_E (log-ratio root).
    double lambda_split;
};

struct ModeSelectionOptions {
    std::size_t smoothing_window = 1;  // moving average width, 1 = off
    double power_floor = kPowerFloor;
};

FringeScan simulate_fringes(const SpectralDensity& arm1, const SpectralDensity& arm2,
                            double mode_overlap, std::vector<double> phases);

// Sampled max/min over the phase sweep of every wavelength.
Extrema fringe_extrema(const FringeScan& scan);

RatioCurve visibility(const SpectralDensity& i_max, const SpectralDensity& i_min,
                      double power_floor = kPowerFloor);
RatioCurve distinguishability(const SpectralDensity& arm1, const SpectralDensity& arm2,
                              double power_floor = kPowerFloor);

DualityRecord egy_check(double visibility, double distinguishability,
                        double tolerance = kDualityTolerance);

// N = 4 * max of the single-arm reference density.
double normalization_constant(const SpectralDensity& reference_arm);
SpectralDensity normalize(const SpectralDensity& detected, const SpectralDensity& reference_arm);
double normalize(double detected, const SpectralDensity& reference_arm);

ModeSelection select_modes(const RatioCurve& visibility_curve, const SpectralDensity& arm1,
                           const SpectralDensity& arm2, const ModeSelectionOptions& options = {});

// Perfect constructive/destructive closed forms (sqrt(I1) +- sqrt(I2))^2.
Extrema theory_extrema(const SpectralDensity& arm1, const SpectralDensity& arm2);
// Fringe extrema at phi = 0 and pi for any mode overlap; theory_extrema is mu = 1.
Extrema closed_form_extrema(const SpectralDensity& arm1, const SpectralDensity& arm2, double mode_overlap);

}  // namespace whichpath
