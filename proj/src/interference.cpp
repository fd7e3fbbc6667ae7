#include "whichpath/interference.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "whichpath/error.hpp"

namespace whichpath {

namespace {

constexpr double kCompareTolerance = 1e-12;

double global_max(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, a[i] + b[i]);
    return m;
}

std::vector<double> smooth(const RatioCurve& curve, std::size_t window) {
    const std::size_t n = curve.values.size();
    std::vector<double> out(n, 0.0);
    const std::size_t half = window / 2;
    for (std::size_t i = 0; i < n; ++i) {
        if (!curve.values[i]) continue;
        double sum = 0.0;
        std::size_t count = 0;
        const std::size_t lo = i >= half ? i - half : 0;
        const std::size_t hi = std::min(n - 1, i + half);
        for (std::size_t j = lo; j <= hi; ++j) {
            if (curve.values[j]) {
                sum += *curve.values[j];
                ++count;
            }
        }
        out[i] = sum / static_cast<double>(count);
    }
    return out;
}

enum class Extremum { none, maximum, minimum };

// Three-point comparison against the defined neighbours; region edges count.
Extremum classify(const std::vector<double>& v, const std::vector<bool>& defined, std::size_t i) {
    bool ge_all = true, le_all = true, gt_any = false, lt_any = false, has_neighbour = false;
    auto visit = [&](std::size_t j) {
        if (!defined[j]) return;
        has_neighbour = true;
        if (v[i] < v[j] - kCompareTolerance) ge_all = false;
        if (v[i] > v[j] + kCompareTolerance) le_all = false;
        if (v[i] > v[j] + kCompareTolerance) gt_any = true;
        if (v[i] < v[j] - kCompareTolerance) lt_any = true;
    };
    if (i > 0) visit(i - 1);
    if (i + 1 < v.size()) visit(i + 1);
    if (!has_neighbour) return Extremum::none;
    if (ge_all && gt_any) return Extremum::maximum;
    if (le_all && lt_any) return Extremum::minimum;
    return Extremum::none;
}

}  // namespace

double fringe_intensity(double i1, double i2, double mode_overlap, double phase) {
    // Written so the destructive minimum (sqrt(I1) - sqrt(I2))^2 carries no cancellation.
    const double root = std::sqrt(i1 * i2);
    const double diff = std::sqrt(i1) - std::sqrt(i2);
    return std::max(0.0, diff * diff + 2.0 * root * (1.0 + mode_overlap * std::cos(phase)));
}

double complementary_port_intensity(double i1, double i2, double mode_overlap, double phase) {
    const double root = std::sqrt(i1 * i2);
    const double diff = std::sqrt(i1) - std::sqrt(i2);
    return std::max(0.0, diff * diff + 2.0 * root * (1.0 - mode_overlap * std::cos(phase)));
}

std::vector<double> full_period_phases(std::size_t count) {
    require(count >= 2, "a phase sweep needs at least two samples");
    std::vector<double> out(count);
    for (std::size_t j = 0; j < count; ++j) {
        out[j] = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(count);
    }
    return out;
}

FringeScan simulate_fringes(const SpectralDensity& arm1, const SpectralDensity& arm2,
                            double mode_overlap, std::vector<double> phases) {
    require_same_grid(arm1, arm2);
    require(mode_overlap >= 0.0 && mode_overlap <= 1.0, "mode overlap must lie in [0, 1]");
    require(!phases.empty(), "phase sweep must not be empty");
    std::vector<double> intensity;
    intensity.reserve(arm1.size() * phases.size());
    for (std::size_t i = 0; i < arm1.size(); ++i) {
        for (double phi : phases) intensity.push_back(fringe_intensity(arm1[i], arm2[i], mode_overlap, phi));
    }
    return FringeScan{arm1, arm2, std::move(phases), std::move(intensity), mode_overlap};
}

Extrema fringe_extrema(const FringeScan& scan) {
    const std::size_t n = scan.grid().size();
    const std::size_t m = scan.phases.size();
    std::vector<double> hi(n), lo(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = std::span<const double>(scan.intensity).subspan(i * m, m);
        const auto [mn, mx] = std::minmax_element(row.begin(), row.end());
        hi[i] = *mx;
        lo[i] = *mn;
    }
    return Extrema{SpectralDensity(scan.grid(), std::move(hi)), SpectralDensity(scan.grid(), std::move(lo))};
}

RatioCurve visibility(const SpectralDensity& i_max, const SpectralDensity& i_min, double power_floor) {
    require_same_grid(i_max, i_min);
    const double floor = power_floor * global_max(i_max.values(), i_min.values());
    RatioCurve out{i_max.grid(), std::vector<std::optional<double>>(i_max.size())};
    for (std::size_t i = 0; i < i_max.size(); ++i) {
        require(i_max[i] >= i_min[i], "visibility needs I_max >= I_min");
        const double total = i_max[i] + i_min[i];
        if (total <= floor || total == 0.0) continue;
        out.values[i] = (i_max[i] - i_min[i]) / total;
    }
    return out;
}

RatioCurve distinguishability(const SpectralDensity& arm1, const SpectralDensity& arm2, double power_floor) {
    require_same_grid(arm1, arm2);
    const double floor = power_floor * global_max(arm1.values(), arm2.values());
    RatioCurve out{arm1.grid(), std::vector<std::optional<double>>(arm1.size())};
    for (std::size_t i = 0; i < arm1.size(); ++i) {
        const double total = arm1[i] + arm2[i];
        if (total <= floor || total == 0.0) continue;
        out.values[i] = std::abs(arm1[i] - arm2[i]) / total;
    }
    return out;
}

DualityRecord egy_check(double v, double d, double tolerance) {
    require(v >= 0.0 && v <= 1.0 + tolerance, "visibility must lie in [0, 1]");
    require(d >= 0.0 && d <= 1.0 + tolerance, "distinguishability must lie in [0, 1]");
    const double s = v * v + d * d;
    return DualityRecord{v, d, s, s <= 1.0 + tolerance};
}

double normalization_constant(const SpectralDensity& reference_arm) {
    const double peak = reference_arm.max();
    if (!(peak > 0.0)) fail(ErrorCode::zero_reference, "normalization reference arm carries no light");
    return 4.0 * peak;
}

SpectralDensity normalize(const SpectralDensity& detected, const SpectralDensity& reference_arm) {
    return detected.scaled(1.0 / normalization_constant(reference_arm));
}

double normalize(double detected, const SpectralDensity& reference_arm) {
    return detected / normalization_constant(reference_arm);
}

ModeSelection select_modes(const RatioCurve& curve, const SpectralDensity& arm1,
                           const SpectralDensity& arm2, const ModeSelectionOptions& options) {
    require_same_grid(arm1, arm2);
    require(curve.grid == arm1.grid(), "visibility curve and arms use different grids");
    require(options.smoothing_window >= 1 && options.smoothing_window % 2 == 1,
            "smoothing window must be an odd count >= 1");

    const std::size_t n = arm1.size();
    const double floor = options.power_floor * global_max(arm1.values(), arm2.values());
    std::vector<bool> defined(n);
    for (std::size_t i = 0; i < n; ++i) {
        defined[i] = curve.values[i].has_value() && arm1[i] + arm2[i] > floor;
    }
    RatioCurve masked = curve;
    for (std::size_t i = 0; i < n; ++i) {
        if (!defined[i]) masked.values[i].reset();
    }
    const std::vector<double> v = smooth(masked, options.smoothing_window);

    std::vector<std::size_t> maxima, minima;
    for (std::size_t i = 0; i < n; ++i) {
        if (!defined[i]) continue;
        switch (classify(v, defined, i)) {
            case Extremum::maximum: maxima.push_back(i); break;
            case Extremum::minimum: minima.push_back(i); break;
            case Extremum::none: break;
        }
    }
    if (maxima.empty()) {
        fail(ErrorCode::insufficient_structure, "visibility has no maximum: arms are indistinguishable");
    }
    // Tail crossings also reach high visibility; E is the brightest maximum.
    const std::size_t e = *std::max_element(maxima.begin(), maxima.end(), [&](std::size_t a, std::size_t b) {
        const double pa = arm1[a] + arm2[a], pb = arm1[b] + arm2[b];
        return pa != pb ? pa < pb : v[a] < v[b];
    });

    std::optional<std::size_t> left, right;
    for (std::size_t i : minima) {
        if (i < e) left = i;
        if (i > e && !right) right = i;
    }
    if (!left || !right) {
        fail(ErrorCode::insufficient_structure,
             "visibility needs a minimum on each side of its maximum above the power floor");
    }

    std::size_t a = 0, b = 0;
    const bool left_arm1 = arm1[*left] > arm2[*left];
    const bool right_arm1 = arm1[*right] > arm2[*right];
    if (left_arm1 && !right_arm1) {
        a = *left;
        b = *right;
    } else if (right_arm1 && !left_arm1) {
        a = *right;
        b = *left;
    } else {
        fail(ErrorCode::insufficient_structure, "visibility minima are not dominated by different arms");
    }

    const RatioCurve d = distinguishability(arm1, arm2, options.power_floor);
    const auto& grid = arm1.grid();

    double split = grid.at(e);
    if (arm1[e] > 0.0 && arm2[e] > 0.0) {
        auto log_ratio = [&](std::size_t i) { return std::log(arm1[i] / arm2[i]); };
        const double r0 = log_ratio(e);
        for (std::size_t j : {e - 1, e + 1}) {
            if (r0 == 0.0 || j >= n || (j == e - 1 && e == 0)) continue;
            if (!(arm1[j] > 0.0 && arm2[j] > 0.0)) continue;
            const double r1 = log_ratio(j);
            if ((r0 < 0.0) != (r1 < 0.0)) {
                const double t = r0 / (r0 - r1);
                split = grid.at(e) + t * (grid.at(j) - grid.at(e));
                break;
            }
        }
    }

    auto value = [](const RatioCurve& c, std::size_t i) { return c.values[i].value_or(0.0); };
    return ModeSelection{a, b, e,
                         grid.at(a), grid.at(b), grid.at(e),
                         value(curve, a), value(curve, b), value(curve, e),
                         value(d, a), value(d, b), value(d, e),
                         split};
}

Extrema closed_form_extrema(const SpectralDensity& arm1, const SpectralDensity& arm2, double mode_overlap) {
    require_same_grid(arm1, arm2);
    require(mode_overlap >= 0.0 && mode_overlap <= 1.0, "mode overlap must lie in [0, 1]");
    std::vector<double> hi(arm1.size()), lo(arm1.size());
    for (std::size_t i = 0; i < arm1.size(); ++i) {
        hi[i] = fringe_intensity(arm1[i], arm2[i], mode_overlap, 0.0);
        lo[i] = complementary_port_intensity(arm1[i], arm2[i], mode_overlap, 0.0);
    }
    return Extrema{SpectralDensity(arm1.grid(), std::move(hi)), SpectralDensity(arm1.grid(), std::move(lo))};
}

Extrema theory_extrema(const SpectralDensity& arm1, const SpectralDensity& arm2) {
    return closed_form_extrema(arm1, arm2, 1.0);
}

}  // namespace whichpath
