#include "whichpath/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

namespace whichpath {

namespace {

// Tighter than the bin truncation flag so interference cross terms stay below it.
constexpr double kEdgeFraction = 0.1 * kTruncationThreshold;
constexpr std::size_t kExtensionChunk = 10;
constexpr std::size_t kMaxGridPoints = 200000;

ModeSelectionOptions selection_options(const RunConfig& config) {
    ModeSelectionOptions o;
    o.smoothing_window = config.smoothing_window;
    return o;
}

struct ArmFunctions {
    SourceSpectrum source;
    FilterProfile f1, f2;

    double arm1(double l) const { return source.density(l) * f1.transmission(l); }
    double arm2(double l) const { return source.density(l) * f2.transmission(l); }
};

// Edge is settled when it is tiny relative to the grid peak and not rising outward.
bool edge_settled(const SpectralGrid& g, double (ArmFunctions::*arm)(double) const, const ArmFunctions& fn,
                  bool low_side) {
    double peak = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) peak = std::max(peak, (fn.*arm)(g.at(i)));
    if (peak <= 0.0) return true;
    const std::size_t edge = low_side ? 0 : g.size() - 1;
    const std::size_t inner = low_side ? 1 : g.size() - 2;
    const double e = (fn.*arm)(g.at(edge));
    return e <= kEdgeFraction * peak && e <= (fn.*arm)(g.at(inner));
}

double secant(const auto& f, double x, double sigma) {
    if (!(sigma > 0.0)) return 0.0;
    if (x >= sigma) return 0.5 * (f(x + sigma) - f(x - sigma));
    return f(x + sigma) - f(x);
}

ModeRow make_row(char mode, std::size_t i, const SettingAnalysis& a) {
    const double v = a.V.values[i].value_or(0.0);
    const double d = a.D.values[i].value_or(0.0);
    const DualityRecord r = egy_check(std::min(v, 1.0), std::min(d, 1.0));
    return ModeRow{mode, a.arm1.grid().at(i), a.normalized.max[i], a.normalized.min[i], v, d, r.sum_of_squares};
}

}  // namespace

SpectralGrid simulation_grid(const RunConfig& config, double delta_lambda) {
    SpectralGrid g = config.grid.build();
    if (!config.extend_grid) return g;
    const ArmFunctions fn{config.source, config.filter1, shift_filter(config.filter2, delta_lambda)};
    while (true) {
        const bool low = edge_settled(g, &ArmFunctions::arm1, fn, true) && edge_settled(g, &ArmFunctions::arm2, fn, true);
        const bool high =
            edge_settled(g, &ArmFunctions::arm1, fn, false) && edge_settled(g, &ArmFunctions::arm2, fn, false);
        if (low && high) return g;
        if (g.size() > kMaxGridPoints) {
            fail(ErrorCode::invalid_argument, "arm spectra do not decay within a reasonable grid extension");
        }
        g = g.extended(low ? 0 : kExtensionChunk, high ? 0 : kExtensionChunk);
    }
}

ArmPair simulate_arms(const RunConfig& config, double delta_lambda) {
    const SpectralGrid grid = simulation_grid(config, delta_lambda);
    FilterProfile f1 = config.filter1;
    FilterProfile f2 = shift_filter(config.filter2, delta_lambda);
    SpectralDensity a1 = arm_spectrum(config.source, f1, grid);
    SpectralDensity a2 = arm_spectrum(config.source, f2, grid);
    if (config.balance_arms) {
        const double p1 = integrate(a1), p2 = integrate(a2);
        if (p1 > 0.0 && p2 > 0.0 && p1 != p2) {
            if (p2 > p1) {
                f2.peak_transmission *= p1 / p2;
                a2 = arm_spectrum(config.source, f2, grid);
            } else {
                f1.peak_transmission *= p2 / p1;
                a1 = arm_spectrum(config.source, f1, grid);
            }
        }
    }
    return ArmPair{std::move(a1), std::move(a2), f1, f2};
}

SettingAnalysis analyze_arms(const SpectralDensity& arm1, const SpectralDensity& arm2, double mode_overlap,
                             const ModeSelectionOptions& options, double delta_lambda) {
    require_same_grid(arm1, arm2);
    Extrema extrema = closed_form_extrema(arm1, arm2, mode_overlap);
    Extrema normalized{normalize(extrema.max, arm1), normalize(extrema.min, arm1)};
    RatioCurve v = visibility(extrema.max, extrema.min, options.power_floor);
    RatioCurve d = distinguishability(arm1, arm2, options.power_floor);
    const ModeSelection modes = select_modes(v, arm1, arm2, options);
    BinnedPowers bins = bin_powers(extrema.min, extrema.max, modes.lambda_split);
    bins.delta_lambda = delta_lambda;

    SettingAnalysis a{delta_lambda,         arm1, arm2, mode_overlap, std::move(extrema), std::move(normalized),
                      std::move(v),         std::move(d), modes,      bins,               {}};
    a.rows = {make_row('A', modes.index_A, a), make_row('B', modes.index_B, a), make_row('E', modes.index_E, a)};
    return a;
}

SettingAnalysis analyze_setting(const RunConfig& config, double delta_lambda) {
    const ArmPair arms = simulate_arms(config, delta_lambda);
    return analyze_arms(arms.arm1, arms.arm2, config.mode_overlap, selection_options(config), delta_lambda);
}

std::vector<SettingOutcome> analyze_sweep(const RunConfig& config) {
    require(!config.delta_lambda.empty(), "sweep needs at least one delta_lambda");
    std::vector<std::future<SettingOutcome>> jobs;
    for (double dl : config.delta_lambda) {
        jobs.push_back(std::async(std::launch::async, [&config, dl] {
            SettingOutcome o{dl, std::nullopt, std::nullopt, {}};
            try {
                o.analysis = analyze_setting(config, dl);
            } catch (const Error& e) {
                o.error = e.code();
                o.message = e.what();
            }
            return o;
        }));
    }
    std::vector<SettingOutcome> out;
    for (auto& j : jobs) out.push_back(j.get());
    return out;
}

SweepSummary bin_sweep(const std::vector<SettingOutcome>& outcomes) {
    std::vector<SweepEntry> entries;
    for (const auto& o : outcomes) {
        SweepEntry e{o.delta_lambda, std::nullopt, {}};
        if (o.analysis) {
            e.powers = o.analysis->bins;
        } else {
            e.warning = "skipped delta_lambda=" + format_shortest(o.delta_lambda) + ": " + o.message;
        }
        entries.push_back(std::move(e));
    }
    return summarize_sweep(std::move(entries));
}

IngestResult ingest_spectra(const RunConfig& config, const MeasuredSpectrum& m1, const MeasuredSpectrum& m2) {
    const double lo = std::min(m1.wavelengths.front(), m2.wavelengths.front());
    const double hi = std::max(m1.wavelengths.back(), m2.wavelengths.back());
    const SpectralGrid grid = covering_grid(config.grid.build(), lo, hi);
    const SpectralDensity arm1 = resample(m1, grid);
    const SpectralDensity arm2 = resample(m2, grid);
    const std::vector<double> s1 = resample_uncertainty(m1, grid);
    const std::vector<double> s2 = resample_uncertainty(m2, grid);

    const double nan = std::numeric_limits<double>::quiet_NaN();
    IngestResult r{analyze_arms(arm1, arm2, config.mode_overlap, selection_options(config), nan),
                   {}, 0.0, 0.0, 0.0, m1.uncertainties.has_value() || m2.uncertainties.has_value()};
    const double mu = config.mode_overlap;
    // The normalization constant is held fixed; only local densities vary.
    const double n = normalization_constant(arm1);

    auto imax = [mu](double a, double b) { return fringe_intensity(a, b, mu, 0.0); };
    auto imin = [mu](double a, double b) { return complementary_port_intensity(a, b, mu, 0.0); };
    auto vis = [&](double a, double b) {
        const double mx = imax(a, b), mn = imin(a, b);
        return mx + mn > 0.0 ? (mx - mn) / (mx + mn) : 0.0;
    };
    auto dist = [](double a, double b) { return a + b > 0.0 ? std::abs(a - b) / (a + b) : 0.0; };
    auto quad = [&](const auto& f, std::size_t i) {
        const double a = arm1[i], b = arm2[i];
        const double da = secant([&](double x) { return f(x, b); }, a, s1[i]);
        const double db = secant([&](double x) { return f(a, x); }, b, s2[i]);
        return std::sqrt(da * da + db * db);
    };

    const std::array<std::size_t, 3> idx{r.analysis.modes.index_A, r.analysis.modes.index_B,
                                         r.analysis.modes.index_E};
    for (std::size_t k = 0; k < 3; ++k) {
        const std::size_t i = idx[k];
        r.row_errors[k] = ModeRowError{
            quad([&](double a, double b) { return imax(a, b) / n; }, i),
            quad([&](double a, double b) { return imin(a, b) / n; }, i),
            quad(vis, i),
            quad(dist, i),
            quad([&](double a, double b) {
                const double v = vis(a, b), d = dist(a, b);
                return v * v + d * d;
            }, i)};
    }

    // Bins: each node enters the lower/upper sums and the denominator once.
    const auto& ex = r.analysis.extrema;
    const std::vector<double> w = lower_bin_weights(grid, r.analysis.modes.lambda_split);
    const double h = grid.step();
    double lower = 0.0, upper = 0.0, denom = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        lower += w[j] * ex.min[j];
        upper += (h - w[j]) * ex.min[j];
        denom += h * ex.max[j];
    }
    double vp = 0.0, vm = 0.0, vd = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        for (int arm = 0; arm < 2; ++arm) {
            const double sigma = arm == 0 ? s1[j] : s2[j];
            if (!(sigma > 0.0)) continue;
            auto shifted = [&](double x) {
                const double a = arm == 0 ? x : arm1[j];
                const double b = arm == 0 ? arm2[j] : x;
                const double dm = imin(a, b) - ex.min[j];
                const double dM = imax(a, b) - ex.max[j];
                const double den = denom + h * dM;
                return std::array<double, 2>{(lower + w[j] * dm) / den, (upper + (h - w[j]) * dm) / den};
            };
            const double x = arm == 0 ? arm1[j] : arm2[j];
            const auto up = shifted(x + sigma);
            const auto down = x >= sigma ? shifted(x - sigma) : shifted(x);
            const double scale = x >= sigma ? 0.5 : 1.0;
            const double dp = scale * (up[0] - down[0]);
            const double dmn = scale * (up[1] - down[1]);
            vp += dp * dp;
            vm += dmn * dmn;
            vd += (dp - dmn) * (dp - dmn);
        }
    }
    r.P_plus_error = std::sqrt(vp);
    r.P_minus_error = std::sqrt(vm);
    r.delta_P_error = std::sqrt(vd);
    return r;
}

}  // namespace whichpath
