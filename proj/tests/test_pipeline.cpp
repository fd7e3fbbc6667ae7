#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "golden.hpp"
#include "whichpath/error.hpp"
#include "whichpath/pipeline.hpp"

using namespace whichpath;

namespace {

MeasuredSpectrum measured(const SpectralDensity& d, double sigma_fraction = -1.0) {
    MeasuredSpectrum m;
    m.wavelengths = d.grid().points();
    m.densities.assign(d.values().begin(), d.values().end());
    if (sigma_fraction >= 0.0) m.uncertainties = std::vector<double>(d.size(), sigma_fraction * d.max());
    return m;
}

}  // namespace

TEST_CASE("mode rows match the frozen reference model") {
    for (double mu : {1.0, 0.98}) {
        RunConfig c;
        c.mode_overlap = mu;
        for (double dl : {1.4, 2.4, 4.9, 6.5}) {
            const auto a = analyze_setting(c, dl);
            for (const auto& row : a.rows) {
                for (const auto& ref : golden::kModes) {
                    if (ref.mu != mu || ref.delta_lambda != dl || ref.mode != row.mode) continue;
                    CAPTURE(mu);
                    CAPTURE(dl);
                    CAPTURE(row.mode);
                    CHECK(row.lambda == doctest::Approx(ref.lambda).epsilon(1e-12));
                    CHECK(row.i_max == doctest::Approx(ref.i_max).epsilon(1e-9));
                    CHECK(row.i_min == doctest::Approx(ref.i_min).epsilon(1e-9));
                    CHECK(row.V == doctest::Approx(ref.V).epsilon(1e-9));
                    CHECK(row.D == doctest::Approx(ref.D).epsilon(1e-9));
                    CHECK(row.sum_of_squares == doctest::Approx(ref.V * ref.V + ref.D * ref.D).epsilon(1e-9));
                }
            }
        }
    }
}

TEST_CASE("simulation grid reaches dark edges") {
    RunConfig c;
    for (double dl : {0.0, 4.9, 6.5}) {
        const auto arms = simulate_arms(c, dl);
        const auto& g = arms.arm1.grid();
        CHECK(g.lambda_min() <= 815.0);
        CHECK(g.lambda_max() >= 835.0 - 1e-9);
        for (const auto* d : {&arms.arm1, &arms.arm2}) {
            CHECK((*d)[0] <= 1e-10 * d->max());
            CHECK((*d)[d->size() - 1] <= 1e-10 * d->max());
        }
    }
    c.extend_grid = false;
    CHECK(simulate_arms(c, 4.9).arm1.grid() == c.grid.build());
}

TEST_CASE("balancing equalizes arm power by dimming the stronger arm") {
    RunConfig c;
    const auto arms = simulate_arms(c, 4.9);
    CHECK(integrate(arms.arm1) == doctest::Approx(integrate(arms.arm2)).epsilon(1e-12));
    CHECK(arms.filter1.peak_transmission < 1.0);
    CHECK(arms.filter2.peak_transmission == 1.0);
    CHECK(arms.filter2.center == doctest::Approx(821.1));
    c.balance_arms = false;
    const auto raw = simulate_arms(c, 4.9);
    CHECK(raw.filter1.peak_transmission == 1.0);
    CHECK(integrate(raw.arm1) > integrate(raw.arm2));
}

TEST_CASE("analysis is internally consistent") {
    RunConfig c;
    const auto a = analyze_setting(c, 4.9);
    const double n = normalization_constant(a.arm1);
    for (std::size_t i = 0; i < a.arm1.size(); ++i) {
        CHECK(a.normalized.max[i] == doctest::Approx(a.extrema.max[i] / n).epsilon(1e-15));
        CHECK(a.extrema.max[i] >= a.extrema.min[i]);
    }
    CHECK(a.modes.lambda_B < a.modes.lambda_E);
    CHECK(a.modes.lambda_E < a.modes.lambda_A);
    CHECK(std::abs(a.modes.lambda_split - a.modes.lambda_E) <= a.arm1.grid().step());
    CHECK(a.bins.lambda_s == a.modes.lambda_split);
    CHECK(a.bins.delta_lambda == 4.9);
    CHECK_FALSE(a.bins.truncated);
}

TEST_CASE("sweep keeps input order and reports failures per setting") {
    RunConfig c;
    c.delta_lambda = {6.5, 0.0, 1.4};
    const auto out = analyze_sweep(c);
    REQUIRE(out.size() == 3);
    CHECK(out[0].delta_lambda == 6.5);
    CHECK(out[0].analysis.has_value());
    CHECK_FALSE(out[1].analysis.has_value());
    CHECK(out[1].error == ErrorCode::insufficient_structure);
    CHECK(out[2].analysis->delta_lambda == 1.4);
}

TEST_CASE("ingesting simulated arms reproduces the simulation") {
    RunConfig c;
    for (double dl : {1.4, 6.5}) {
        const auto sim = analyze_setting(c, dl);
        const auto ing = ingest_spectra(c, measured(sim.arm1), measured(sim.arm2));
        CHECK_FALSE(ing.has_uncertainty);
        CHECK(ing.analysis.arm1.grid() == sim.arm1.grid());
        for (std::size_t k = 0; k < 3; ++k) {
            CHECK(ing.analysis.rows[k].lambda == sim.rows[k].lambda);
            CHECK(ing.analysis.rows[k].i_min == doctest::Approx(sim.rows[k].i_min).epsilon(1e-12));
            CHECK(ing.analysis.rows[k].V == doctest::Approx(sim.rows[k].V).epsilon(1e-12));
            CHECK(ing.row_errors[k].V == 0.0);
        }
        CHECK(ing.analysis.bins.P_plus == doctest::Approx(sim.bins.P_plus).epsilon(1e-12));
        CHECK(ing.P_plus_error == 0.0);
    }
}

TEST_CASE("ingest pads arms onto a grid covering both files") {
    RunConfig c;
    const auto sim = analyze_setting(c, 4.9);
    auto m1 = measured(sim.arm1);
    auto m2 = measured(sim.arm2);
    m2.wavelengths.push_back(m2.wavelengths.back() + 0.2);
    m2.densities.push_back(0.0);
    const auto ing = ingest_spectra(c, m1, m2);
    CHECK(ing.analysis.arm1.size() == sim.arm1.size() + 1);
    CHECK(ing.analysis.arm1[ing.analysis.arm1.size() - 1] == 0.0);
    CHECK(ing.analysis.rows[0].V == doctest::Approx(sim.rows[0].V).epsilon(1e-12));
}

TEST_CASE("propagated uncertainty scales with the input uncertainty") {
    RunConfig c;
    const auto sim = analyze_setting(c, 4.9);
    const auto small = ingest_spectra(c, measured(sim.arm1, 1e-5), measured(sim.arm2, 1e-5));
    const auto large = ingest_spectra(c, measured(sim.arm1, 2e-5), measured(sim.arm2, 2e-5));
    CHECK(small.has_uncertainty);
    CHECK(small.P_plus_error > 0.0);
    CHECK(large.P_plus_error == doctest::Approx(2.0 * small.P_plus_error).epsilon(1e-3));
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(small.row_errors[k].i_max > 0.0);
        CHECK(large.row_errors[k].i_max == doctest::Approx(2.0 * small.row_errors[k].i_max).epsilon(1e-3));
    }
    // First-order check of the mode A I_max error: d/dI1 and d/dI2 of (sqrt I1 + sqrt I2)^2 mu-weighted.
    const std::size_t i = sim.modes.index_A;
    const double a = sim.arm1[i], b = sim.arm2[i], mu = c.mode_overlap;
    const double s1 = 1e-5 * sim.arm1.max(), s2 = 1e-5 * sim.arm2.max();
    const double n = normalization_constant(sim.arm1);
    const double d1 = (1.0 + mu * std::sqrt(b / a)) * s1 / n, d2 = (1.0 + mu * std::sqrt(a / b)) * s2 / n;
    CHECK(small.row_errors[0].i_max == doctest::Approx(std::hypot(d1, d2)).epsilon(1e-3));
}
