#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "whichpath/error.hpp"
#include "whichpath/spectral.hpp"

using namespace whichpath;

TEST_CASE("grid construction and invariants") {
    const SpectralGrid g(815.0, 835.0, 0.2);
    CHECK(g.size() == 101);
    CHECK(g.at(0) == 815.0);
    CHECK(g.at(100) == doctest::Approx(835.0).epsilon(1e-14));
    const auto pts = g.points();
    for (std::size_t i = 1; i < pts.size(); ++i) CHECK(pts[i] - pts[i - 1] == doctest::Approx(0.2).epsilon(1e-9));

    CHECK_THROWS_AS(SpectralGrid(835.0, 815.0, 0.2), Error);
    CHECK_THROWS_AS(SpectralGrid(815.0, 835.0, 0.0), Error);
    CHECK_THROWS_AS(SpectralGrid(815.0, 835.0, 0.3), Error);
    CHECK_NOTHROW(SpectralGrid(815.0, 835.0, 0.25));

    const SpectralGrid e = g.extended(5, 3);
    CHECK(e.size() == 109);
    CHECK(e.at(5) == doctest::Approx(815.0));
    CHECK(e.lambda_max() == doctest::Approx(835.6));
}

TEST_CASE("density rejects negative or mismatched values") {
    const SpectralGrid g(0.0, 2.0, 1.0);
    CHECK_THROWS_AS(SpectralDensity(g, {1.0, -1e-300, 0.0}), Error);
    CHECK_THROWS_AS(SpectralDensity(g, {1.0, 2.0}), Error);
    CHECK_THROWS_AS(SpectralDensity(g, {1.0, NAN, 2.0}), Error);
    const SpectralDensity d(g, {1.0, 3.0, 5.0});
    CHECK(d.interpolate(0.5) == doctest::Approx(2.0));
    CHECK(d.interpolate(2.0) == 5.0);
    CHECK(d.interpolate(-0.1) == 0.0);
    CHECK(d.interpolate(2.1) == 0.0);
}

TEST_CASE("gaussian filter examples") {
    FilterProfile f;
    const SpectralGrid g(820.0, 832.0, 0.5);
    const auto t = evaluate_filter(f, g);
    CHECK(t[12] == doctest::Approx(1.0).epsilon(1e-15));   // 826
    CHECK(t[15] == doctest::Approx(0.5).epsilon(1e-14));   // 827.5
    CHECK(t[18] == doctest::Approx(0.0625).epsilon(1e-14));  // 829
    CHECK(t[18] == doctest::Approx(std::exp(-4.0 * std::log(2.0))).epsilon(1e-14));
}

TEST_CASE("half maximum sits at fwhm/2 for every order and blocking floor") {
    for (int order : {1, 2, 3, 5, 8}) {
        for (double blocking : {0.0, 1e-4, 1e-2, 0.3}) {
            FilterProfile f;
            f.shape = order == 1 ? FilterShape::gaussian : FilterShape::supergaussian;
            f.order = order;
            f.blocking = blocking;
            f.peak_transmission = 0.7;
            f.fwhm = 2.4;
            CAPTURE(order);
            CAPTURE(blocking);
            CHECK(f.transmission(f.center) == doctest::Approx(0.7).epsilon(1e-14));
            // center +- 1.2 is inexact in binary; the 2n-th power magnifies that offset.
            CHECK(f.transmission(f.center + 1.2) == doctest::Approx(0.35).epsilon(1e-11));
            CHECK(f.transmission(f.center - 1.2) == doctest::Approx(0.35).epsilon(1e-11));
            // The floor is reached far out of band.
            CHECK(f.transmission(f.center + 50.0) == doctest::Approx(0.7 * blocking).epsilon(1e-12));
        }
    }
}

TEST_CASE("filter is symmetric about its center on any grid") {
    for (auto shape : {FilterShape::gaussian, FilterShape::supergaussian}) {
        FilterProfile f;
        f.shape = shape;
        f.order = shape == FilterShape::gaussian ? 1 : 4;
        f.blocking = 1e-4;
        const SpectralGrid g(816.0, 836.0, 0.2);  // symmetric about 826
        const auto t = evaluate_filter(f, g);
        for (std::size_t i = 0; i < t.size(); ++i) CHECK(t[i] == doctest::Approx(t[t.size() - 1 - i]).epsilon(1e-12));
    }
}

TEST_CASE("invalid filter profiles") {
    FilterProfile f;
    f.fwhm = 0.0;
    CHECK_THROWS_AS(f.validate(), Error);
    f = {};
    f.peak_transmission = 1.5;
    CHECK_THROWS_AS(f.validate(), Error);
    f = {};
    f.order = 2;  // gaussian with order 2
    CHECK_THROWS_AS(f.validate(), Error);
    f = {};
    f.blocking = 0.5;
    CHECK_THROWS_AS(f.validate(), Error);
}

TEST_CASE("shift_filter examples") {
    const FilterProfile f;
    CHECK(shift_filter(f, 4.9).center == doctest::Approx(821.1));
    CHECK(shift_filter(f, 6.5).center == doctest::Approx(819.5));
    const auto same = shift_filter(f, 0.0);
    CHECK(same.center == f.center);
    CHECK(same.fwhm == f.fwhm);
    CHECK(same.peak_transmission == f.peak_transmission);
    CHECK(shift_filter(f, 4.9).fwhm == f.fwhm);
    CHECK_THROWS_AS(shift_filter(f, -0.1), Error);
}

TEST_CASE("shift then evaluate equals evaluate then index shift") {
    FilterProfile f;
    f.blocking = 1e-3;
    const SpectralGrid g(810.0, 840.0, 0.1);
    const auto base = evaluate_filter(f, g);
    const auto moved = evaluate_filter(shift_filter(f, 4.9), g);  // 49 steps
    for (std::size_t i = 0; i + 49 < g.size(); ++i) {
        CHECK(moved[i] == doctest::Approx(base[i + 49]).epsilon(1e-9));
    }
}

TEST_CASE("arm spectrum is the gaussian product") {
    SourceSpectrum s;
    FilterProfile f;
    const SpectralGrid g(815.0, 835.0, 0.01);
    const auto arm = arm_spectrum(s, f, g);
    const auto prod = oracle::gaussian_product(826.0, 10.0, 826.0, 3.0);
    const double peak = oracle::gaussian_source(826.0, 826.0, 10.0, 1.0);
    for (std::size_t i = 0; i < g.size(); i += 37) {
        const double z = (g.at(i) - prod.center) / prod.sigma;
        CHECK(arm[i] == doctest::Approx(peak * std::exp(-0.5 * z * z)).epsilon(1e-12));
    }
    // Narrower than the filter alone: half maximum is reached inside 826 +- 1.5.
    const double half = peak / 2.0;
    CHECK(arm.interpolate(827.5) < half);
    CHECK(arm.interpolate(826.0 + prod.sigma * std::sqrt(2.0 * std::log(2.0))) == doctest::Approx(half).epsilon(1e-4));

    // Shifted filter: centroid of the product matches the closed form.
    const auto moved = arm_spectrum(s, shift_filter(f, 4.9), g);
    const auto prod2 = oracle::gaussian_product(826.0, 10.0, 821.1, 3.0);
    double m0 = 0.0, m1 = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        m0 += moved[i];
        m1 += moved[i] * g.at(i);
    }
    CHECK(m1 / m0 == doctest::Approx(prod2.center).epsilon(1e-9));
}

TEST_CASE("arm spectrum annihilator and far filter") {
    SourceSpectrum s;
    FilterProfile f;
    f.peak_transmission = 0.0;
    const SpectralGrid g(815.0, 835.0, 0.2);
    const auto zero = arm_spectrum(s, f, g);
    CHECK(zero.max() == 0.0);

    FilterProfile far;
    far.center = 900.0;
    const auto tiny = arm_spectrum(s, far, g);
    const double ref = arm_spectrum(s, FilterProfile{}, g).max();
    CHECK(tiny.max() < 1e-12 * ref);
}

TEST_CASE("arm spectrum is bilinear in power and peak transmission") {
    SourceSpectrum s;
    FilterProfile f;
    f.peak_transmission = 0.4;
    f.blocking = 1e-4;
    const SpectralGrid g(815.0, 835.0, 0.2);
    const auto base = arm_spectrum(s, f, g);
    SourceSpectrum s2 = s;
    s2.total_power = 2.0;
    FilterProfile f2 = f;
    f2.peak_transmission = 0.8;
    const auto a = arm_spectrum(s2, f, g);
    const auto b = arm_spectrum(s, f2, g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(a[i] == doctest::Approx(2.0 * base[i]).epsilon(1e-14));
        CHECK(b[i] == doctest::Approx(2.0 * base[i]).epsilon(1e-14));
    }
}

TEST_CASE("source integrates to its total power") {
    SourceSpectrum s;
    s.total_power = 3.0;
    const SpectralGrid g(776.0, 876.0, 0.05);
    CHECK(integrate(evaluate_source(s, g)) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("incompatible grids are reported") {
    const SpectralDensity a = SpectralDensity::zeros(SpectralGrid(815.0, 835.0, 0.2));
    const SpectralDensity b = SpectralDensity::zeros(SpectralGrid(815.0, 835.0, 0.1));
    try {
        require_same_grid(a, b);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::incompatible_spectra);
    }
}
