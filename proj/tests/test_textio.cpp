#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "whichpath/error.hpp"
#include "whichpath/textio.hpp"

using namespace whichpath;

namespace {

ErrorCode code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::invalid_argument;
}

std::string message_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("nine significant digits in fixed notation") {
    CHECK(format_fixed9(0.25) == "0.250000000");
    CHECK(format_fixed9(1.0) == "1.00000000");
    CHECK(format_fixed9(823.55) == "823.550000");
    CHECK(format_fixed9(-0.0345854634864) == "-0.0345854635");
    CHECK(format_fixed9(1.80042917352e-05) == "0.0000180042917");
    CHECK(format_fixed9(0.0) == "0.00000000");
    CHECK(format_fixed9(9.999999999) == "10.0000000");
    CHECK(format_fixed9(NAN) == "nan");
    CHECK(format_fixed9(1e6) == "1000000.00");
}

TEST_CASE("shortest form round-trips") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1e3, 1e3);
    for (int i = 0; i < 1000; ++i) {
        const double x = u(rng) * std::pow(10.0, i % 20 - 10);
        CHECK(parse_double(format_shortest(x)) == x);
    }
    CHECK(format_shortest(4.9) == "4.9");
    CHECK(format_shortest(6.5) == "6.5");
    CHECK(format_shortest(0.0) == "0");
}

TEST_CASE("number parsing") {
    CHECK(parse_double(" 1.5 ") == 1.5);
    CHECK(parse_double("-2e-3") == -0.002);
    CHECK(code_of([] { parse_double("abc"); }) == ErrorCode::parse);
    CHECK(code_of([] { parse_double("1.5x"); }) == ErrorCode::parse);
    CHECK(code_of([] { parse_double(""); }) == ErrorCode::parse);
}

TEST_CASE("split and trim") {
    const auto parts = split(" a, b ,c,", ',');
    REQUIRE(parts.size() == 4);
    CHECK(parts[0] == "a");
    CHECK(parts[1] == "b");
    CHECK(parts[3].empty());
    CHECK(trim("\t x \r\n") == "x");
}

TEST_CASE("csv writer") {
    CsvWriter w({"a", "b"});
    w.row({"1", "2"}).row({"3", "4"});
    CHECK(w.text() == "a,b\n1,2\n3,4\n");
    CHECK_THROWS_AS(w.row({"1"}), Error);
}

TEST_CASE("spectrum parsing accepts headers, comments and both separators") {
    const auto s = parse_spectrum("# arm one\nwavelength_nm,density\n815,0.1\n815.2, 0.2\n\n815.4,0\n");
    CHECK(s.wavelengths == std::vector<double>{815.0, 815.2, 815.4});
    CHECK(s.densities == std::vector<double>{0.1, 0.2, 0.0});
    CHECK_FALSE(s.uncertainties.has_value());

    const auto t = parse_spectrum("815 0.1 0.01\n815.2\t0.2\t0.02\n");
    REQUIRE(t.uncertainties.has_value());
    CHECK(*t.uncertainties == std::vector<double>{0.01, 0.02});
}

TEST_CASE("spectrum diagnostics carry line numbers") {
    CHECK(message_of([] { parse_spectrum("815,1\n815,2\n", "a.txt"); }).find("a.txt:2:") != std::string::npos);
    CHECK(message_of([] { parse_spectrum("815,1\n814,2\n", "a.txt"); }).find("strictly increasing") != std::string::npos);
    CHECK(message_of([] { parse_spectrum("x,y\n815,1\n816,-2\n", "b"); }).find("b:3: negative density") !=
          std::string::npos);
    CHECK(message_of([] { parse_spectrum("815,1\n816,nan\n", "c"); }).find("c:2:") != std::string::npos);
    CHECK(message_of([] { parse_spectrum("815,1\n816,oops\n", "d"); }).find("d:2:") != std::string::npos);
    CHECK(message_of([] { parse_spectrum("815,1,2,3\n", "e"); }).find("e:1:") != std::string::npos);
    CHECK(message_of([] { parse_spectrum("815,1\n816,1,0.1\n", "f"); }).find("f:2:") != std::string::npos);
    CHECK(code_of([] { parse_spectrum(""); }) == ErrorCode::parse);
    CHECK(code_of([] { parse_spectrum("815,1\n"); }) == ErrorCode::parse);
    CHECK(code_of([] { parse_spectrum("815,1\n816,1,-1\n"); }) == ErrorCode::parse);
}

TEST_CASE("written spectra read back exactly") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const SpectralGrid g(815.0, 835.0, 0.2);
    std::vector<double> v(g.size());
    for (auto& x : v) x = u(rng) * 1e-3;
    const SpectralDensity d(g, v);
    const auto path = (std::filesystem::temp_directory_path() / "whichpath_textio_arm.txt").string();
    write_spectrum(path, d);
    const auto back = read_spectrum(path);
    std::filesystem::remove(path);
    REQUIRE(back.wavelengths.size() == g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(back.wavelengths[i] == g.at(i));
        CHECK(back.densities[i] == d[i]);
    }
    const auto r = resample(back, g);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(r[i] == d[i]);
}

TEST_CASE("resampling interpolates linearly and zero-fills") {
    MeasuredSpectrum m{{1.0, 2.0, 4.0}, {0.0, 2.0, 6.0}, std::vector<double>{0.1, 0.2, 0.4}};
    const SpectralGrid g(0.0, 5.0, 0.5);
    const auto r = resample(m, g);
    CHECK(r[0] == 0.0);
    CHECK(r[3] == doctest::Approx(1.0));
    CHECK(r[4] == 2.0);
    CHECK(r[6] == doctest::Approx(4.0));
    CHECK(r[10] == 0.0);
    const auto s = resample_uncertainty(m, g);
    CHECK(s[6] == doctest::Approx(0.3));
}

TEST_CASE("covering grid widens by whole steps") {
    const SpectralGrid g(815.0, 835.0, 0.2);
    const auto c = covering_grid(g, 810.1, 835.0);
    CHECK(c.lambda_min() == doctest::Approx(810.0));
    CHECK(c.lambda_max() == doctest::Approx(835.0));
    CHECK(covering_grid(g, 816.0, 830.0) == g);
}

TEST_CASE("io errors") {
    CHECK(code_of([] { read_text_file("/nonexistent/whichpath/file"); }) == ErrorCode::io);
    CHECK(code_of([] { write_text_file("/nonexistent/whichpath/file", "x"); }) == ErrorCode::io);
}
