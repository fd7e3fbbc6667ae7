#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <string>

#include "whichpath/whichpath.h"

namespace fs = std::filesystem;

namespace {

struct Config {
    wp_config* handle = nullptr;
    Config() { REQUIRE(wp_config_create(&handle) == WP_OK); }
    ~Config() { wp_config_destroy(handle); }
};

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("whichpath_capi_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("config handles") {
    Config c;
    char buf[64];
    size_t needed = 0;
    CHECK(wp_config_get(c.handle, "interference.mode_overlap", buf, sizeof buf, &needed) == WP_OK);
    CHECK(std::string(buf) == "0.98");
    CHECK(needed == 5);
    CHECK(wp_config_set(c.handle, "interference.mode_overlap", "1") == WP_OK);
    CHECK(wp_config_get(c.handle, "interference.mode_overlap", buf, sizeof buf, nullptr) == WP_OK);
    CHECK(std::string(buf) == "1");

    // Too small a buffer still reports the size.
    char tiny[2];
    CHECK(wp_config_get(c.handle, "sweep.delta_lambda", tiny, sizeof tiny, &needed) == WP_OK);
    CHECK(needed == std::string("1.4,2.4,4.9,6.5").size() + 1);

    CHECK(wp_config_set(c.handle, "bogus", "1") == WP_ERR_PARSE);
    CHECK(std::string(wp_last_error()).find("bogus") != std::string::npos);
    CHECK(wp_config_set(c.handle, "phase.count", "63") == WP_OK);
    CHECK(wp_config_validate(c.handle) == WP_ERR_INVALID_ARGUMENT);
    CHECK(wp_config_set(nullptr, "a", "b") == WP_ERR_INVALID_ARGUMENT);
    CHECK(wp_config_load("/nonexistent/whichpath.cfg", &c.handle) == WP_ERR_IO);
}

TEST_CASE("status strings and exit codes") {
    CHECK(std::string(wp_status_string(WP_OK)) == "ok");
    CHECK(wp_exit_code(WP_OK) == 0);
    CHECK(wp_exit_code(WP_ERR_DEGENERATE) == 1);
    CHECK(wp_exit_code(WP_ERR_ZERO_REFERENCE) == 1);
    CHECK(wp_exit_code(WP_ERR_PARSE) == 2);
    CHECK(wp_exit_code(WP_ERR_INVALID_ARGUMENT) == 2);
    CHECK(wp_exit_code(WP_ERR_IO) == 2);
    CHECK(wp_exit_code(WP_ERR_INTERNAL) == 2);
}

TEST_CASE("sweep records") {
    Config c;
    REQUIRE(wp_config_set(c.handle, "filter1.blocking", "0") == WP_OK);
    REQUIRE(wp_config_set(c.handle, "filter2.blocking", "0") == WP_OK);
    REQUIRE(wp_config_set(c.handle, "sweep.delta_lambda", "0,4.9,6.5") == WP_OK);
    wp_sweep* s = nullptr;
    REQUIRE(wp_sweep_run(c.handle, &s) == WP_OK);
    CHECK(wp_sweep_count(s) == 3);
    wp_binned b{};
    CHECK(wp_sweep_record(s, 0, &b) == WP_OK);
    CHECK(b.valid == 0);
    CHECK(wp_sweep_record(s, 2, &b) == WP_OK);
    CHECK(b.valid == 1);
    CHECK(b.delta_lambda == 6.5);
    CHECK(b.p_plus > 0.4);
    CHECK(std::abs(b.delta_p) < 1e-9);
    wp_binned mean{};
    CHECK(wp_sweep_mean(s, &mean) == WP_OK);
    CHECK(mean.valid == 1);
    CHECK(std::abs(mean.delta_p) < 1e-9);
    CHECK(wp_sweep_record(s, 3, &b) == WP_ERR_INVALID_ARGUMENT);
    wp_sweep_destroy(s);
}

TEST_CASE("array primitives") {
    const double hi[] = {1.0, 0.902, 0.0};
    const double lo[] = {0.0, 0.014, 0.0};
    double v[3];
    CHECK(wp_visibility(hi, lo, 3, v) == WP_OK);
    CHECK(v[0] == 1.0);
    CHECK(v[1] == doctest::Approx(0.97).epsilon(0.005));
    CHECK(std::isnan(v[2]));

    const double a1[] = {0.2, 0.25, 0.3};
    const double a2[] = {0.05, 0.0, 0.3};
    double mx[3], mn[3], d[3];
    CHECK(wp_theory_extrema(a1, a2, 3, mx, mn) == WP_OK);
    CHECK(mx[0] == doctest::Approx(0.45));
    CHECK(mn[0] == doctest::Approx(0.05));
    CHECK(mx[1] == 0.25);
    CHECK(wp_distinguishability(a1, a2, 3, d) == WP_OK);
    CHECK(d[1] == 1.0);
    CHECK(d[2] == 0.0);

    double s = 0.0;
    int pass = 0;
    CHECK(wp_egy_check(0.71, 0.66, &s, &pass) == WP_OK);
    CHECK(s == doctest::Approx(0.9397));
    CHECK(pass == 1);
    CHECK(wp_visibility(nullptr, lo, 3, v) == WP_ERR_INVALID_ARGUMENT);
    CHECK(wp_visibility(lo, hi, 3, v) == WP_ERR_INVALID_ARGUMENT);
}

TEST_CASE("commands write into the configured directory") {
    Config c;
    const auto dir = scratch("commands");
    REQUIRE(wp_config_set(c.handle, "output.dir", dir.c_str()) == WP_OK);
    CHECK(wp_cmd_table(c.handle) == WP_OK);
    CHECK(fs::exists(dir / "table_extrema.csv"));
    CHECK(fs::exists(dir / "table_duality.csv"));
    CHECK(wp_cmd_scan(c.handle, 4.9) == WP_OK);
    CHECK(fs::exists(dir / "scan_dl4.9_curves.csv"));
    CHECK(wp_cmd_scan(c.handle, 0.0) == WP_ERR_DEGENERATE);
    CHECK(wp_cmd_ingest(c.handle, (dir / "scan_dl4.9_arm1.txt").c_str(), (dir / "scan_dl4.9_arm2.txt").c_str()) ==
          WP_OK);
    CHECK(fs::exists(dir / "ingested_table_modes.csv"));
    CHECK(wp_cmd_ingest(c.handle, "/dev/null", (dir / "scan_dl4.9_arm2.txt").c_str()) == WP_ERR_PARSE);
    CHECK(wp_cmd_danan(c.handle) == WP_OK);
    CHECK(fs::exists(dir / "danan_difference_spectrum.csv"));
    CHECK(wp_cmd_bins(c.handle) == WP_OK);
    CHECK(fs::exists(dir / "bins.csv"));
    fs::remove_all(dir);
}
