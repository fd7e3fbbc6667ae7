#include "whichpath/whichpath.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <new>
#include <string>

#include "whichpath/commands.hpp"
#include "whichpath/pipeline.hpp"

struct wp_config {
    whichpath::RunConfig config;
};

struct wp_sweep {
    whichpath::SweepSummary summary;
};

namespace {

thread_local std::string last_error;
thread_local std::string last_warnings;

wp_status to_status(whichpath::ErrorCode code) {
    using whichpath::ErrorCode;
    switch (code) {
        case ErrorCode::invalid_argument: return WP_ERR_INVALID_ARGUMENT;
        case ErrorCode::incompatible_spectra: return WP_ERR_INCOMPATIBLE;
        case ErrorCode::insufficient_structure: return WP_ERR_DEGENERATE;
        case ErrorCode::zero_reference: return WP_ERR_ZERO_REFERENCE;
        case ErrorCode::parse: return WP_ERR_PARSE;
        case ErrorCode::io: return WP_ERR_IO;
    }
    return WP_ERR_INTERNAL;
}

template <class F>
wp_status try_(F&& f) {
    last_error.clear();
    try {
        f();
        return WP_OK;
    } catch (const whichpath::Error& e) {
        last_error = e.what();
        return to_status(e.code());
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
    } catch (const std::exception& e) {
        last_error = e.what();
    } catch (...) {
        last_error = "unknown error";
    }
    return WP_ERR_INTERNAL;
}

void check_arg(bool ok, const char* what) {
    if (!ok) whichpath::fail(whichpath::ErrorCode::invalid_argument, what);
}

wp_status run_command(const wp_config* config, const auto& body) {
    last_warnings.clear();
    return try_([&] {
        check_arg(config != nullptr, "config handle is null");
        const whichpath::CommandReport report = body(config->config);
        for (const auto& w : report.warnings) last_warnings += w + "\n";
    });
}

wp_binned to_binned(const whichpath::SweepEntry& e) {
    wp_binned b{e.delta_lambda, 0.0, 0.0, 0.0, 0.0, 0};
    if (e.powers) {
        b.lambda_s = e.powers->lambda_s;
        b.p_plus = e.powers->P_plus;
        b.p_minus = e.powers->P_minus;
        b.delta_p = e.powers->delta_P;
        b.valid = 1;
    }
    return b;
}

whichpath::SpectralDensity unit_density(const double* v, std::size_t n) {
    check_arg(v != nullptr && n >= 2, "arrays must be non-null with at least two points");
    return whichpath::SpectralDensity(whichpath::SpectralGrid(0.0, static_cast<double>(n - 1), 1.0),
                                      std::vector<double>(v, v + n));
}

void copy_curve(const whichpath::RatioCurve& c, double* out) {
    for (std::size_t i = 0; i < c.values.size(); ++i) {
        out[i] = c.values[i].value_or(std::numeric_limits<double>::quiet_NaN());
    }
}

}  // namespace

extern "C" {

const char* wp_status_string(wp_status status) {
    switch (status) {
        case WP_OK: return "ok";
        case WP_ERR_INVALID_ARGUMENT: return "invalid argument";
        case WP_ERR_INCOMPATIBLE: return "incompatible spectra";
        case WP_ERR_DEGENERATE: return "insufficient visibility structure";
        case WP_ERR_ZERO_REFERENCE: return "zero normalization reference";
        case WP_ERR_PARSE: return "parse error";
        case WP_ERR_IO: return "i/o error";
        case WP_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* wp_last_error(void) { return last_error.c_str(); }

const char* wp_last_warnings(void) { return last_warnings.c_str(); }

int wp_exit_code(wp_status status) {
    switch (status) {
        case WP_OK: return 0;
        case WP_ERR_DEGENERATE:
        case WP_ERR_ZERO_REFERENCE: return 1;
        default: return 2;
    }
}

wp_status wp_config_create(wp_config** out) {
    return try_([&] {
        check_arg(out != nullptr, "output pointer is null");
        *out = new wp_config{};
    });
}

wp_status wp_config_load(const char* path, wp_config** out) {
    return try_([&] {
        check_arg(path != nullptr && out != nullptr, "path and output pointer must be non-null");
        *out = new wp_config{whichpath::load_config(path)};
    });
}

wp_status wp_config_set(wp_config* config, const char* key, const char* value) {
    return try_([&] {
        check_arg(config && key && value, "config, key and value must be non-null");
        whichpath::apply_setting(config->config, key, value);
    });
}

wp_status wp_config_get(const wp_config* config, const char* key, char* buf, size_t buf_len, size_t* needed) {
    return try_([&] {
        check_arg(config && key, "config and key must be non-null");
        const std::string v = whichpath::get_setting(config->config, key);
        if (needed) *needed = v.size() + 1;
        if (buf && buf_len > v.size()) std::memcpy(buf, v.c_str(), v.size() + 1);
        else if (buf && buf_len > 0) buf[0] = '\0';
    });
}

wp_status wp_config_validate(const wp_config* config) {
    return try_([&] {
        check_arg(config != nullptr, "config handle is null");
        config->config.validate();
    });
}

void wp_config_destroy(wp_config* config) { delete config; }

wp_status wp_cmd_scan(const wp_config* config, double delta_lambda) {
    return run_command(config, [&](const whichpath::RunConfig& c) { return whichpath::cmd_scan(c, delta_lambda); });
}

wp_status wp_cmd_table(const wp_config* config) {
    return run_command(config, [](const whichpath::RunConfig& c) { return whichpath::cmd_table(c); });
}

wp_status wp_cmd_bins(const wp_config* config) {
    return run_command(config, [](const whichpath::RunConfig& c) { return whichpath::cmd_bins(c); });
}

wp_status wp_cmd_danan(const wp_config* config) {
    return run_command(config, [](const whichpath::RunConfig& c) { return whichpath::cmd_danan(c); });
}

wp_status wp_cmd_ingest(const wp_config* config, const char* arm1_path, const char* arm2_path) {
    return run_command(config, [&](const whichpath::RunConfig& c) {
        check_arg(arm1_path && arm2_path, "spectrum paths must be non-null");
        return whichpath::cmd_ingest(c, arm1_path, arm2_path);
    });
}

wp_status wp_sweep_run(const wp_config* config, wp_sweep** out) {
    return try_([&] {
        check_arg(config && out, "config and output pointer must be non-null");
        config->config.validate();
        *out = new wp_sweep{whichpath::bin_sweep(whichpath::analyze_sweep(config->config))};
    });
}

size_t wp_sweep_count(const wp_sweep* sweep) { return sweep ? sweep->summary.entries.size() : 0; }

wp_status wp_sweep_record(const wp_sweep* sweep, size_t index, wp_binned* out) {
    return try_([&] {
        check_arg(sweep && out, "sweep and output pointer must be non-null");
        check_arg(index < sweep->summary.entries.size(), "sweep index out of range");
        *out = to_binned(sweep->summary.entries[index]);
    });
}

wp_status wp_sweep_mean(const wp_sweep* sweep, wp_binned* out) {
    return try_([&] {
        check_arg(sweep && out, "sweep and output pointer must be non-null");
        const auto& s = sweep->summary;
        if (s.used == 0) whichpath::fail(whichpath::ErrorCode::insufficient_structure, "no setting produced powers");
        const double nan = std::numeric_limits<double>::quiet_NaN();
        *out = wp_binned{nan, nan, s.mean_P_plus, s.mean_P_minus, s.mean_delta_P, 1};
    });
}

void wp_sweep_destroy(wp_sweep* sweep) { delete sweep; }

wp_status wp_visibility(const double* i_max, const double* i_min, size_t n, double* out) {
    return try_([&] {
        check_arg(out != nullptr, "output array is null");
        copy_curve(whichpath::visibility(unit_density(i_max, n), unit_density(i_min, n)), out);
    });
}

wp_status wp_distinguishability(const double* arm1, const double* arm2, size_t n, double* out) {
    return try_([&] {
        check_arg(out != nullptr, "output array is null");
        copy_curve(whichpath::distinguishability(unit_density(arm1, n), unit_density(arm2, n)), out);
    });
}

wp_status wp_theory_extrema(const double* arm1, const double* arm2, size_t n, double* i_max, double* i_min) {
    return try_([&] {
        check_arg(i_max && i_min, "output arrays must be non-null");
        const auto e = whichpath::theory_extrema(unit_density(arm1, n), unit_density(arm2, n));
        for (std::size_t i = 0; i < n; ++i) {
            i_max[i] = e.max[i];
            i_min[i] = e.min[i];
        }
    });
}

wp_status wp_egy_check(double visibility, double distinguishability, double* sum_of_squares, int* pass) {
    return try_([&] {
        const auto r = whichpath::egy_check(visibility, distinguishability);
        if (sum_of_squares) *sum_of_squares = r.sum_of_squares;
        if (pass) *pass = r.pass ? 1 : 0;
    });
}

}  // extern "C"
