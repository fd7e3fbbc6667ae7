#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "whichpath/spectral.hpp"
#include "whichpath/timesim.hpp"

namespace whichpath {

struct GridSpec {
    double lambda_min = 815.0;
    double lambda_max = 835.0;
    double step = 0.2;

    SpectralGrid build() const { return SpectralGrid(lambda_min, lambda_max, step); }
};

struct TimesimSettings {
    InterferometerConfig interferometer = default_interferometer();
    SamplingSpec sampling;
    std::size_t counterpart_phase_count = 16;
};

struct RunConfig {
    SourceSpectrum source;
    FilterProfile filter1;
    FilterProfile filter2;
    bool balance_arms = true;
    GridSpec grid;
    bool extend_grid = true;
    std::vector<double> delta_lambda{1.4, 2.4, 4.9, 6.5};
    double mode_overlap = 0.98;
    std::size_t phase_count = 64;
    std::size_t smoothing_window = 1;
    TimesimSettings timesim;
    std::string output_dir = ".";

    RunConfig();
    void validate() const;
};

// Flat key=value text, one setting per line, '#' starts a comment.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

void apply_setting(RunConfig& config, std::string_view key, std::string_view value);
std::string get_setting(const RunConfig& config, std::string_view key);
std::vector<std::string> setting_keys(const RunConfig& config);

// Every setting, one key=value per line, in setting_keys order; parse_config reads it back.
std::string dump_config(const RunConfig& config);

}  // namespace whichpath
