#pragma once

#include <string>
#include <vector>

#include "whichpath/config.hpp"

namespace whichpath {

struct CommandReport {
    std::vector<std::string> files;
    std::vector<std::string> warnings;
};

// Each command writes CSV files into config.output_dir and throws Error on failure.
CommandReport cmd_scan(const RunConfig& config, double delta_lambda);
CommandReport cmd_table(const RunConfig& config);
CommandReport cmd_bins(const RunConfig& config);
CommandReport cmd_danan(const RunConfig& config);
CommandReport cmd_ingest(const RunConfig& config, const std::string& arm1_path, const std::string& arm2_path);

}  // namespace whichpath
