#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "whichpath/whichpath.h"

namespace {

struct Options {
    std::string config_path;
    std::string out_dir;
    std::vector<double> delta_lambda;
    std::optional<double> mu;
    std::vector<std::string> settings;
    std::string arm1, arm2;
};

void add_common(CLI::App* cmd, Options& o, bool sweep) {
    cmd->add_option("--config", o.config_path, "key=value configuration file")->check(CLI::ExistingFile);
    cmd->add_option("--out", o.out_dir, "output directory (else $WHICHPATH_OUT, else output.dir)");
    if (sweep) cmd->add_option("--delta-lambda", o.delta_lambda, "filter separation in nm (repeatable)");
    cmd->add_option("--mu", o.mu, "mode overlap in [0, 1]");
    cmd->add_option("--set", o.settings, "override one setting, key=value (repeatable)");
}

int report(wp_status st, const char* verb) {
    const char* warnings = wp_last_warnings();
    if (warnings && *warnings) std::fputs(warnings, stderr);
    if (st != WP_OK) {
        std::fprintf(stderr, "whichpath %s: %s: %s\n", verb, wp_status_string(st), wp_last_error());
    }
    return wp_exit_code(st);
}

wp_status join_list(wp_config* cfg, const std::vector<double>& values) {
    std::string list;
    for (double v : values) {
        if (!list.empty()) list += ',';
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        list += buf;
    }
    return wp_config_set(cfg, "sweep.delta_lambda", list.c_str());
}

// Builds the configuration from file, environment and flags, in that order.
wp_status build_config(const Options& o, wp_config** out) {
    wp_status st = o.config_path.empty() ? wp_config_create(out) : wp_config_load(o.config_path.c_str(), out);
    if (st != WP_OK) return st;
    wp_config* cfg = *out;
    for (const auto& kv : o.settings) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            std::fprintf(stderr, "--set expects key=value, got '%s'\n", kv.c_str());
            return WP_ERR_PARSE;
        }
        st = wp_config_set(cfg, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str());
        if (st != WP_OK) return st;
    }
    if (const char* env = std::getenv("WHICHPATH_OUT"); env && *env && o.out_dir.empty()) {
        if ((st = wp_config_set(cfg, "output.dir", env)) != WP_OK) return st;
    }
    if (!o.out_dir.empty() && (st = wp_config_set(cfg, "output.dir", o.out_dir.c_str())) != WP_OK) return st;
    if (!o.delta_lambda.empty() && (st = join_list(cfg, o.delta_lambda)) != WP_OK) return st;
    if (o.mu) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", *o.mu);
        if ((st = wp_config_set(cfg, "interference.mode_overlap", buf)) != WP_OK) return st;
    }
    return wp_config_validate(cfg);
}

std::vector<double> configured_deltas(const wp_config* cfg) {
    size_t needed = 0;
    wp_config_get(cfg, "sweep.delta_lambda", nullptr, 0, &needed);
    std::string text(needed, '\0');
    wp_config_get(cfg, "sweep.delta_lambda", text.data(), text.size(), &needed);
    text.resize(needed ? needed - 1 : 0);
    std::vector<double> out;
    std::size_t start = 0;
    while (start < text.size()) {
        auto comma = text.find(',', start);
        if (comma == std::string::npos) comma = text.size();
        out.push_back(std::strtod(text.substr(start, comma - start).c_str(), nullptr));
        start = comma + 1;
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral which-path interferometry simulator"};
    app.require_subcommand(1);
    Options o;

    auto* scan = app.add_subcommand("scan", "arm spectra, V(lambda), D(lambda) and fringes at modes A, B, E");
    add_common(scan, o, true);
    auto* table = app.add_subcommand("table", "extrema and duality tables for every delta_lambda");
    add_common(table, o, true);
    auto* bins = app.add_subcommand("bins", "binned destructive-port powers P+, P- and their difference");
    add_common(bins, o, true);
    auto* danan = app.add_subcommand("danan", "quad-cell harmonic analysis and its spectral counterpart");
    add_common(danan, o, false);
    auto* ingest = app.add_subcommand("ingest", "run the analysis chain on two measured arm spectra");
    add_common(ingest, o, false);
    ingest->add_option("ARM1", o.arm1, "arm 1 spectrum (wavelength_nm, density[, uncertainty])")->required();
    ingest->add_option("ARM2", o.arm2, "arm 2 spectrum")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const char* verb = app.get_subcommands().front()->get_name().c_str();
    wp_config* cfg = nullptr;
    wp_status st = build_config(o, &cfg);
    if (st != WP_OK) {
        const int code = report(st, verb);
        wp_config_destroy(cfg);
        return code;
    }

    int code = 0;
    if (scan->parsed()) {
        for (double dl : configured_deltas(cfg)) {
            const int c = report(wp_cmd_scan(cfg, dl), "scan");
            if (c > code) code = c;
        }
    } else if (table->parsed()) {
        code = report(wp_cmd_table(cfg), verb);
    } else if (bins->parsed()) {
        code = report(wp_cmd_bins(cfg), verb);
    } else if (danan->parsed()) {
        code = report(wp_cmd_danan(cfg), verb);
    } else if (ingest->parsed()) {
        code = report(wp_cmd_ingest(cfg, o.arm1.c_str(), o.arm2.c_str()), verb);
    }
    wp_config_destroy(cfg);
    return code;
}
