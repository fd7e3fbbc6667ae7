#include "whichpath/commands.hpp"

#include <cmath>
#include <filesystem>
#include <numbers>

#include "whichpath/pipeline.hpp"

namespace whichpath {

namespace {

namespace fs = std::filesystem;

constexpr double kParsevalTolerance = 1e-9;

std::string out_path(const RunConfig& config, const std::string& name) {
    std::error_code ec;
    fs::create_directories(config.output_dir, ec);
    if (ec) fail(ErrorCode::io, "cannot create output directory '" + config.output_dir + "': " + ec.message());
    return (fs::path(config.output_dir) / name).string();
}

void save(CommandReport& report, const RunConfig& config, const std::string& name, const CsvWriter& csv) {
    const std::string path = out_path(config, name);
    csv.save(path);
    report.files.push_back(path);
}

std::string fx(double v) { return format_fixed9(v); }
std::string fx(const std::optional<double>& v) { return v ? format_fixed9(*v) : "nan"; }

std::string label(const SettingAnalysis& a) {
    return std::isnan(a.delta_lambda) ? "ingested" : format_shortest(a.delta_lambda);
}

CsvWriter extrema_table(bool with_errors) {
    std::vector<std::string> h{"delta_lambda_nm", "mode", "Imax", "Imin"};
    if (with_errors) h.insert(h.end(), {"Imax_err", "Imin_err"});
    return CsvWriter(h);
}

CsvWriter duality_table(bool with_errors) {
    std::vector<std::string> h{"delta_lambda_nm", "mode", "V", "D", "V2plusD2"};
    if (with_errors) h.insert(h.end(), {"V_err", "D_err", "V2plusD2_err"});
    return CsvWriter(h);
}

CsvWriter modes_table() {
    return CsvWriter({"delta_lambda_nm", "mode", "lambda_nm", "Imax", "Imin", "V", "D", "V2plusD2"});
}

CsvWriter bins_table(bool with_errors) {
    std::vector<std::string> h{"delta_lambda_nm", "lambda_s_nm", "P_plus", "P_minus", "delta_P"};
    if (with_errors) h.insert(h.end(), {"P_plus_err", "P_minus_err", "delta_P_err"});
    return CsvWriter(h);
}

void add_rows(const SettingAnalysis& a, CsvWriter& extrema, CsvWriter& duality, CsvWriter& modes,
              const std::array<ModeRowError, 3>* errors = nullptr) {
    for (std::size_t k = 0; k < 3; ++k) {
        const ModeRow& r = a.rows[k];
        const std::string mode(1, r.mode);
        std::vector<std::string> e{label(a), mode, fx(r.i_max), fx(r.i_min)};
        std::vector<std::string> d{label(a), mode, fx(r.V), fx(r.D), fx(r.sum_of_squares)};
        if (errors) {
            const ModeRowError& er = (*errors)[k];
            e.insert(e.end(), {fx(er.i_max), fx(er.i_min)});
            d.insert(d.end(), {fx(er.V), fx(er.D), fx(er.sum_of_squares)});
        }
        extrema.row(e);
        duality.row(d);
        modes.row({label(a), mode, fx(r.lambda), fx(r.i_max), fx(r.i_min), fx(r.V), fx(r.D), fx(r.sum_of_squares)});
    }
}

void note_flags(CommandReport& report, const std::string& where, const BinnedPowers& b) {
    if (b.truncated) report.warnings.push_back(where + ": spectra exceed 1e-9 of peak at the grid edge");
    if (b.clamped) report.warnings.push_back(where + ": a bin integral was negative and clamped to 0");
}

CsvWriter trace_csv(const TimeTrace& t) {
    CsvWriter csv({"t_s", "signal"});
    for (std::size_t k = 0; k < t.values.size(); ++k) csv.row({fx(t.time(k)), fx(t.values[k])});
    return csv;
}

CsvWriter spectrum_csv(const PowerSpectrum& s) {
    CsvWriter csv({"f_Hz", "magnitude"});
    for (std::size_t k = 0; k < s.frequencies.size(); ++k) csv.row({fx(s.frequencies[k]), fx(s.magnitudes[k])});
    return csv;
}

}  // namespace

CommandReport cmd_scan(const RunConfig& config, double delta_lambda) {
    config.validate();
    CommandReport report;
    const ArmPair arms = simulate_arms(config, delta_lambda);
    const std::string stem = "scan_dl" + format_shortest(delta_lambda);

    for (const auto& [suffix, arm] : {std::pair{"_arm1.txt", &arms.arm1}, std::pair{"_arm2.txt", &arms.arm2}}) {
        const std::string path = out_path(config, stem + suffix);
        write_spectrum(path, *arm);
        report.files.push_back(path);
    }

    const Extrema extrema = closed_form_extrema(arms.arm1, arms.arm2, config.mode_overlap);
    const RatioCurve v = visibility(extrema.max, extrema.min);
    const RatioCurve d = distinguishability(arms.arm1, arms.arm2);
    const double n = normalization_constant(arms.arm1);
    CsvWriter curves({"lambda_nm", "I1", "I2", "Imax", "Imin", "V", "D"});
    for (std::size_t i = 0; i < arms.arm1.size(); ++i) {
        curves.row({fx(arms.arm1.grid().at(i)), fx(arms.arm1[i] / n), fx(arms.arm2[i] / n), fx(extrema.max[i] / n),
                    fx(extrema.min[i] / n), fx(v.values[i]), fx(d.values[i])});
    }
    save(report, config, stem + "_curves.csv", curves);

    ModeSelectionOptions options;
    options.smoothing_window = config.smoothing_window;
    const SettingAnalysis a = analyze_arms(arms.arm1, arms.arm2, config.mode_overlap, options, delta_lambda);

    const FringeScan scan =
        simulate_fringes(arms.arm1, arms.arm2, config.mode_overlap, full_period_phases(config.phase_count));
    CsvWriter fringes({"lambda_nm", "phase_rad", "intensity"});
    for (std::size_t i : {a.modes.index_A, a.modes.index_B, a.modes.index_E}) {
        for (std::size_t j = 0; j < scan.phases.size(); ++j) {
            fringes.row({fx(scan.grid().at(i)), fx(scan.phases[j]), fx(scan.at(i, j) / n)});
        }
    }
    save(report, config, stem + "_fringes.csv", fringes);

    CsvWriter ex = extrema_table(false), du = duality_table(false), mo = modes_table();
    add_rows(a, ex, du, mo);
    save(report, config, stem + "_modes.csv", mo);
    note_flags(report, stem, a.bins);
    return report;
}

CommandReport cmd_table(const RunConfig& config) {
    config.validate();
    require(!config.delta_lambda.empty(), "table needs at least one delta_lambda");
    CommandReport report;
    const auto outcomes = analyze_sweep(config);
    CsvWriter ex = extrema_table(false), du = duality_table(false), mo = modes_table();
    const SettingOutcome* first_failure = nullptr;
    for (const auto& o : outcomes) {
        if (o.analysis) {
            add_rows(*o.analysis, ex, du, mo);
        } else {
            report.warnings.push_back("delta_lambda=" + format_shortest(o.delta_lambda) + ": " + o.message);
            if (!first_failure) first_failure = &o;
        }
    }
    save(report, config, "table_extrema.csv", ex);
    save(report, config, "table_duality.csv", du);
    save(report, config, "table_modes.csv", mo);
    if (first_failure) {
        fail(*first_failure->error,
             "delta_lambda=" + format_shortest(first_failure->delta_lambda) + ": " + first_failure->message);
    }
    return report;
}

CommandReport cmd_bins(const RunConfig& config) {
    config.validate();
    require(!config.delta_lambda.empty(), "bins needs at least one delta_lambda");
    CommandReport report;
    const auto outcomes = analyze_sweep(config);
    const SweepSummary s = bin_sweep(outcomes);
    CsvWriter csv = bins_table(false);
    for (const auto& e : s.entries) {
        if (e.powers) {
            const BinnedPowers& b = *e.powers;
            csv.row({format_shortest(e.delta_lambda), fx(b.lambda_s), fx(b.P_plus), fx(b.P_minus), fx(b.delta_P)});
            note_flags(report, "delta_lambda=" + format_shortest(e.delta_lambda), b);
        } else {
            csv.row({format_shortest(e.delta_lambda), "nan", "nan", "nan", "nan"});
            report.warnings.push_back(e.warning);
        }
    }
    if (s.used == 0) {
        const auto& o = outcomes.front();
        fail(*o.error, "no setting produced binned powers; first failure: " + o.message);
    }
    csv.row({"mean", "nan", fx(s.mean_P_plus), fx(s.mean_P_minus), fx(s.mean_delta_P)});
    csv.row({"diff_of_means", "nan", fx(s.mean_P_plus), fx(s.mean_P_minus), fx(s.difference_of_means)});
    save(report, config, "bins.csv", csv);
    return report;
}

CommandReport cmd_danan(const RunConfig& config) {
    config.validate();
    CommandReport report;
    const auto& ic = config.timesim.interferometer;
    const auto& sampling = config.timesim.sampling;

    const TimeTrace diff = quad_cell_signal(ic, sampling, Readout::difference);
    const TimeTrace total = quad_cell_signal(ic, sampling, Readout::total);
    const PowerSpectrum diff_spec = power_spectrum(diff);
    const PowerSpectrum total_spec = power_spectrum(total);
    if (diff.truncated || total.truncated) {
        report.warnings.push_back("transverse window clips more than 1e-9 of the beam power");
    }
    for (const auto& [name, trace, spec] : {std::tuple{"difference", &diff, &diff_spec},
                                            std::tuple{"total", &total, &total_spec}}) {
        const double r = parseval_residual(*trace, *spec);
        if (!(r <= kParsevalTolerance)) {
            report.warnings.push_back(std::string(name) + " spectrum misses Parseval by " + format_shortest(r));
        }
    }

    save(report, config, "danan_difference_trace.csv", trace_csv(diff));
    save(report, config, "danan_total_trace.csv", trace_csv(total));
    save(report, config, "danan_difference_spectrum.csv", spectrum_csv(diff_spec));
    save(report, config, "danan_total_spectrum.csv", spectrum_csv(total_spec));

    CsvWriter peaks({"mirror", "f_Hz", "difference_magnitude", "total_magnitude"});
    for (const auto& m : ic.mirrors) {
        peaks.row({std::string(1, m.label), fx(m.frequency), fx(diff_spec.at(m.frequency)),
                   fx(total_spec.at(m.frequency))});
    }
    save(report, config, "danan_mirror_lines.csv", peaks);

    if (ic.topology == Topology::blocked_c) {
        const std::size_t count = config.timesim.counterpart_phase_count;
        const std::vector<double> phases = count >= 2 ? full_period_phases(count) : std::vector<double>{ic.inner_phase};
        CsvWriter modes({"phase_rad", "symmetric", "marked_A", "marked_B", "symmetric_norm", "marked_A_norm",
                         "marked_B_norm"});
        for (const auto& p : spectral_detection_counterpart(ic, sampling, phases)) {
            modes.row({fx(p.phase), fx(p.symmetric), fx(p.marked_A), fx(p.marked_B), fx(p.symmetric_norm),
                       fx(p.marked_A_norm), fx(p.marked_B_norm)});
        }
        save(report, config, "danan_spectral_modes.csv", modes);
    } else {
        report.warnings.push_back("spectral-detection counterpart is defined for the blocked_c topology only");
    }
    return report;
}

CommandReport cmd_ingest(const RunConfig& config, const std::string& arm1_path, const std::string& arm2_path) {
    config.validate();
    CommandReport report;
    const MeasuredSpectrum m1 = read_spectrum(arm1_path);
    const MeasuredSpectrum m2 = read_spectrum(arm2_path);
    const IngestResult r = ingest_spectra(config, m1, m2);
    const bool err = r.has_uncertainty;

    CsvWriter ex = extrema_table(err), du = duality_table(err), mo = modes_table();
    add_rows(r.analysis, ex, du, mo, err ? &r.row_errors : nullptr);
    save(report, config, "ingested_table_extrema.csv", ex);
    save(report, config, "ingested_table_duality.csv", du);
    save(report, config, "ingested_table_modes.csv", mo);

    const BinnedPowers& b = r.analysis.bins;
    CsvWriter bins = bins_table(err);
    std::vector<std::string> row{"ingested", fx(b.lambda_s), fx(b.P_plus), fx(b.P_minus), fx(b.delta_P)};
    if (err) row.insert(row.end(), {fx(r.P_plus_error), fx(r.P_minus_error), fx(r.delta_P_error)});
    bins.row(row);
    save(report, config, "ingested_bins.csv", bins);
    note_flags(report, "ingested", b);
    if (!err) {
        for (const auto& row_data : r.analysis.rows) {
            if (!egy_check(std::min(row_data.V, 1.0), std::min(row_data.D, 1.0)).pass) {
                report.warnings.push_back(std::string("ingested mode ") + row_data.mode + " exceeds V^2 + D^2 = 1");
            }
        }
    }
    return report;
}

}  // namespace whichpath
