#include "whichpath/config.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "whichpath/error.hpp"
#include "whichpath/textio.hpp"

namespace whichpath {

namespace {

constexpr double kDefaultBlocking = 1e-4;
constexpr std::string_view kMirrorPrefix = "timesim.mirror.";
constexpr std::string_view kMirrorLabels = "ABCEF";

double default_mirror_frequency(char label) {
    switch (label) {
        case 'A': return 30.0;
        case 'B': return 32.0;
        case 'E': return 35.0;
        case 'C': return 37.0;
        default: return 39.0;
    }
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, const std::string& why) {
    fail(ErrorCode::parse, std::string(key) + "=" + std::string(value) + ": " + why);
}

double to_double(std::string_view key, std::string_view value) {
    double v = 0.0;
    try {
        v = parse_double(value);
    } catch (const Error& e) {
        bad_value(key, value, e.what());
    }
    if (!std::isfinite(v)) bad_value(key, value, "value must be finite");
    return v;
}

std::size_t to_count(std::string_view key, std::string_view value) {
    const double v = to_double(key, value);
    if (v < 0.0 || v != std::floor(v) || v > 1e9) bad_value(key, value, "expected a non-negative whole number");
    return static_cast<std::size_t>(v);
}

bool to_bool(std::string_view key, std::string_view value) {
    const auto t = trim(value);
    if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
    if (t == "false" || t == "0" || t == "no" || t == "off") return false;
    bad_value(key, value, "expected true or false");
}

FilterShape to_shape(std::string_view key, std::string_view value) {
    const auto t = trim(value);
    if (t == "gaussian") return FilterShape::gaussian;
    if (t == "supergaussian") return FilterShape::supergaussian;
    bad_value(key, value, "expected gaussian or supergaussian");
}

std::string bool_text(bool b) { return b ? "true" : "false"; }

std::string list_text(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += format_shortest(v[i]);
    }
    return s;
}

struct Setting {
    std::string key;
    std::function<std::string(const RunConfig&)> get;
    std::function<void(RunConfig&, std::string_view)> set;
};

template <class Access>
Setting number_setting(std::string key, Access access) {
    return Setting{key,
                   [access](const RunConfig& c) { return format_shortest(access(c)); },
                   [access, key](RunConfig& c, std::string_view v) { access(c) = to_double(key, v); }};
}

template <class Access>
Setting count_setting(std::string key, Access access) {
    return Setting{key,
                   [access](const RunConfig& c) { return std::to_string(access(c)); },
                   [access, key](RunConfig& c, std::string_view v) { access(c) = to_count(key, v); }};
}

template <class Access>
Setting bool_setting(std::string key, Access access) {
    return Setting{key,
                   [access](const RunConfig& c) { return bool_text(access(c)); },
                   [access, key](RunConfig& c, std::string_view v) { access(c) = to_bool(key, v); }};
}

void add_filter_settings(std::vector<Setting>& s, const std::string& name, FilterProfile RunConfig::*member) {
    s.push_back(number_setting(name + ".center", [member](auto& c) -> auto& { return (c.*member).center; }));
    s.push_back(number_setting(name + ".fwhm", [member](auto& c) -> auto& { return (c.*member).fwhm; }));
    s.push_back(number_setting(name + ".peak",
                               [member](auto& c) -> auto& { return (c.*member).peak_transmission; }));
    const std::string shape_key = name + ".shape";
    s.push_back(Setting{
        shape_key,
        [member](const RunConfig& c) {
            return std::string((c.*member).shape == FilterShape::gaussian ? "gaussian" : "supergaussian");
        },
        [member, shape_key](RunConfig& c, std::string_view v) { (c.*member).shape = to_shape(shape_key, v); }});
    const std::string order_key = name + ".order";
    s.push_back(Setting{order_key, [member](const RunConfig& c) { return std::to_string((c.*member).order); },
                        [member, order_key](RunConfig& c, std::string_view v) {
                            const std::size_t n = to_count(order_key, v);
                            if (n < 1 || n > 64) bad_value(order_key, v, "order must lie in 1..64");
                            (c.*member).order = static_cast<int>(n);
                        }});
    s.push_back(number_setting(name + ".blocking", [member](auto& c) -> auto& { return (c.*member).blocking; }));
}

const std::vector<Setting>& fixed_settings() {
    static const std::vector<Setting> settings = [] {
        std::vector<Setting> s;
        s.push_back(number_setting("source.center", [](auto& c) -> auto& { return c.source.center; }));
        s.push_back(number_setting("source.fwhm", [](auto& c) -> auto& { return c.source.fwhm; }));
        s.push_back(number_setting("source.power", [](auto& c) -> auto& { return c.source.total_power; }));
        add_filter_settings(s, "filter1", &RunConfig::filter1);
        add_filter_settings(s, "filter2", &RunConfig::filter2);
        s.push_back(bool_setting("arms.balance", [](auto& c) -> auto& { return c.balance_arms; }));
        s.push_back(number_setting("grid.min", [](auto& c) -> auto& { return c.grid.lambda_min; }));
        s.push_back(number_setting("grid.max", [](auto& c) -> auto& { return c.grid.lambda_max; }));
        s.push_back(number_setting("grid.step", [](auto& c) -> auto& { return c.grid.step; }));
        s.push_back(bool_setting("grid.extend", [](auto& c) -> auto& { return c.extend_grid; }));
        s.push_back(Setting{"sweep.delta_lambda", [](const RunConfig& c) { return list_text(c.delta_lambda); },
                            [](RunConfig& c, std::string_view v) {
                                std::vector<double> out;
                                if (!trim(v).empty()) {
                                    for (auto item : split(v, ',')) out.push_back(to_double("sweep.delta_lambda", item));
                                }
                                c.delta_lambda = std::move(out);
                            }});
        s.push_back(number_setting("interference.mode_overlap", [](auto& c) -> auto& { return c.mode_overlap; }));
        s.push_back(count_setting("phase.count", [](auto& c) -> auto& { return c.phase_count; }));
        s.push_back(count_setting("modes.smoothing", [](auto& c) -> auto& { return c.smoothing_window; }));
        s.push_back(Setting{"timesim.topology",
                            [](const RunConfig& c) {
                                return std::string(c.timesim.interferometer.topology == Topology::blocked_c
                                                       ? "blocked_c"
                                                       : "full_nested");
                            },
                            [](RunConfig& c, std::string_view v) {
                                const auto t = trim(v);
                                if (t == "blocked_c") {
                                    c.timesim.interferometer.topology = Topology::blocked_c;
                                } else if (t == "full_nested") {
                                    c.timesim.interferometer.topology = Topology::full_nested;
                                } else {
                                    bad_value("timesim.topology", v, "expected blocked_c or full_nested");
                                }
                            }});
        s.push_back(number_setting("timesim.inner_phase",
                                   [](auto& c) -> auto& { return c.timesim.interferometer.inner_phase; }));
        s.push_back(number_setting("timesim.outer_phase",
                                   [](auto& c) -> auto& { return c.timesim.interferometer.outer_phase; }));
        s.push_back(number_setting("timesim.mode_overlap",
                                   [](auto& c) -> auto& { return c.timesim.interferometer.mode_overlap; }));
        s.push_back(Setting{"timesim.blocked", [](const RunConfig& c) { return c.timesim.interferometer.blocked; },
                            [](RunConfig& c, std::string_view v) {
                                std::string out;
                                for (char ch : v) {
                                    if (ch == ',' || ch == ' ' || ch == '\t') continue;
                                    if (ch != 'A' && ch != 'B' && ch != 'C') {
                                        bad_value("timesim.blocked", v, "expected a list of paths among A, B, C");
                                    }
                                    if (out.find(ch) == std::string::npos) out += ch;
                                }
                                std::sort(out.begin(), out.end());
                                c.timesim.interferometer.blocked = out;
                            }});
        s.push_back(number_setting("timesim.sample_rate",
                                   [](auto& c) -> auto& { return c.timesim.sampling.sample_rate; }));
        s.push_back(number_setting("timesim.duration",
                                   [](auto& c) -> auto& { return c.timesim.sampling.duration; }));
        s.push_back(count_setting("timesim.counterpart_phases",
                                  [](auto& c) -> auto& { return c.timesim.counterpart_phase_count; }));
        s.push_back(Setting{"output.dir", [](const RunConfig& c) { return c.output_dir; },
                            [](RunConfig& c, std::string_view v) { c.output_dir = std::string(trim(v)); }});
        return s;
    }();
    return settings;
}

const Setting* find_fixed(std::string_view key) {
    for (const auto& s : fixed_settings()) {
        if (s.key == key) return &s;
    }
    return nullptr;
}

MirrorSpec& mirror_slot(RunConfig& c, char label) {
    auto& mirrors = c.timesim.interferometer.mirrors;
    for (auto& m : mirrors) {
        if (m.label == label) return m;
    }
    mirrors.push_back(MirrorSpec{label, default_mirror_frequency(label), 0.0});
    std::sort(mirrors.begin(), mirrors.end(), [](const MirrorSpec& a, const MirrorSpec& b) {
        return kMirrorLabels.find(a.label) < kMirrorLabels.find(b.label);
    });
    for (auto& m : mirrors) {
        if (m.label == label) return m;
    }
    return mirrors.back();
}

// timesim.mirror.<label>.<frequency|tilt>
bool mirror_key(std::string_view key, char& label, bool& is_frequency) {
    if (key.substr(0, kMirrorPrefix.size()) != kMirrorPrefix) return false;
    const auto rest = key.substr(kMirrorPrefix.size());
    if (rest.size() < 3 || rest[1] != '.' || kMirrorLabels.find(rest[0]) == std::string_view::npos) return false;
    label = rest[0];
    const auto field = rest.substr(2);
    if (field == "frequency") {
        is_frequency = true;
        return true;
    }
    if (field == "tilt") {
        is_frequency = false;
        return true;
    }
    return false;
}

}  // namespace

RunConfig::RunConfig() {
    filter1.blocking = kDefaultBlocking;
    filter2.blocking = kDefaultBlocking;
}

void RunConfig::validate() const {
    source.validate();
    filter1.validate();
    filter2.validate();
    (void)grid.build();
    for (double d : delta_lambda) require(std::isfinite(d) && d >= 0.0, "delta_lambda values must be >= 0");
    require(mode_overlap >= 0.0 && mode_overlap <= 1.0, "mode overlap must lie in [0, 1]");
    require(phase_count >= 2 && phase_count % 2 == 0, "phase count must be even so the sweep hits 0 and pi");
    require(smoothing_window >= 1 && smoothing_window % 2 == 1, "smoothing window must be an odd count >= 1");
    timesim.interferometer.validate();
    validate_sampling(timesim.interferometer, timesim.sampling);
    require(timesim.counterpart_phase_count >= 1, "counterpart phase count must be >= 1");
}

void apply_setting(RunConfig& config, std::string_view key, std::string_view value) {
    key = trim(key);
    if (const Setting* s = find_fixed(key)) {
        s->set(config, value);
        return;
    }
    char label = 0;
    bool is_frequency = false;
    if (mirror_key(key, label, is_frequency)) {
        const double v = to_double(key, value);
        MirrorSpec& m = mirror_slot(config, label);
        (is_frequency ? m.frequency : m.tilt) = v;
        return;
    }
    fail(ErrorCode::parse, "unknown setting '" + std::string(key) + "'");
}

std::string get_setting(const RunConfig& config, std::string_view key) {
    key = trim(key);
    if (const Setting* s = find_fixed(key)) return s->get(config);
    char label = 0;
    bool is_frequency = false;
    if (mirror_key(key, label, is_frequency)) {
        for (const auto& m : config.timesim.interferometer.mirrors) {
            if (m.label == label) return format_shortest(is_frequency ? m.frequency : m.tilt);
        }
        fail(ErrorCode::invalid_argument, std::string("mirror ") + label + " is not configured");
    }
    fail(ErrorCode::parse, "unknown setting '" + std::string(key) + "'");
}

std::vector<std::string> setting_keys(const RunConfig& config) {
    std::vector<std::string> keys;
    for (const auto& s : fixed_settings()) keys.push_back(s.key);
    for (const auto& m : config.timesim.interferometer.mirrors) {
        keys.push_back(std::string(kMirrorPrefix) + m.label + ".frequency");
        keys.push_back(std::string(kMirrorPrefix) + m.label + ".tilt");
    }
    return keys;
}

std::string dump_config(const RunConfig& config) {
    std::string out;
    for (const auto& key : setting_keys(config)) out += key + "=" + get_setting(config, key) + "\n";
    return out;
}

RunConfig parse_config(std::string_view text) {
    RunConfig config;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = text.find('\n', start);
        auto line = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
        start = end == std::string_view::npos ? text.size() + 1 : end + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            fail(ErrorCode::parse, "line " + std::to_string(line_no) + ": expected key=value");
        }
        try {
            apply_setting(config, line.substr(0, eq), line.substr(eq + 1));
        } catch (const Error& e) {
            fail(ErrorCode::parse, "line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return config;
}

RunConfig load_config(const std::string& path) {
    const std::string text = read_text_file(path);
    try {
        return parse_config(text);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::parse) fail(ErrorCode::parse, path + ": " + e.what());
        throw;
    }
}

}  // namespace whichpath
