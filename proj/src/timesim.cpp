#include "whichpath/timesim.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>

#include "whichpath/error.hpp"

namespace whichpath {

namespace {

constexpr double kMaxTilt = 0.2;
constexpr double kWholeTolerance = 1e-9;

// FFTW's planner is not reentrant.
std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

bool is_whole(double x) { return std::abs(x - std::round(x)) <= kWholeTolerance * std::max(1.0, std::abs(x)); }

bool path_open(const InterferometerConfig& c, char path) { return c.blocked.find(path) == std::string::npos; }

}  // namespace

void InterferometerConfig::validate() const {
    require(std::isfinite(inner_phase) && std::isfinite(outer_phase), "interferometer phases must be finite");
    require(mode_overlap >= 0.0 && mode_overlap <= 1.0, "mode overlap must lie in [0, 1]");
    const std::string allowed = topology == Topology::blocked_c ? "ABE" : "ABCEF";
    for (std::size_t i = 0; i < mirrors.size(); ++i) {
        const auto& m = mirrors[i];
        require(allowed.find(m.label) != std::string::npos,
                std::string("mirror ") + m.label + " is not part of this topology");
        require(std::isfinite(m.frequency) && m.frequency > 0.0, "mirror frequencies must be positive");
        require(m.tilt >= 0.0 && m.tilt <= kMaxTilt, "mirror tilt must lie in [0, 0.2] waists");
        for (std::size_t j = 0; j < i; ++j) {
            require(mirrors[j].label != m.label, std::string("mirror ") + m.label + " listed twice");
            require(mirrors[j].frequency != m.frequency, "mirror frequencies must be pairwise distinct");
        }
    }
    for (char p : blocked) require(p == 'A' || p == 'B' || p == 'C', "only paths A, B and C can be blocked");
}

double InterferometerConfig::displacement(char label, double t) const {
    for (const auto& m : mirrors) {
        if (m.label == label) return m.tilt * std::sin(2.0 * std::numbers::pi * m.frequency * t);
    }
    return 0.0;
}

InterferometerConfig default_interferometer() {
    InterferometerConfig c;
    c.mirrors = {{'A', 30.0, 0.05}, {'B', 32.0, 0.05}, {'E', 35.0, 0.0}};
    return c;
}

std::vector<PathAmplitude> port_paths(const InterferometerConfig& c, OutputPort port) {
    using cd = std::complex<double>;
    const cd inner = std::polar(1.0, c.inner_phase);
    const cd outer = std::polar(1.0, c.outer_phase);
    std::vector<PathAmplitude> out;
    if (c.topology == Topology::blocked_c) {
        // Only the inner interferometer is lit; amplitudes are relative to its input.
        if (port == OutputPort::detected) {
            out = {{'A', cd(0.5), "EA"}, {'B', -0.5 * inner, "EB"}};
        } else {
            out = {{'A', cd(0.5), "EA"}, {'B', 0.5 * inner, "EB"}};
        }
    } else {
        const double r8 = 1.0 / (2.0 * std::numbers::sqrt2);
        switch (port) {
            case OutputPort::detected:
                out = {{'A', cd(0.25), "EAF"}, {'B', -0.25 * inner, "EBF"}, {'C', 0.5 * outer, "C"}};
                break;
            case OutputPort::other:
                out = {{'A', cd(0.25), "EAF"}, {'B', -0.25 * inner, "EBF"}, {'C', -0.5 * outer, "C"}};
                break;
            case OutputPort::inner_loss:
                out = {{'A', cd(r8), "EA"}, {'B', r8 * inner, "EB"}};
                break;
        }
    }
    std::erase_if(out, [&](const PathAmplitude& p) { return !path_open(c, p.path); });
    if (c.topology == Topology::blocked_c) std::erase_if(out, [](const PathAmplitude& p) { return p.path == 'C'; });
    return out;
}

double beam_mode(double x) {
    static const double norm = std::pow(2.0 / std::numbers::pi, 0.25);
    return norm * std::exp(-x * x);
}

double DetectorField::intensity(double x) const {
    const std::size_t n = amplitudes.size();
    double sum = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
        const double up = beam_mode(x - displacements[p]);
        sum += std::norm(amplitudes[p]) * up * up;
        for (std::size_t q = p + 1; q < n; ++q) {
            const double uq = beam_mode(x - displacements[q]);
            sum += 2.0 * mode_overlap * std::real(amplitudes[p] * std::conj(amplitudes[q])) * up * uq;
        }
    }
    return std::max(0.0, sum);
}

double DetectorField::tail_fraction(const TransverseGrid& grid) const {
    double total = 0.0, tail = 0.0;
    for (std::size_t p = 0; p < amplitudes.size(); ++p) {
        const double w = std::norm(amplitudes[p]);
        const double x = displacements[p];
        total += w;
        tail += w * 0.5 * (std::erfc(std::numbers::sqrt2 * (grid.half_width - x)) +
                           std::erfc(std::numbers::sqrt2 * (grid.half_width + x)));
    }
    return total > 0.0 ? tail / total : 0.0;
}

DetectorField propagate_fields(const InterferometerConfig& config, double t, OutputPort port) {
    DetectorField f{{}, {}, config.mode_overlap};
    for (const auto& p : port_paths(config, port)) {
        double x = 0.0;
        for (char m : p.mirrors) x += config.displacement(m, t);
        f.amplitudes.push_back(p.amplitude);
        f.displacements.push_back(x);
    }
    return f;
}

double quad_cell(const DetectorField& field, Readout readout, const TransverseGrid& grid) {
    require(grid.points >= 3 && grid.points % 2 == 1, "transverse grid needs an odd point count so x = 0 is a node");
    const double h = grid.step();
    const std::size_t mid = grid.points / 2;
    double sum = 0.0;
    for (std::size_t i = 0; i < grid.points; ++i) {
        const bool end = i == 0 || i + 1 == grid.points;
        const double w = end ? 0.5 * h : h;
        const double v = field.intensity(grid.at(i));
        if (readout == Readout::total) {
            sum += w * v;
        } else if (i != mid) {
            // The x = 0 node closes both half-integrals with equal weight and cancels.
            sum += (i > mid ? w : -w) * v;
        }
    }
    return sum;
}

void validate_sampling(const InterferometerConfig& config, const SamplingSpec& s) {
    require(std::isfinite(s.sample_rate) && s.sample_rate > 0.0, "sample rate must be positive");
    require(std::isfinite(s.duration) && s.duration > 0.0, "duration must be positive");
    require(is_whole(s.sample_rate * s.duration), "duration must hold a whole number of samples");
    for (const auto& m : config.mirrors) {
        require(s.sample_rate > 2.0 * m.frequency,
                std::string("sample rate is below the Nyquist rate of mirror ") + m.label);
        require(is_whole(m.frequency * s.duration),
                std::string("duration is not a whole number of periods of mirror ") + m.label);
    }
}

TimeTrace quad_cell_signal(const InterferometerConfig& config, const SamplingSpec& sampling, Readout readout,
                           OutputPort port, const TransverseGrid& grid) {
    config.validate();
    validate_sampling(config, sampling);
    const auto n = static_cast<std::size_t>(std::llround(sampling.sample_rate * sampling.duration));
    TimeTrace trace{sampling.sample_rate, sampling.duration, std::vector<double>(n)};
    for (std::size_t k = 0; k < n; ++k) {
        const DetectorField f = propagate_fields(config, trace.time(k), port);
        if (f.tail_fraction(grid) > kTransverseTailLimit) trace.truncated = true;
        trace.values[k] = quad_cell(f, readout, grid);
    }
    return trace;
}

double PowerSpectrum::at(double frequency) const {
    require(frequencies.size() >= 2, "spectrum has no frequency resolution");
    const double df = frequencies[1] - frequencies[0];
    const double pos = frequency / df;
    require(is_whole(pos) && pos >= 0.0 && pos < static_cast<double>(frequencies.size()),
            "frequency is not a bin of this spectrum");
    return magnitudes[static_cast<std::size_t>(std::llround(pos))];
}

PowerSpectrum power_spectrum(const TimeTrace& trace) {
    const std::size_t n = trace.values.size();
    require(n >= 2, "trace needs at least two samples");
    double mean = 0.0;
    for (double v : trace.values) mean += v;
    mean /= static_cast<double>(n);

    const std::size_t bins = n / 2 + 1;
    double* in = fftw_alloc_real(n);
    fftw_complex* out = fftw_alloc_complex(bins);
    fftw_plan plan;
    {
        std::lock_guard lock(fftw_planner_mutex());
        plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in, out, FFTW_ESTIMATE);
    }
    for (std::size_t k = 0; k < n; ++k) in[k] = trace.values[k] - mean;
    fftw_execute(plan);

    PowerSpectrum s;
    s.frequencies.resize(bins);
    s.magnitudes.resize(bins);
    for (std::size_t k = 0; k < bins; ++k) {
        s.frequencies[k] = static_cast<double>(k) / trace.duration;
        s.magnitudes[k] = std::hypot(out[k][0], out[k][1]) / static_cast<double>(n);
    }
    {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }
    fftw_free(in);
    fftw_free(out);
    return s;
}

double parseval_residual(const TimeTrace& trace, const PowerSpectrum& spectrum) {
    const std::size_t n = trace.values.size();
    double mean = 0.0;
    for (double v : trace.values) mean += v;
    mean /= static_cast<double>(n);
    double mean_square = 0.0;
    for (double v : trace.values) mean_square += (v - mean) * (v - mean);
    mean_square /= static_cast<double>(n);

    double sum = 0.0;
    const std::size_t bins = spectrum.magnitudes.size();
    for (std::size_t k = 0; k < bins; ++k) {
        const bool unpaired = k == 0 || (n % 2 == 0 && k + 1 == bins);
        const double m = spectrum.magnitudes[k];
        sum += (unpaired ? 1.0 : 2.0) * m * m;
    }
    const double diff = std::abs(sum - mean_square);
    if (mean_square == 0.0) return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return diff / mean_square;
}

std::vector<ModePowers> spectral_detection_counterpart(const InterferometerConfig& config,
                                                       const SamplingSpec& sampling,
                                                       const std::vector<double>& phases) {
    config.validate();
    validate_sampling(config, sampling);
    require(config.topology == Topology::blocked_c, "spectral detection counterpart needs the blocked-c topology");

    const double a2 = path_open(config, 'A') ? 0.25 : 0.0;
    const double b2 = path_open(config, 'B') ? 0.25 : 0.0;
    const double ref = a2 > 0.0 ? a2 : b2;

    // Time average of the overlap Gamma = mu exp(-(X_A - X_B)^2 / 2) between the marked modes.
    const auto n = static_cast<std::size_t>(std::llround(sampling.sample_rate * sampling.duration));
    double gamma = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) / sampling.sample_rate;
        const double xa = config.displacement('E', t) + config.displacement('A', t);
        const double xb = config.displacement('E', t) + config.displacement('B', t);
        gamma += config.mode_overlap * std::exp(-0.5 * (xa - xb) * (xa - xb));
    }
    gamma /= static_cast<double>(n);

    const double nan = std::numeric_limits<double>::quiet_NaN();
    auto ratio = [nan](double num, double den) { return den > 0.0 ? num / den : nan; };
    std::vector<ModePowers> out;
    out.reserve(phases.size());
    for (double phi : phases) {
        require(std::isfinite(phi), "phases must be finite");
        const double a = std::sqrt(a2), b = std::sqrt(b2);
        const double common = a * a + b * b - 2.0 * a * b * std::cos(phi);
        ModePowers m{};
        m.phase = phi;
        m.symmetric = gamma * common;
        m.marked_A = a2 * (1.0 - gamma);
        m.marked_B = b2 * (1.0 - gamma);
        m.symmetric_norm = ratio(m.symmetric, 4.0 * ref * gamma);
        m.marked_A_norm = ratio(m.marked_A, 4.0 * ref * (1.0 - gamma));
        m.marked_B_norm = ratio(m.marked_B, 4.0 * ref * (1.0 - gamma));
        out.push_back(m);
    }
    return out;
}

}  // namespace whichpath
