#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace whichpath {

// Transverse power allowed outside the quad-cell window before a trace is flagged.
inline constexpr double kTransverseTailLimit = 1e-9;

// Transverse coordinates are in units of the beam waist w.
struct MirrorSpec {
    char label;        // A, B, C, E or F
    double frequency;  // Hz
    double tilt;       // peak transverse displacement, <= 0.2
};

enum class Topology { full_nested, blocked_c };

enum class OutputPort {
    detected,    // the port read by the quad cell
    other,       // second output of the final splitter
    inner_loss,  // inner interferometer port not sent on toward F
};

struct InterferometerConfig {
    Topology topology = Topology::blocked_c;
    double inner_phase = 0.0;  // phi; 0 sends A and B destructively into the detected port
    double outer_phase = 0.0;  // theta, path C relative to the inner paths
    std::vector<MirrorSpec> mirrors;
    double mode_overlap = 1.0;
    std::string blocked;  // extra blocked paths among A, B, C

    void validate() const;
    double displacement(char label, double t) const;
};

InterferometerConfig default_interferometer();

struct PathAmplitude {
    char path;
    std::complex<double> amplitude;
    std::string mirrors;
};

// Amplitude factors and mirror sequences reaching one output port.
std::vector<PathAmplitude> port_paths(const InterferometerConfig& config, OutputPort port);

struct TransverseGrid {
    double half_width = 6.0;
    std::size_t points = 601;

    double step() const { return 2.0 * half_width / static_cast<double>(points - 1); }
    double at(std::size_t i) const { return -half_width + static_cast<double>(i) * step(); }
};

// Unit-power Gaussian u0(x) = (2/pi)^(1/4) exp(-x^2).
double beam_mode(double x);

// Snapshot of the coherent field at one output port and time.
struct DetectorField {
    std::vector<std::complex<double>> amplitudes;
    std::vector<double> displacements;
    double mode_overlap;

    double intensity(double x) const;
    // Power outside the transverse window, as a fraction of the total.
    double tail_fraction(const TransverseGrid& grid) const;
};

DetectorField propagate_fields(const InterferometerConfig& config, double t,
                               OutputPort port = OutputPort::detected);

enum class Readout { difference, total };

double quad_cell(const DetectorField& field, Readout readout, const TransverseGrid& grid = {});

struct TimeTrace {
    double sample_rate;
    double duration;
    std::vector<double> values;
    bool truncated = false;

    double time(std::size_t k) const { return static_cast<double>(k) / sample_rate; }
};

struct SamplingSpec {
    double sample_rate = 1000.0;
    double duration = 1.0;
};

// Checks Nyquist, a whole number of samples and whole mirror periods in the window.
void validate_sampling(const InterferometerConfig& config, const SamplingSpec& sampling);

TimeTrace quad_cell_signal(const InterferometerConfig& config, const SamplingSpec& sampling,
                           Readout readout, OutputPort port = OutputPort::detected,
                           const TransverseGrid& grid = {});

struct PowerSpectrum {
    std::vector<double> frequencies;
    std::vector<double> magnitudes;  // |X_k| / N, k = 0..N/2

    double at(double frequency) const;
};

// DFT magnitudes of the mean-removed trace; a sinusoid of amplitude a shows a / 2.
PowerSpectrum power_spectrum(const TimeTrace& trace);

// |one-sided sum of magnitude^2 (interior bins doubled) - mean square of the
// mean-removed trace| relative to the mean square.
double parseval_residual(const TimeTrace& trace, const PowerSpectrum& spectrum);

struct ModePowers {
    double phase;
    double symmetric;  // indistinguishable part, follows cos(phi)
    double marked_A;
    double marked_B;
    // Each divided by four times the single-arm power in the same component.
    double symmetric_norm;
    double marked_A_norm;
    double marked_B_norm;
};

// Splits the blocked-c detector light into the mode common to both arms and the
// two orthogonal marked remainders, time-averaged over the sampling window.
std::vector<ModePowers> spectral_detection_counterpart(const InterferometerConfig& config,
                                                       const SamplingSpec& sampling,
                                                       const std::vector<double>& phases);

}  // namespace whichpath
