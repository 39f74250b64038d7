#pragma once

// Quad-cell readout of the D port, wiggled-mirror time series and the
// frequency-tagged peak analysis.

#include "nmzi/network.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace nmzi {

struct WiggleEntry {
  PathLabel mirror;
  double frequency = 0.0;  // Hz
  double epsilon = 0.0;    // peak tilt amplitude
  Axis axis = Axis::X;
  double phase = 0.0;  // radians
};

struct WigglePlan {
  std::vector<WiggleEntry> entries;
  double duration = 1.0;        // s
  double sample_rate = 1000.0;  // Hz
  double noise_sigma = 0.0;
  std::uint64_t rng_seed = 0;
  /// Quad-cell difference axis. When unset, all entries must share one axis.
  std::optional<Axis> detector_axis;

  /// Mirrors A, B, C, E, F at 23, 29, 31, 37, 41 Hz; 1 s at 1 kHz, noise off.
  static WigglePlan danan_default(Axis axis = Axis::X, double epsilon = 0.01);

  /// Throws std::invalid_argument on non-bin-aligned, duplicate or
  /// super-Nyquist frequencies, duplicate mirrors or an ambiguous readout axis.
  void validate(double epsilon_limit = kDefaultEpsilonLimit) const;

  std::size_t sample_count() const;
  Axis readout_axis() const;
  const WiggleEntry* find(PathLabel mirror) const;
};

struct SignalTrace {
  std::vector<double> samples;
  double sample_rate = 0.0;
};

/// One-sided amplitude spectrum; bin k sits at k * bin_width Hz.
struct Spectrum {
  double bin_width = 0.0;
  std::vector<double> magnitudes;

  double frequency(std::size_t bin) const { return static_cast<double>(bin) * bin_width; }
};

struct PeakEntry {
  PathLabel mirror;
  double frequency = 0.0;
  double magnitude = 0.0;
  bool present = false;
};

struct PeakReport {
  std::vector<PeakEntry> peaks;
  double floor = 0.0;      // median magnitude over bins not in the plan
  double threshold = 0.0;  // magnitude above which a peak counts as present

  const PeakEntry& at(PathLabel mirror) const;
};

/// Integral of sign(x) psi0(x) psi1(x) over the line for the first two
/// Hermite-Gauss functions: sqrt(2/pi).
double quad_cell_overlap();

/// Half-plane intensity difference along `axis` for the D-port mode amplitudes
/// (chi0, chiPerpX, chiPerpY), unnormalised.
double quad_signal(const ModeAmplitudes& at_d, Axis axis);

/// Quasi-static simulation: each sample freezes the wiggled mirror angles,
/// propagates to T4 and records the quad-cell signal plus seeded Gaussian
/// noise. Samples are independent, so `threads` > 1 splits them across
/// workers with bit-identical output.
SignalTrace simulate_trace(const NetworkConfig& config, const WigglePlan& plan, unsigned threads = 1);

/// Rectangular-window DFT magnitudes, scaled so a bin-aligned A sin(2 pi f t)
/// shows magnitude A. Throws std::invalid_argument on an empty trace.
Spectrum power_spectrum(const SignalTrace& trace);

/// Default dynamic range for presence: peaks must exceed 10x the median floor
/// and this fraction of the strongest plan peak.
inline constexpr double kPresenceDynamicRange = 1e-3;

PeakReport peak_report(const Spectrum& spectrum, const WigglePlan& plan,
                       double dynamic_range = kPresenceDynamicRange);

}  // namespace nmzi
