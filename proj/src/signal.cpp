#include "nmzi/signal.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <random>
#include <set>
#include <stdexcept>
#include <thread>

namespace nmzi {

namespace {

constexpr double kAlignTol = 1e-9;

bool near_integer(double x) { return std::abs(x - std::round(x)) <= kAlignTol * std::max(1.0, std::abs(x)); }

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Noise for sample `index` depends only on (seed, index).
double sample_noise(std::uint64_t seed, std::size_t index, double sigma) {
  std::mt19937_64 gen(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(index))));
  std::normal_distribution<double> dist(0.0, sigma);
  return dist(gen);
}

// FFTW's planner is not reentrant.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

WigglePlan WigglePlan::danan_default(Axis axis, double epsilon) {
  WigglePlan plan;
  plan.entries = {
      {PathLabel::A, 23.0, epsilon, axis, 0.0}, {PathLabel::B, 29.0, epsilon, axis, 0.0},
      {PathLabel::C, 31.0, epsilon, axis, 0.0}, {PathLabel::E, 37.0, epsilon, axis, 0.0},
      {PathLabel::F, 41.0, epsilon, axis, 0.0},
  };
  return plan;
}

void WigglePlan::validate(double epsilon_limit) const {
  if (!(duration > 0.0) || !std::isfinite(duration)) throw std::invalid_argument("duration must be positive");
  if (!(sample_rate > 0.0) || !std::isfinite(sample_rate)) {
    throw std::invalid_argument("sample_rate must be positive");
  }
  if (!near_integer(duration * sample_rate) || std::round(duration * sample_rate) < 1.0) {
    throw std::invalid_argument("duration * sample_rate must be a positive whole number of samples");
  }
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
    throw std::invalid_argument("noise_sigma must be >= 0");
  }
  std::set<PathLabel> mirrors;
  std::set<long long> bins;
  for (const WiggleEntry& e : entries) {
    validate_tilt({e.mirror, e.epsilon, e.axis}, epsilon_limit);
    if (!mirrors.insert(e.mirror).second) {
      throw std::invalid_argument("mirror " + std::string(to_string(e.mirror)) + " wiggled twice");
    }
    if (!(e.frequency > 0.0) || !std::isfinite(e.frequency)) {
      throw std::invalid_argument("wiggle frequency must be positive");
    }
    if (!near_integer(e.frequency * duration)) {
      throw std::invalid_argument("wiggle frequency " + std::to_string(e.frequency) +
                                  " Hz is not a multiple of 1/duration");
    }
    if (e.frequency >= sample_rate / 2.0) {
      throw std::invalid_argument("wiggle frequency " + std::to_string(e.frequency) +
                                  " Hz is at or above Nyquist");
    }
    if (!bins.insert(std::llround(e.frequency * duration)).second) {
      throw std::invalid_argument("wiggle frequencies must be distinct");
    }
    if (!std::isfinite(e.phase)) throw std::invalid_argument("wiggle phase must be finite");
  }
  if (!detector_axis) {
    for (const WiggleEntry& e : entries) {
      if (e.axis != entries.front().axis) {
        throw std::invalid_argument("entries mix wiggle axes; set detector_axis");
      }
    }
  }
}

std::size_t WigglePlan::sample_count() const {
  return static_cast<std::size_t>(std::llround(duration * sample_rate));
}

Axis WigglePlan::readout_axis() const {
  if (detector_axis) return *detector_axis;
  return entries.empty() ? Axis::X : entries.front().axis;
}

const WiggleEntry* WigglePlan::find(PathLabel mirror) const {
  for (const WiggleEntry& e : entries) {
    if (e.mirror == mirror) return &e;
  }
  return nullptr;
}

const PeakEntry& PeakReport::at(PathLabel mirror) const {
  for (const PeakEntry& p : peaks) {
    if (p.mirror == mirror) return p;
  }
  throw std::out_of_range("no peak for mirror " + std::string(to_string(mirror)));
}

double quad_cell_overlap() { return std::sqrt(2.0 / std::numbers::pi); }

double quad_signal(const ModeAmplitudes& at_d, Axis axis) {
  const cplx perp = at_d[static_cast<int>(perp_mode(axis))];
  return 2.0 * quad_cell_overlap() * (std::conj(at_d[0]) * perp).real();
}

SignalTrace simulate_trace(const NetworkConfig& config, const WigglePlan& plan, unsigned threads) {
  config.validate();
  plan.validate(config.epsilon_limit);
  for (const WiggleEntry& e : plan.entries) {
    for (const TiltSetting& t : config.tilts) {
      if (t.mirror == e.mirror) {
        throw std::invalid_argument("mirror " + std::string(to_string(e.mirror)) +
                                    " has both a static tilt and a wiggle");
      }
    }
  }

  const std::size_t n = plan.sample_count();
  const Axis readout = plan.readout_axis();
  SignalTrace trace{std::vector<double>(n, 0.0), plan.sample_rate};

  auto fill = [&](std::size_t begin, std::size_t end) {
    NetworkConfig sample_config = config;
    const std::size_t static_tilts = config.tilts.size();
    for (std::size_t i = begin; i < end; ++i) {
      const double t = static_cast<double>(i) / plan.sample_rate;
      sample_config.tilts.resize(static_tilts);
      for (const WiggleEntry& e : plan.entries) {
        const double eps = e.epsilon * std::sin(2.0 * std::numbers::pi * e.frequency * t + e.phase);
        sample_config.tilts.push_back({e.mirror, eps, e.axis});
      }
      const State out = Network::build(sample_config).forward(Stage::T4);
      double value = quad_signal(out.modes_on(PathLabel::D), readout);
      if (plan.noise_sigma > 0.0) value += sample_noise(plan.rng_seed, i, plan.noise_sigma);
      trace.samples[i] = value;
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (workers == 1) {
    fill(0, n);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(n, begin + chunk);
      if (begin < end) pool.emplace_back(fill, begin, end);
    }
  }
  return trace;
}

Spectrum power_spectrum(const SignalTrace& trace) {
  const std::size_t n = trace.samples.size();
  if (n == 0) throw std::invalid_argument("power spectrum of an empty trace");
  if (!(trace.sample_rate > 0.0)) throw std::invalid_argument("trace sample rate must be positive");

  const std::size_t bins = n / 2 + 1;
  std::vector<double> in(trace.samples);
  fftw_complex* out = fftw_alloc_complex(bins);
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(), out, FFTW_ESTIMATE);
  }
  fftw_execute(plan);

  Spectrum s;
  s.bin_width = trace.sample_rate / static_cast<double>(n);
  s.magnitudes.resize(bins);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t k = 0; k < bins; ++k) {
    const double mag = std::hypot(out[k][0], out[k][1]) * scale;
    const bool unpaired = k == 0 || (n % 2 == 0 && k == n / 2);
    s.magnitudes[k] = unpaired ? mag : 2.0 * mag;
  }

  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(out);
  return s;
}

PeakReport peak_report(const Spectrum& spectrum, const WigglePlan& plan, double dynamic_range) {
  std::vector<bool> is_plan_bin(spectrum.magnitudes.size(), false);
  PeakReport report;
  for (const WiggleEntry& e : plan.entries) {
    const long long bin = std::llround(e.frequency / spectrum.bin_width);
    if (bin < 0 || static_cast<std::size_t>(bin) >= spectrum.magnitudes.size()) {
      throw std::invalid_argument("wiggle frequency outside the spectrum range");
    }
    is_plan_bin[bin] = true;
    report.peaks.push_back({e.mirror, e.frequency, spectrum.magnitudes[bin], false});
  }

  std::vector<double> off;
  for (std::size_t k = 0; k < spectrum.magnitudes.size(); ++k) {
    if (!is_plan_bin[k]) off.push_back(spectrum.magnitudes[k]);
  }
  if (!off.empty()) {
    const auto mid = off.begin() + static_cast<std::ptrdiff_t>(off.size() / 2);
    std::nth_element(off.begin(), mid, off.end());
    report.floor = *mid;
    if (off.size() % 2 == 0) {
      report.floor = 0.5 * (report.floor + *std::max_element(off.begin(), mid));
    }
  }

  double strongest = 0.0;
  for (const PeakEntry& p : report.peaks) strongest = std::max(strongest, p.magnitude);
  report.threshold = std::max(10.0 * report.floor, dynamic_range * strongest);
  for (PeakEntry& p : report.peaks) p.present = p.magnitude > report.threshold;
  return report;
}

}  // namespace nmzi
