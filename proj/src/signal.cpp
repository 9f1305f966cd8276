#include "edasim/signal.hpp"

#include <cmath>
#include <cstddef>

#include "edasim/errors.hpp"

namespace edasim {

namespace {

// Deterministic Gaussian draws: splitmix64 feeding Box-Muller. Not using
// std::normal_distribution keeps the byte stream identical across standard
// library implementations.
struct GaussianRng {
  uint64_t state;
  bool have_spare = false;
  double spare = 0.0;

  explicit GaussianRng(uint64_t seed) : state(seed) {}

  double uniform01() {
    state += 0x9e3779b97f4a7c15ULL;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return (static_cast<double>(z >> 11) + 0.5) * (1.0 / 9007199254740992.0);
  }

  double normal() {
    if (have_spare) {
      have_spare = false;
      return spare;
    }
    double u1 = uniform01();
    double u2 = uniform01();
    double mag = std::sqrt(-2.0 * std::log(u1));
    spare = mag * std::sin(2.0 * M_PI * u2);
    have_spare = true;
    return mag * std::cos(2.0 * M_PI * u2);
  }
};

}  // namespace

int64_t EdaTrace::duration_ms() const {
  return static_cast<int64_t>(std::llround(duration_s() * 1000.0));
}

double EdaTrace::at_time(double t_s) const {
  if (samples.empty()) throw ConfigError("trace: empty");
  auto idx = static_cast<size_t>(t_s * sample_rate_hz + 1e-9);
  if (idx >= samples.size()) idx = samples.size() - 1;
  return samples[idx];
}

double scr_kernel_peak_time(double rise_s, double decay_s) {
  return std::log(decay_s / rise_s) * rise_s * decay_s / (decay_s - rise_s);
}

double scr_kernel(double t_s, double rise_s, double decay_s) {
  if (t_s <= 0.0) return 0.0;
  double t_peak = scr_kernel_peak_time(rise_s, decay_s);
  double norm = std::exp(-t_peak / decay_s) - std::exp(-t_peak / rise_s);
  return (std::exp(-t_s / decay_s) - std::exp(-t_s / rise_s)) / norm;
}

EdaTrace synthesize_eda(const SynthParams& params) {
  if (!(params.duration_s > 0.0)) throw ConfigError("synth.duration_s: must be > 0");
  if (!(params.sample_rate_hz > 0.0)) throw ConfigError("synth.sample_rate_hz: must be > 0");
  if (!(params.kernel_rise_s > 0.0)) throw ConfigError("synth.kernel_rise_s: must be > 0");
  if (!(params.kernel_decay_s > params.kernel_rise_s))
    throw ConfigError("synth.kernel_decay_s: must exceed kernel_rise_s");
  if (params.noise_sigma_us < 0.0) throw ConfigError("synth.noise_sigma_us: must be >= 0");
  for (const auto& ev : params.scr_events) {
    if (!(ev.amplitude_us > 0.0)) throw ConfigError("synth.scr_events.amplitude_us: must be > 0");
    if (ev.onset_s < 0.0) throw ConfigError("synth.scr_events.onset_s: must be >= 0");
  }

  auto n = static_cast<size_t>(std::llround(params.duration_s * params.sample_rate_hz));
  if (n == 0) throw ConfigError("synth.duration_s: shorter than one sample");

  EdaTrace trace;
  trace.sample_rate_hz = params.sample_rate_hz;
  trace.samples.resize(n);

  GaussianRng rng(params.rng_seed);
  for (size_t i = 0; i < n; i++) {
    double t = static_cast<double>(i) / params.sample_rate_hz;
    double g = params.tonic_level_us + params.tonic_drift_us_per_s * t;
    for (const auto& ev : params.scr_events)
      g += ev.amplitude_us * scr_kernel(t - ev.onset_s, params.kernel_rise_s, params.kernel_decay_s);
    if (params.noise_sigma_us > 0.0) g += params.noise_sigma_us * rng.normal();
    if (!(g > 0.0) || !std::isfinite(g))
      throw ConfigError("synth: parameters drive a sample <= 0 at t=" + std::to_string(t));
    trace.samples[i] = g;
  }
  return trace;
}

double conductance_to_resistance(double g_us) {
  if (!(g_us > 0.0)) throw ConfigError("conductance_us: must be > 0");
  return 1e6 / g_us;
}

double resistance_to_conductance(double r_ohm) {
  if (!(r_ohm > 0.0)) throw ConfigError("resistance_ohm: must be > 0");
  return 1e6 / r_ohm;
}

}  // namespace edasim
