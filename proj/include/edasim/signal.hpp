#pragma once

#include <cstdint>
#include <vector>

namespace edasim {

// Sampled skin-conductance time series in microsiemens.
struct EdaTrace {
  double sample_rate_hz = 8.0;
  std::vector<double> samples;  // µS, every sample finite and > 0

  double duration_s() const { return static_cast<double>(samples.size()) / sample_rate_hz; }
  int64_t duration_ms() const;
  // Zero-order hold value at time t (seconds).
  double at_time(double t_s) const;
};

// One phasic skin-conductance response.
struct ScrEvent {
  double onset_s = 0.0;
  double amplitude_us = 1.0;  // peak height above the tonic level
};

struct SynthParams {
  double duration_s = 600.0;
  double tonic_level_us = 2.0;
  double tonic_drift_us_per_s = 0.0;
  std::vector<ScrEvent> scr_events;
  double kernel_rise_s = 0.75;
  double kernel_decay_s = 2.0;
  double noise_sigma_us = 0.0;
  uint64_t rng_seed = 12345;
  double sample_rate_hz = 8.0;
};

// Peak-normalized biexponential SCR kernel: h(t) = c*(exp(-t/decay) - exp(-t/rise)),
// scaled so max h = 1 at t* = ln(decay/rise)*rise*decay/(decay-rise).
double scr_kernel(double t_s, double rise_s, double decay_s);
double scr_kernel_peak_time(double rise_s, double decay_s);

// Deterministic synthesis: tonic + drift, superposed SCR bumps, optional
// seeded Gaussian noise. Throws ConfigError on invalid parameters or if any
// generated sample would be <= 0.
EdaTrace synthesize_eda(const SynthParams& params);

// Conductance in µS <-> resistance in Ω. Both reject non-positive input.
double conductance_to_resistance(double g_us);
double resistance_to_conductance(double r_ohm);

}  // namespace edasim
