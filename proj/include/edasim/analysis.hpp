#pragma once

#include <cstdint>
#include <vector>

#include "edasim/engine.hpp"

namespace edasim {

struct SweepRow {
  double r_skin_ohm = 0.0;
  double res_fixed = 0.0;     // Ω/bit, single-reference divider
  double res_adaptive = 0.0;  // Ω/bit at the controller's steady setting
  int best_setting_index = 0;
  double vout_fixed_v = 0.0;
  double vout_adaptive_v = 0.0;
};

std::vector<double> log_grid(double lo, double hi, int points);

// Resolution comparison across the measurement range. The adaptive column
// uses the setting the controller converges to from the top of the ladder at
// each point; rows where best_setting_index changes mark the discontinuous
// segments of the adaptive curve.
std::vector<SweepRow> resolution_sweep(const AfeConfig& cfg, const FixedDivider& divider,
                                       const GainLadder& ladder, const Thresholds& thresholds,
                                       const std::vector<double>& grid);

struct ErrorRow {
  double r_true_ohm = 0.0;
  double r_measured_ohm = 0.0;
  double abs_error_ohm = 0.0;
  double rel_error_percent = 0.0;
};

// The twelve metal-film values used for the on-board accuracy test.
const std::vector<double>& standard_test_resistors();

// Full quantize -> reconstruct path per resistor at the controller's steady
// setting. The board is the nominal ladder perturbed by ±tolerance (seeded);
// pass calibrated=true to reconstruct with the true (measured) values,
// false to use the printed nominals.
std::vector<ErrorRow> error_table(const std::vector<double>& resistor_set, const AfeConfig& cfg,
                                  const GainLadder& nominal_ladder, const Thresholds& thresholds,
                                  bool calibrated, double tolerance, uint64_t perturbation_seed);

double max_rel_error_percent(const std::vector<ErrorRow>& rows);

// Standard sample Pearson r. Throws ZeroVariance when either series is
// constant; requires equal lengths >= 2.
double pearson(const std::vector<double>& x, const std::vector<double>& y);

// Two independent noisy observations of the same trace, for exercising the
// correlation pipeline on imperfectly matched series.
std::pair<EdaTrace, EdaTrace> noisy_observer_pair(const EdaTrace& truth, double sigma_us,
                                                  uint64_t seed_a, uint64_t seed_b);

struct GainTransition {
  size_t cycle = 0;
  int from_index = 0;
  int to_index = 0;
  double ratio_before = 1.0;
  double ratio_after = 1.0;
  double vout_before_v = 0.0;  // code-center voltage at the saturated cycle
  double vout_after_v = 0.0;   // code-center voltage one cycle later
};

// Aligned series for the compensation-mechanism illustration: measured
// output voltage, gain ratio relative to the first steady setting, and the
// reconstructed conductance.
struct Fig2Report {
  std::vector<int64_t> t_ms;
  std::vector<double> conductance_true_us;
  std::vector<double> conductance_recon_us;
  std::vector<double> vout_v;       // code-center measured voltage
  std::vector<double> gain_ratio_series;
  int base_index = 0;
  std::vector<GainTransition> transitions;
};

Fig2Report fig2_report(const EdaTrace& trace, const AcquisitionResult& acq,
                       const GainLadder& ladder, const AfeConfig& cfg);

}  // namespace edasim
