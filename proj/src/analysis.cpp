#include "edasim/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "edasim/errors.hpp"
#include "edasim/signal.hpp"

namespace edasim {

std::vector<double> log_grid(double lo, double hi, int points) {
  if (points < 1 || !(lo > 0.0) || !(hi > lo)) throw ConfigError("grid: need 0 < lo < hi, points >= 1");
  std::vector<double> grid(points);
  if (points == 1) {
    grid[0] = lo;
    return grid;
  }
  for (int i = 0; i < points; i++)
    grid[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1));
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

std::vector<SweepRow> resolution_sweep(const AfeConfig& cfg, const FixedDivider& divider,
                                       const GainLadder& ladder, const Thresholds& thresholds,
                                       const std::vector<double>& grid) {
  cfg.validate();
  ladder.validate(cfg);
  if (!ladder.covers_range(cfg))
    throw ValidationError("ladder: fails the coverage invariant over the measurement range");
  std::vector<SweepRow> rows;
  rows.reserve(grid.size());
  for (double r : grid) {
    SweepRow row;
    row.r_skin_ohm = r;
    row.res_fixed = resolution_at(r, divider, cfg);
    row.vout_fixed_v = transfer_vout(r, divider, cfg).ideal_v;
    int idx = converge(r, 0, ladder, cfg, thresholds);
    row.best_setting_index = idx;
    row.res_adaptive = resolution_at(r, ladder.at(idx), cfg);
    row.vout_adaptive_v = transfer_vout(r, ladder.at(idx), cfg).ideal_v;
    rows.push_back(row);
  }
  return rows;
}

const std::vector<double>& standard_test_resistors() {
  static const std::vector<double> values = {27e3,  47e3,  100e3, 220e3, 330e3, 560e3,
                                             820e3, 1e6,   2.2e6, 3.3e6, 5.1e6, 10e6};
  return values;
}

std::vector<ErrorRow> error_table(const std::vector<double>& resistor_set, const AfeConfig& cfg,
                                  const GainLadder& nominal_ladder, const Thresholds& thresholds,
                                  bool calibrated, double tolerance, uint64_t perturbation_seed) {
  if (resistor_set.empty()) throw ConfigError("error_table: resistor set is empty");
  GainLadder hw = perturb_ladder(nominal_ladder, tolerance, perturbation_seed);
  CalibrationTable measured = calibration_from(hw);

  std::vector<ErrorRow> rows;
  rows.reserve(resistor_set.size());
  for (double r_true : resistor_set) {
    // The board behaves per the true (perturbed) resistors; the firmware
    // inverts with either the measured table or the printed nominals.
    int idx = converge(r_true, 0, hw, cfg, thresholds);
    double v = transfer_vout(r_true, hw.at(idx), cfg).clamped_v;
    int code = quantize(v, cfg);
    double r_hat = reconstruct_resistance(code, nominal_ladder.at(idx), cfg,
                                          calibrated ? &measured : nullptr);
    ErrorRow row;
    row.r_true_ohm = r_true;
    row.r_measured_ohm = r_hat;
    row.abs_error_ohm = std::fabs(r_hat - r_true);
    row.rel_error_percent = 100.0 * row.abs_error_ohm / r_true;
    rows.push_back(row);
  }
  return rows;
}

double max_rel_error_percent(const std::vector<ErrorRow>& rows) {
  double worst = 0.0;
  for (const auto& row : rows) worst = std::max(worst, row.rel_error_percent);
  return worst;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw ConfigError("pearson: series lengths differ");
  if (x.size() < 2) throw ConfigError("pearson: need at least 2 points");
  auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < x.size(); i++) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < x.size(); i++) {
    double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw ZeroVariance("pearson: zero-variance input");
  return sxy / std::sqrt(sxx * syy);
}

std::pair<EdaTrace, EdaTrace> noisy_observer_pair(const EdaTrace& truth, double sigma_us,
                                                  uint64_t seed_a, uint64_t seed_b) {
  SynthParams p;
  p.duration_s = truth.duration_s();
  p.sample_rate_hz = truth.sample_rate_hz;
  p.tonic_level_us = 0.0;
  p.noise_sigma_us = sigma_us;

  auto add_noise = [&](uint64_t seed) {
    // reuse the synthesis noise path on a zero trace, then superpose
    SynthParams q = p;
    q.rng_seed = seed;
    q.tonic_level_us = 1.0;  // keep samples positive for the generator
    EdaTrace noise = synthesize_eda(q);
    EdaTrace out = truth;
    for (size_t i = 0; i < out.samples.size() && i < noise.samples.size(); i++)
      out.samples[i] += noise.samples[i] - 1.0;
    return out;
  };
  return {add_noise(seed_a), add_noise(seed_b)};
}

Fig2Report fig2_report(const EdaTrace& trace, const AcquisitionResult& acq,
                       const GainLadder& ladder, const AfeConfig& cfg) {
  if (acq.records.empty()) throw ConfigError("fig2: empty acquisition");
  Fig2Report report;
  report.base_index = acq.records.front().setting_index;
  const GainSetting& base = ladder.at(report.base_index);

  size_t n = acq.records.size();
  report.t_ms.reserve(n);
  report.conductance_true_us.reserve(n);
  report.conductance_recon_us.reserve(n);
  report.vout_v.reserve(n);
  report.gain_ratio_series.reserve(n);

  for (size_t i = 0; i < n; i++) {
    const auto& rec = acq.records[i];
    report.t_ms.push_back(rec.t_ms);
    report.conductance_true_us.push_back(trace.at_time(static_cast<double>(rec.t_ms) / 1000.0));
    report.conductance_recon_us.push_back(rec.reconstructed_conductance_us);
    report.vout_v.push_back((rec.adc_code + 0.5) * cfg.v_lsb());
    report.gain_ratio_series.push_back(gain_ratio(ladder.at(rec.setting_index), base));

    if (i > 0 && rec.setting_index != acq.records[i - 1].setting_index) {
      GainTransition tr;
      tr.cycle = i;
      tr.from_index = acq.records[i - 1].setting_index;
      tr.to_index = rec.setting_index;
      tr.ratio_before = report.gain_ratio_series[i - 1];
      tr.ratio_after = report.gain_ratio_series[i];
      tr.vout_before_v = report.vout_v[i - 1];
      tr.vout_after_v = report.vout_v[i];
      report.transitions.push_back(tr);
    }
  }
  return report;
}

}  // namespace edasim
