#include "edasim/defaults.hpp"

#include "edasim/errors.hpp"

namespace edasim {

FixedDivider fitted_fixed_divider() { return FixedDivider{80400.0}; }

GainLadder default_gain_ladder() {
  // r2 values are exact integers by construction: amp factors are powers of
  // 1.8 and r_g is 100 kΩ, so r2 = (1.8^p - 1) * 100k.
  struct Row {
    double r1, r2;
  };
  static const Row rows[] = {
      {330e3, 1789568.0},  // amp 1.8^5 = 18.89568
      {330e3, 949760.0},   // amp 1.8^4 = 10.4976
      {330e3, 483200.0},   // amp 1.8^3 = 5.832
      {160e3, 224000.0},   // amp 1.8^2 = 3.24
      {160e3, 80000.0},    // amp 1.8
      {100e3, 80000.0},
      {27e3, 80000.0},
  };
  GainLadder ladder;
  ladder.r_g_ohm = 100e3;
  int index = 0;
  for (const auto& row : rows) {
    GainSetting s;
    s.index = index++;
    s.r1_ohm = row.r1;
    s.r2_ohm = row.r2;
    s.r_g_ohm = ladder.r_g_ohm;
    s.amp_factor = amp_from_r2(row.r2, ladder.r_g_ohm);
    ladder.settings.push_back(s);
  }
  return ladder;
}

PowerConfig fitted_power_config() {
  PowerConfig cfg;
  // Baselines pin the split: always-on 1.97 = i_mcu + i_afe, duty-cycled
  // 0.670 = i_mcu + i_afe * (5/125).
  cfg.i_afe_active_ma = 1.3 / 0.96;
  cfg.i_mcu_base_ma = 1.97 - cfg.i_afe_active_ma;
  // The two published average-minus-baseline gaps disagree (157 µA vs
  // 51 µA for the same transmission schedule); the per-event charge splits
  // the difference so both averages sit 3.72% from their targets.
  double d_ma = (0.157 * 0.721 + 0.051 * 2.127) / (0.721 + 2.127);
  cfg.q_ble_event_uc = d_ma * 125.0;  // one event every 125 ms
  cfg.t_ble_event_ms = 2.0;
  // Chosen so 8 Hz converter toggling lands above 3.6 mA average.
  cfg.q_dcdc_inrush_uc = 450.0;
  cfg.supply_v = 3.7;
  return cfg;
}

SynthParams default_synth_params() {
  SynthParams p;
  p.duration_s = 600.0;
  p.tonic_level_us = 2.0;
  p.tonic_drift_us_per_s = 0.0;
  p.scr_events = {{60.0, 1.0}, {180.0, 2.0}, {420.0, 0.5}};
  p.noise_sigma_us = 0.0;
  p.rng_seed = 12345;
  p.sample_rate_hz = 8.0;
  return p;
}

SynthParams fig2_ramp_params(bool descending) {
  SynthParams p;
  p.duration_s = 600.0;
  p.tonic_level_us = descending ? 6.0 : 1.0;
  p.tonic_drift_us_per_s = (descending ? -5.0 : 5.0) / p.duration_s;
  p.noise_sigma_us = 0.0;
  p.sample_rate_hz = 8.0;
  return p;
}

void RunConfig::validate() const {
  afe.validate();
  engine.validate();
  power.validate();
  ladder.validate(afe);
  thresholds.validate_hysteresis(ladder, afe);
  if (!(divider.r_ref_ohm > 0.0)) throw ConfigError("divider.r_ref_ohm: must be > 0");
  if (channel.drop_probability < 0.0 || channel.drop_probability > 1.0)
    throw ConfigError("channel.drop_probability: must be in [0, 1]");
  if (!ladder.covers_range(afe))
    throw ValidationError("ladder: fails the coverage invariant over the measurement range");
}

RunConfig default_run_config() {
  RunConfig cfg;
  cfg.synth = default_synth_params();
  cfg.afe = AfeConfig{};
  cfg.divider = fitted_fixed_divider();
  cfg.ladder = default_gain_ladder();
  cfg.thresholds = Thresholds::defaults_for(cfg.afe);
  cfg.engine = EngineConfig{};
  cfg.power = fitted_power_config();
  cfg.channel = ChannelModel{};
  return cfg;
}

}  // namespace edasim
