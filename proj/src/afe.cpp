#include "edasim/afe.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "edasim/errors.hpp"

namespace edasim {

void AfeConfig::validate() const {
  if (!(v_exc_v > 0.0)) throw ConfigError("afe.v_exc_v: must be > 0");
  if (!(v_rail_v > 0.0)) throw ConfigError("afe.v_rail_v: must be > 0");
  if (adc_bits < 8 || adc_bits > 16) throw ConfigError("afe.adc_bits: must be in [8, 16]");
  if (!(r_min_ohm > 0.0) || !(r_max_ohm > r_min_ohm))
    throw ConfigError("afe.r_min_ohm/r_max_ohm: need 0 < r_min < r_max");
}

double amp_from_r2(double r2_ohm, double r_g_ohm) {
  if (r2_ohm < 0.0) throw ConfigError("setting.r2_ohm: must be >= 0");
  if (!(r_g_ohm > 0.0)) throw ConfigError("ladder.r_g_ohm: must be > 0");
  return 1.0 + r2_ohm / r_g_ohm;
}

const GainSetting& GainLadder::at(int index) const {
  if (index < 0 || static_cast<size_t>(index) >= settings.size())
    throw ConfigError("ladder: setting index " + std::to_string(index) + " out of range");
  return settings[static_cast<size_t>(index)];
}

void GainLadder::validate(const AfeConfig& cfg) const {
  if (settings.size() < 2) throw ValidationError("ladder: needs at least 2 settings");
  double r_mid = std::sqrt(cfg.r_min_ohm * cfg.r_max_ohm);
  double prev_v = 0.0;
  for (size_t i = 0; i < settings.size(); i++) {
    const auto& s = settings[i];
    if (s.index != static_cast<int>(i))
      throw ValidationError("ladder: indices must be contiguous from 0");
    if (!(s.r1_ohm > 0.0)) throw ValidationError("ladder: r1_ohm must be > 0");
    if (s.r2_ohm < 0.0) throw ValidationError("ladder: r2_ohm must be >= 0");
    if (!(s.amp_factor > 0.0)) throw ValidationError("ladder: amp_factor must be > 0");
    double v = transfer_vout(r_mid, s, cfg).ideal_v;
    if (i > 0 && v >= prev_v)
      throw ValidationError("ladder: settings must be sorted by descending Vout at mid-range");
    prev_v = v;
  }
}

bool GainLadder::covers_range(const AfeConfig& cfg, int grid_points) const {
  double lo = 0.05 * cfg.v_rail_v;
  double hi = 0.98 * cfg.v_rail_v;
  for (int j = 0; j <= grid_points; j++) {
    double r = cfg.r_min_ohm *
               std::pow(cfg.r_max_ohm / cfg.r_min_ohm, static_cast<double>(j) / grid_points);
    bool ok = false;
    for (const auto& s : settings) {
      double v = transfer_vout(r, s, cfg).ideal_v;
      if (v >= lo && v <= hi) {
        ok = true;
        break;
      }
    }
    if (!ok) return false;
  }
  return true;
}

void CalibrationTable::validate(const GainLadder& nominal) const {
  for (const auto& [idx, entry] : entries) {
    const auto& s = nominal.at(idx);
    if (std::fabs(entry.r1_ohm - s.r1_ohm) > 0.05 * s.r1_ohm ||
        std::fabs(entry.r2_ohm - s.r2_ohm) > 0.05 * std::max(s.r2_ohm, 1.0))
      throw ValidationError("calibration: measured value for setting " + std::to_string(idx) +
                            " deviates more than 5% from nominal");
  }
}

static VoutPair divider_vout(double r_skin, double r1, double gain, const AfeConfig& cfg) {
  if (!(r_skin > 0.0)) throw ConfigError("r_skin_ohm: must be > 0");
  double ideal = cfg.v_exc_v * r1 / (r_skin + r1) * gain;
  return {ideal, std::min(ideal, cfg.v_rail_v)};
}

VoutPair transfer_vout(double r_skin_ohm, const GainSetting& setting, const AfeConfig& cfg) {
  return divider_vout(r_skin_ohm, setting.r1_ohm, setting.amp_factor, cfg);
}

VoutPair transfer_vout(double r_skin_ohm, const FixedDivider& divider, const AfeConfig& cfg) {
  return divider_vout(r_skin_ohm, divider.r_ref_ohm, 1.0, cfg);
}

int quantize(double v, const AfeConfig& cfg) {
  if (v < 0.0) throw ConfigError("quantize: negative voltage");
  double raw = std::floor(v / cfg.v_rail_v * cfg.full_scale_codes());
  if (raw >= cfg.max_code()) return cfg.max_code();
  return static_cast<int>(raw);
}

static double divider_resolution(double r_skin, double r1, double gain, const AfeConfig& cfg) {
  double ideal = cfg.v_exc_v * r1 / (r_skin + r1) * gain;
  if (ideal >= cfg.v_rail_v)
    throw SaturatedOperatingPoint("resolution_at: ideal Vout " + std::to_string(ideal) +
                                  " V is at or above the rail");
  // V_LSB / |dV/dR| with V = v_exc*gain*r1/(r+r1)
  return cfg.v_lsb() * (r_skin + r1) * (r_skin + r1) / (cfg.v_exc_v * r1 * gain);
}

double resolution_at(double r_skin_ohm, const GainSetting& setting, const AfeConfig& cfg) {
  if (!(r_skin_ohm > 0.0)) throw ConfigError("r_skin_ohm: must be > 0");
  return divider_resolution(r_skin_ohm, setting.r1_ohm, setting.amp_factor, cfg);
}

double resolution_at(double r_skin_ohm, const FixedDivider& divider, const AfeConfig& cfg) {
  if (!(r_skin_ohm > 0.0)) throw ConfigError("r_skin_ohm: must be > 0");
  return divider_resolution(r_skin_ohm, divider.r_ref_ohm, 1.0, cfg);
}

static double invert_divider(double v, double r1, double gain, const AfeConfig& cfg) {
  if (!(v > 0.0)) throw ConfigError("invert_transfer: voltage must be > 0");
  // v = v_exc*gain*r1/(r+r1)  =>  r = r1*(v_exc*gain/v - 1)
  return r1 * (cfg.v_exc_v * gain / v - 1.0);
}

double invert_transfer(double v, const GainSetting& setting, const AfeConfig& cfg) {
  return invert_divider(v, setting.r1_ohm, setting.amp_factor, cfg);
}

double invert_transfer(double v, const FixedDivider& divider, const AfeConfig& cfg) {
  return invert_divider(v, divider.r_ref_ohm, 1.0, cfg);
}

double rail_crossing_resistance(const GainSetting& setting, const AfeConfig& cfg) {
  return invert_divider(cfg.v_rail_v, setting.r1_ohm, setting.amp_factor, cfg);
}

double reconstruct_resistance(int code, const GainSetting& setting, const AfeConfig& cfg,
                              const CalibrationTable* calib) {
  if (code <= 0 || code >= cfg.max_code())
    throw SaturatedCode("reconstruct: code " + std::to_string(code) + " is at an ADC extreme");
  double r1 = setting.r1_ohm;
  double gain = setting.amp_factor;
  if (calib) {
    auto it = calib->entries.find(setting.index);
    if (it != calib->entries.end()) {
      r1 = it->second.r1_ohm;
      gain = amp_from_r2(it->second.r2_ohm, setting.r_g_ohm);
    }
  }
  double v_center = (code + 0.5) * cfg.v_lsb();
  return invert_divider(v_center, r1, gain, cfg);
}

double reconstruct_resistance(int code, const FixedDivider& divider, const AfeConfig& cfg,
                              const CalibrationTable* calib) {
  if (code <= 0 || code >= cfg.max_code())
    throw SaturatedCode("reconstruct: code " + std::to_string(code) + " is at an ADC extreme");
  double r_ref = divider.r_ref_ohm;
  if (calib && calib->r_ref_ohm) r_ref = *calib->r_ref_ohm;
  double v_center = (code + 0.5) * cfg.v_lsb();
  return invert_divider(v_center, r_ref, 1.0, cfg);
}

GainLadder perturb_ladder(const GainLadder& nominal, double tolerance, uint64_t seed) {
  // splitmix64-driven uniform draws in [-tolerance, +tolerance]
  uint64_t state = seed;
  auto uniform = [&state]() {
    state += 0x9e3779b97f4a7c15ULL;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return (static_cast<double>(z >> 11) + 0.5) * (1.0 / 9007199254740992.0);
  };
  GainLadder out = nominal;
  for (auto& s : out.settings) {
    double e1 = (2.0 * uniform() - 1.0) * tolerance;
    double e2 = (2.0 * uniform() - 1.0) * tolerance;
    s.r1_ohm *= 1.0 + e1;
    s.r2_ohm *= 1.0 + e2;
    s.amp_factor = amp_from_r2(s.r2_ohm, s.r_g_ohm);
  }
  return out;
}

CalibrationTable calibration_from(const GainLadder& true_ladder) {
  CalibrationTable table;
  for (const auto& s : true_ladder.settings)
    table.entries[s.index] = CalibrationEntry{s.r1_ohm, s.r2_ohm};
  return table;
}

}  // namespace edasim
