#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace edasim {

// Excitation / rail / ADC parameters shared by both front-end topologies.
struct AfeConfig {
  double v_exc_v = 1.8;
  double v_rail_v = 1.8;   // output rail == ADC full scale
  int adc_bits = 12;       // 8..16
  double r_min_ohm = 25e3;   // measurement range, 40 µS
  double r_max_ohm = 10e6;   // 0.1 µS

  int full_scale_codes() const { return 1 << adc_bits; }
  int max_code() const { return full_scale_codes() - 1; }
  double v_lsb() const { return v_rail_v / full_scale_codes(); }
  void validate() const;  // throws ConfigError
};

// Single-reference-resistor divider, the no-adaptive-gain baseline.
struct FixedDivider {
  double r_ref_ohm = 80400.0;  // fitted so the resolution endpoints land on
                               // 34 Ω/bit at 25 kΩ and 311 kΩ/bit at 10 MΩ
};

// One MUX position pair: divider resistor r1 plus amplifier-setting resistor
// r2, with amp_factor = 1 + r2/r_g for the non-inverting second stage.
struct GainSetting {
  int index = 0;
  double r1_ohm = 0.0;
  double r2_ohm = 0.0;
  double r_g_ohm = 100e3;
  double amp_factor = 1.0;
};

double amp_from_r2(double r2_ohm, double r_g_ohm);

// Settings sorted by descending output voltage at a fixed mid-range skin
// resistance; indices contiguous from 0.
struct GainLadder {
  std::vector<GainSetting> settings;
  double r_g_ohm = 100e3;

  size_t size() const { return settings.size(); }
  const GainSetting& at(int index) const;
  // Structural checks: >= 2 settings, contiguous indices, positive values,
  // descending Vout at the geometric mid-range point. Throws ValidationError.
  void validate(const AfeConfig& cfg) const;
  // Coverage invariant: every r in [r_min, r_max] has a setting with ideal
  // Vout inside [0.05, 0.98] * v_rail. Checked on a log grid.
  bool covers_range(const AfeConfig& cfg, int grid_points = 512) const;
};

// Measured resistor values substituted for nominals during reconstruction.
struct CalibrationEntry {
  double r1_ohm = 0.0;
  double r2_ohm = 0.0;
};
struct CalibrationTable {
  std::map<int, CalibrationEntry> entries;  // keyed by setting index
  std::optional<double> r_ref_ohm;          // for the fixed divider
  // Sanity bound: every measured value within ±5% of its nominal.
  void validate(const GainLadder& nominal) const;
};

struct VoutPair {
  double ideal_v = 0.0;    // pre-clamp transfer value
  double clamped_v = 0.0;  // min(ideal, v_rail)
};

// Divider + amplifier transfer. Strictly decreasing in r_skin (ideal value).
VoutPair transfer_vout(double r_skin_ohm, const GainSetting& setting, const AfeConfig& cfg);
VoutPair transfer_vout(double r_skin_ohm, const FixedDivider& divider, const AfeConfig& cfg);

// code = clamp(floor(v / v_rail * 2^bits), 0, 2^bits - 1). Rejects v < 0.
int quantize(double v, const AfeConfig& cfg);

// Ω per bit at the operating point: V_LSB / |dVout/dR|, evaluated
// analytically. Throws SaturatedOperatingPoint if ideal Vout >= v_rail.
double resolution_at(double r_skin_ohm, const GainSetting& setting, const AfeConfig& cfg);
double resolution_at(double r_skin_ohm, const FixedDivider& divider, const AfeConfig& cfg);

// Invert the transfer at the code-center voltage (code + 0.5) * V_LSB using
// calibrated resistor values when a table is supplied. Requires
// 0 < code < max_code; throws SaturatedCode otherwise.
double reconstruct_resistance(int code, const GainSetting& setting, const AfeConfig& cfg,
                              const CalibrationTable* calib = nullptr);
double reconstruct_resistance(int code, const FixedDivider& divider, const AfeConfig& cfg,
                              const CalibrationTable* calib = nullptr);

// Inversion helpers at an arbitrary (unquantized) voltage.
double invert_transfer(double v, const GainSetting& setting, const AfeConfig& cfg);
double invert_transfer(double v, const FixedDivider& divider, const AfeConfig& cfg);

// Skin resistance at which this setting's ideal output hits the rail; the
// representable lower range bound for saturated-high samples.
double rail_crossing_resistance(const GainSetting& setting, const AfeConfig& cfg);

// ±1% uniform perturbation of every r1/r2, seeded; models an uncalibrated
// board. Returns the perturbed ("true hardware") ladder; the matching
// calibration table is exactly those true values.
GainLadder perturb_ladder(const GainLadder& nominal, double tolerance, uint64_t seed);
CalibrationTable calibration_from(const GainLadder& true_ladder);

}  // namespace edasim
