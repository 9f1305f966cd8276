#pragma once

#include <optional>

#include "edasim/afe.hpp"

namespace edasim {

enum class Action { Hold, StepToLowerVout, StepToHigherVout };

struct ControllerState {
  int active_index = 0;
  int last_code = 0;
  std::optional<int> pending_switch;  // target index, applied next cycle
};

// Saturation / low-signal thresholds in ADC codes. Defaults: any code at or
// above full-scale minus one counts as saturated; low threshold at 25% of
// full scale. The gap guarantees hysteresis for the default ladder.
struct Thresholds {
  int sat_hi_code;
  int low_code;

  static Thresholds defaults_for(const AfeConfig& cfg) {
    return Thresholds{cfg.full_scale_codes() - 2, cfg.full_scale_codes() / 4};
  }
  void validate(const AfeConfig& cfg) const;  // 0 < low < sat_hi < 2^bits
  // Hysteresis condition against a ladder: adjacent settings' Vout ratio stays
  // below sat_hi/low (in codes) everywhere in the measurement range, so a
  // constant input cannot oscillate between two settings.
  void validate_hysteresis(const GainLadder& ladder, const AfeConfig& cfg) const;
};

// One firmware decision. A switch decided at cycle k takes effect at cycle
// k+1; this function only picks the target. Boundary cases degrade to Hold.
struct StepResult {
  ControllerState state;
  Action action = Action::Hold;
};
StepResult step(const ControllerState& state, int code, const GainLadder& ladder,
                const Thresholds& thresholds);

// amp_factor(base) / amp_factor(setting); 1.0 when setting == base. Only
// resistance-independent when both settings share r1 — throws
// OperatingPointDependentRatio otherwise.
double gain_ratio(const GainSetting& setting, const GainSetting& base);

// Iterate step() against the quantized response at constant r_skin until the
// controller holds. Returns the steady index; used by sweeps and at boot.
int converge(double r_skin_ohm, int start_index, const GainLadder& ladder,
             const AfeConfig& cfg, const Thresholds& thresholds, int max_steps = -1);

}  // namespace edasim
