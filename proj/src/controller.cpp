#include "edasim/controller.hpp"

#include <cmath>
#include <string>

#include "edasim/errors.hpp"

namespace edasim {

void Thresholds::validate(const AfeConfig& cfg) const {
  if (!(0 < low_code && low_code < sat_hi_code && sat_hi_code < cfg.full_scale_codes()))
    throw ConfigError("thresholds: need 0 < low_code < sat_hi_code < 2^adc_bits");
}

void Thresholds::validate_hysteresis(const GainLadder& ladder, const AfeConfig& cfg) const {
  validate(cfg);
  double limit = static_cast<double>(sat_hi_code) / static_cast<double>(low_code);
  // The Vout ratio of two divider settings is monotone in r_skin, so the
  // range endpoints bound it.
  for (size_t i = 0; i + 1 < ladder.settings.size(); i++) {
    for (double r : {cfg.r_min_ohm, cfg.r_max_ohm}) {
      double hi = transfer_vout(r, ladder.settings[i], cfg).ideal_v;
      double lo = transfer_vout(r, ladder.settings[i + 1], cfg).ideal_v;
      if (!(hi / lo < limit))
        throw ValidationError("thresholds: adjacent settings " + std::to_string(i) + "/" +
                              std::to_string(i + 1) + " violate the hysteresis ratio at r=" +
                              std::to_string(r));
    }
  }
}

StepResult step(const ControllerState& state, int code, const GainLadder& ladder,
                const Thresholds& thresholds) {
  if (code < 0) throw ConfigError("controller: negative adc code");
  auto last = static_cast<int>(ladder.size()) - 1;
  StepResult result;
  result.state = state;
  result.state.last_code = code;
  result.state.pending_switch.reset();

  if (code >= thresholds.sat_hi_code && state.active_index < last) {
    result.state.pending_switch = state.active_index + 1;
    result.action = Action::StepToLowerVout;
  } else if (code <= thresholds.low_code && state.active_index > 0) {
    result.state.pending_switch = state.active_index - 1;
    result.action = Action::StepToHigherVout;
  }
  return result;
}

double gain_ratio(const GainSetting& setting, const GainSetting& base) {
  if (setting.index == base.index && setting.r1_ohm == base.r1_ohm) return 1.0;
  if (setting.r1_ohm != base.r1_ohm)
    throw OperatingPointDependentRatio(
        "gain_ratio: settings use different divider resistors (r1 " +
        std::to_string(base.r1_ohm) + " vs " + std::to_string(setting.r1_ohm) + ")");
  return base.amp_factor / setting.amp_factor;
}

int converge(double r_skin_ohm, int start_index, const GainLadder& ladder, const AfeConfig& cfg,
             const Thresholds& thresholds, int max_steps) {
  if (max_steps < 0) max_steps = static_cast<int>(ladder.size());
  ControllerState state;
  state.active_index = start_index;
  for (int i = 0; i < max_steps; i++) {
    double v = transfer_vout(r_skin_ohm, ladder.at(state.active_index), cfg).clamped_v;
    auto res = step(state, quantize(v, cfg), ladder, thresholds);
    if (res.action == Action::Hold) return state.active_index;
    state = res.state;
    state.active_index = *res.state.pending_switch;
  }
  return state.active_index;
}

}  // namespace edasim
