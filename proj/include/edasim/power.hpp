#pragma once

#include <cstdint>
#include <vector>

#include "edasim/engine.hpp"

namespace edasim {

// Component-level current split. The split is not a datasheet figure: the
// defaults are fitted against the four headline currents (1.97 / 2.127 mA
// always-on, 0.670 / 0.721 mA duty-cycled) given the engine's default event
// schedule. See fitted_power_config() in defaults.hpp.
struct PowerConfig {
  double i_mcu_base_ma = 1.97 - 1.3 / 0.96;  // ≈0.6158, MCU + its always-on converter
  double i_afe_active_ma = 1.3 / 0.96;       // ≈1.3542, MUX + OP + divider while enabled
  // ≈9.7294 µC per transmission event
  double q_ble_event_uc = (0.157 * 0.721 + 0.051 * 2.127) / (0.721 + 2.127) * 125.0;
  double t_ble_event_ms = 2.0;      // rectangular pulse width
  double q_dcdc_inrush_uc = 450.0;  // per DC-DC re-enable, 1 ms spread
  double supply_v = 3.7;

  void validate() const;
};

struct PowerSummary {
  double baseline_ma = 0.0;  // transmission events excluded
  double average_ma = 0.0;   // total charge / duration
  double peak_ma = 0.0;
  double total_charge_mah = 0.0;
};

struct PowerTimeline {
  std::vector<double> current_ma;  // one bin per millisecond
};

struct PowerResult {
  PowerSummary summary;
  PowerTimeline timeline;
};

// Integrate an event log into a current-vs-time model:
//   i(t) = i_mcu_base + i_afe_active*[AFE on] + BLE pulses + DC-DC inrush.
// All engine events land on millisecond boundaries, so the 1 ms timeline
// integrates exactly; the summary is computed from the same segments.
PowerResult simulate_power(const EventLog& log, int64_t duration_ms, const PowerConfig& cfg);

// capacity / average, no derating. Rejects non-positive inputs.
double battery_life_hours(double capacity_mah, double average_ma);

}  // namespace edasim
