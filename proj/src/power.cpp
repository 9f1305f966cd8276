#include "edasim/power.hpp"

#include <algorithm>
#include <cmath>

#include "edasim/errors.hpp"

namespace edasim {

void PowerConfig::validate() const {
  if (i_mcu_base_ma < 0 || i_afe_active_ma < 0 || q_ble_event_uc < 0 || q_dcdc_inrush_uc < 0)
    throw ConfigError("power: currents and charges must be >= 0");
  if (!(t_ble_event_ms > 0)) throw ConfigError("power.t_ble_event_ms: must be > 0");
  if (!(supply_v > 0)) throw ConfigError("power.supply_v: must be > 0");
}

namespace {

// Spread a charge q (µC == mA·ms) uniformly over [t0, t0+width) into 1 ms
// bins, clipped to the timeline.
void deposit(std::vector<double>& bins, double t0, double width, double q_ma_ms) {
  if (width <= 0.0) return;
  double rate = q_ma_ms / width;  // mA
  double t1 = t0 + width;
  auto first = static_cast<int64_t>(std::floor(t0));
  auto last = static_cast<int64_t>(std::ceil(t1));
  for (int64_t b = std::max<int64_t>(first, 0); b < std::min<int64_t>(last, bins.size()); b++) {
    double lo = std::max(t0, static_cast<double>(b));
    double hi = std::min(t1, static_cast<double>(b + 1));
    if (hi > lo) bins[b] += rate * (hi - lo);
  }
}

}  // namespace

PowerResult simulate_power(const EventLog& log, int64_t duration_ms, const PowerConfig& cfg) {
  cfg.validate();
  log.validate();
  if (duration_ms <= 0) throw ConfigError("power: duration_ms must be > 0");
  for (const auto& ev : log.events)
    if (ev.t_ms < 0 || ev.t_ms > duration_ms)
      throw ValidationError("power: event outside [0, duration_ms]");

  auto n = static_cast<size_t>(duration_ms);
  std::vector<double> bins(n, cfg.i_mcu_base_ma);     // full model
  std::vector<double> base_bins(n, cfg.i_mcu_base_ma);  // transmissions excluded

  int64_t afe_on_at = -1;
  for (const auto& ev : log.events) {
    switch (ev.kind) {
      case EventKind::AfeOn:
        afe_on_at = ev.t_ms;
        break;
      case EventKind::AfeOff:
        if (afe_on_at >= 0) {
          double width = static_cast<double>(ev.t_ms - afe_on_at);
          deposit(bins, static_cast<double>(afe_on_at), width, cfg.i_afe_active_ma * width);
          deposit(base_bins, static_cast<double>(afe_on_at), width, cfg.i_afe_active_ma * width);
          afe_on_at = -1;
        }
        break;
      case EventKind::TxStart:
        deposit(bins, static_cast<double>(ev.t_ms), cfg.t_ble_event_ms, cfg.q_ble_event_uc);
        break;
      case EventKind::DcdcOn:
        deposit(bins, static_cast<double>(ev.t_ms), 1.0, cfg.q_dcdc_inrush_uc);
        deposit(base_bins, static_cast<double>(ev.t_ms), 1.0, cfg.q_dcdc_inrush_uc);
        break;
      default:
        break;
    }
  }

  double total = 0.0, total_base = 0.0, peak = 0.0;
  for (size_t i = 0; i < n; i++) {
    total += bins[i];
    total_base += base_bins[i];
    peak = std::max(peak, bins[i]);
  }

  PowerResult result;
  result.summary.average_ma = total / static_cast<double>(n);
  result.summary.baseline_ma = total_base / static_cast<double>(n);
  result.summary.peak_ma = peak;
  result.summary.total_charge_mah = total / 3.6e6;  // mA·ms per mAh
  result.timeline.current_ma = std::move(bins);
  return result;
}

double battery_life_hours(double capacity_mah, double average_ma) {
  if (!(capacity_mah > 0.0)) throw ConfigError("battery: capacity_mah must be > 0");
  if (!(average_ma > 0.0)) throw ConfigError("battery: average_ma must be > 0");
  return capacity_mah / average_ma;
}

}  // namespace edasim
