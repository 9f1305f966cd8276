#include "edasim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "edasim/errors.hpp"

namespace edasim {

void EngineConfig::validate() const {
  if (sample_period_ms <= 0) throw ConfigError("engine.sample_period_ms: must be > 0");
  if (afe_on_ms <= 0 || afe_on_ms > sample_period_ms)
    throw ConfigError("engine.afe_on_ms: need 0 < afe_on_ms <= sample_period_ms");
  if (batch_samples <= 0 || batch_samples > 120)
    throw ConfigError("engine.batch_samples: must be in [1, 120]");
  if (tx_window_ms <= 0) throw ConfigError("engine.tx_window_ms: must be > 0");
}

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::AfeOn: return "AfeOn";
    case EventKind::AfeOff: return "AfeOff";
    case EventKind::Sample: return "Sample";
    case EventKind::TxStart: return "TxStart";
    case EventKind::TxEnd: return "TxEnd";
    case EventKind::DcdcOn: return "DcdcOn";
    case EventKind::DcdcOff: return "DcdcOff";
  }
  return "?";
}

void EventLog::validate() const {
  int64_t prev_t = 0;
  int afe_depth = 0, dcdc_depth = 0, tx_depth = 0;
  for (const auto& ev : events) {
    if (ev.t_ms < prev_t) throw ValidationError("event log: times must be nondecreasing");
    prev_t = ev.t_ms;
    switch (ev.kind) {
      case EventKind::AfeOn:
        if (++afe_depth > 1) throw ValidationError("event log: nested AfeOn");
        break;
      case EventKind::AfeOff:
        if (--afe_depth < 0) throw ValidationError("event log: AfeOff without AfeOn");
        break;
      case EventKind::DcdcOn:
        if (++dcdc_depth > 1) throw ValidationError("event log: nested DcdcOn");
        break;
      case EventKind::DcdcOff:
        if (--dcdc_depth < 0) throw ValidationError("event log: DcdcOff without DcdcOn");
        break;
      case EventKind::TxStart:
        if (++tx_depth > 1) throw ValidationError("event log: nested TxStart");
        break;
      case EventKind::TxEnd:
        if (--tx_depth < 0) throw ValidationError("event log: TxEnd without TxStart");
        break;
      case EventKind::Sample:
        break;
    }
  }
  if (afe_depth != 0) throw ValidationError("event log: unterminated AfeOn");
  if (dcdc_depth != 0) throw ValidationError("event log: unterminated DcdcOn");
  if (tx_depth != 0) throw ValidationError("event log: unterminated TxStart");
}

int64_t EventLog::total_afe_on_ms() const {
  int64_t total = 0, on_at = -1;
  for (const auto& ev : events) {
    if (ev.kind == EventKind::AfeOn) on_at = ev.t_ms;
    if (ev.kind == EventKind::AfeOff && on_at >= 0) {
      total += ev.t_ms - on_at;
      on_at = -1;
    }
  }
  return total;
}

int EventLog::count(EventKind kind) const {
  return static_cast<int>(std::count_if(events.begin(), events.end(),
                                        [kind](const Event& e) { return e.kind == kind; }));
}

AcquisitionResult run_acquisition(const EdaTrace& trace, const AfeConfig& afe_cfg,
                                  const GainLadder& ladder, const Thresholds& thresholds,
                                  const EngineConfig& engine_cfg, const CalibrationTable* calib) {
  afe_cfg.validate();
  engine_cfg.validate();
  ladder.validate(afe_cfg);
  thresholds.validate(afe_cfg);
  if (trace.samples.empty()) throw ConfigError("trace: empty");
  if (trace.duration_ms() < engine_cfg.sample_period_ms)
    throw ConfigError("trace: shorter than one sample period");
  double engine_rate_hz = 1000.0 / static_cast<double>(engine_cfg.sample_period_ms);
  if (trace.sample_rate_hz + 1e-9 < engine_rate_hz)
    throw ConfigError("trace: sample rate below the engine rate");
  if (!ladder.covers_range(afe_cfg))
    throw ValidationError("ladder: fails the coverage invariant over the measurement range");

  auto n_cycles = static_cast<size_t>(trace.duration_ms() / engine_cfg.sample_period_ms);

  AcquisitionResult out;
  out.records.reserve(n_cycles);
  out.log.duration_ms = static_cast<int64_t>(n_cycles) * engine_cfg.sample_period_ms;

  auto conductance_at_cycle = [&](size_t k) {
    double t_s = static_cast<double>(k) * engine_cfg.sample_period_ms / 1000.0;
    return trace.at_time(t_s);
  };

  // Boot auto-range: walk the controller to a steady setting on the first
  // sample before anything is recorded.
  int active = converge(conductance_to_resistance(conductance_at_cycle(0)), 0, ladder, afe_cfg,
                        thresholds);

  ControllerState state;
  state.active_index = active;

  int64_t tx_seq = 0;
  int buffered = 0;
  auto emit_tx = [&](int64_t t) {
    out.log.events.push_back({t, EventKind::TxStart, tx_seq});
    out.log.events.push_back({t + engine_cfg.tx_window_ms, EventKind::TxEnd, tx_seq});
    tx_seq++;
  };

  if (engine_cfg.duty_mode == DutyMode::AlwaysOn)
    out.log.events.push_back({0, EventKind::AfeOn, 0});

  for (size_t k = 0; k < n_cycles; k++) {
    int64_t t = static_cast<int64_t>(k) * engine_cfg.sample_period_ms;
    int64_t t_sample = t + engine_cfg.afe_on_ms;

    if (engine_cfg.duty_mode == DutyMode::ToggledDcdc)
      out.log.events.push_back({t, EventKind::DcdcOn, 0});
    if (engine_cfg.duty_mode != DutyMode::AlwaysOn)
      out.log.events.push_back({t, EventKind::AfeOn, 0});

    double g_true = conductance_at_cycle(k);
    double r_true = conductance_to_resistance(g_true);
    const GainSetting& setting = ladder.at(state.active_index);
    double v = transfer_vout(r_true, setting, afe_cfg).clamped_v;
    int code = quantize(v, afe_cfg);
    out.log.events.push_back({t_sample, EventKind::Sample, code});

    if (engine_cfg.duty_mode != DutyMode::AlwaysOn)
      out.log.events.push_back({t_sample, EventKind::AfeOff, 0});
    if (engine_cfg.duty_mode == DutyMode::ToggledDcdc)
      out.log.events.push_back({t_sample, EventKind::DcdcOff, 0});

    AcquisitionRecord rec;
    rec.t_ms = t;
    rec.adc_code = code;
    rec.setting_index = state.active_index;
    rec.saturated = (code == 0 || code == afe_cfg.max_code());
    if (rec.saturated) {
      // Report the boundary of what this setting can represent, clamped to
      // the configured measurement range.
      if (code == afe_cfg.max_code()) {
        double r_edge = std::max(rail_crossing_resistance(setting, afe_cfg), afe_cfg.r_min_ohm);
        rec.reconstructed_conductance_us = resistance_to_conductance(r_edge);
      } else {
        rec.reconstructed_conductance_us = resistance_to_conductance(afe_cfg.r_max_ohm);
      }
    } else {
      double r_hat = reconstruct_resistance(code, setting, afe_cfg, calib);
      rec.reconstructed_conductance_us = resistance_to_conductance(r_hat);
    }
    out.records.push_back(rec);

    buffered++;
    bool flush = engine_cfg.tx_mode == TxMode::PerSample ||
                 buffered == engine_cfg.batch_samples || k + 1 == n_cycles;
    if (flush) {
      emit_tx(t_sample);
      buffered = 0;
    }

    auto res = step(state, code, ladder, thresholds);
    state = res.state;
    if (res.state.pending_switch) {
      state.active_index = *res.state.pending_switch;
      out.setting_changes++;
    }
  }

  if (engine_cfg.duty_mode == DutyMode::AlwaysOn)
    out.log.events.push_back({out.log.duration_ms, EventKind::AfeOff, 0});

  return out;
}

}  // namespace edasim
