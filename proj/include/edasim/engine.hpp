#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "edasim/afe.hpp"
#include "edasim/controller.hpp"
#include "edasim/signal.hpp"

namespace edasim {

enum class DutyMode { AlwaysOn, DutyCycledMuxOp, ToggledDcdc };
enum class TxMode { PerSample, Batched15s };

struct EngineConfig {
  int64_t sample_period_ms = 125;  // 8 Hz firmware cycle
  int64_t afe_on_ms = 5;           // sensing window per cycle
  DutyMode duty_mode = DutyMode::DutyCycledMuxOp;
  TxMode tx_mode = TxMode::PerSample;
  int batch_samples = 120;   // 15 s at 8 Hz
  int64_t tx_window_ms = 2;  // TxStart..TxEnd spacing in the log

  void validate() const;  // 0 < afe_on_ms <= sample_period_ms, ...
};

struct AcquisitionRecord {
  int64_t t_ms = 0;
  int adc_code = 0;
  int setting_index = 0;
  bool saturated = false;  // code at either ADC extreme
  double reconstructed_conductance_us = 0.0;
};

enum class EventKind { AfeOn, AfeOff, Sample, TxStart, TxEnd, DcdcOn, DcdcOff };

const char* to_string(EventKind kind);

struct Event {
  int64_t t_ms = 0;
  EventKind kind = EventKind::Sample;
  int64_t payload = 0;  // adc code for Sample, packet sequence for TxStart/TxEnd
};

struct EventLog {
  std::vector<Event> events;
  int64_t duration_ms = 0;

  // On/Off events properly nested per device, times nondecreasing.
  void validate() const;  // throws ValidationError
  int64_t total_afe_on_ms() const;
  int count(EventKind kind) const;
};

struct AcquisitionResult {
  std::vector<AcquisitionRecord> records;
  EventLog log;
  int setting_changes = 0;  // transitions after the boot auto-range
};

// The firmware-cycle simulator. Every sample_period_ms: enable the AFE,
// sample-and-hold the ground truth at the cycle start, quantize, reconstruct,
// buffer for transmission, and let the controller pick the next setting
// (effective the following cycle). The controller auto-ranges on the first
// sample before cycle 0 is recorded, like firmware settling at boot.
//
// Rejects an empty trace, a trace shorter than one period or sampled slower
// than the engine, and a ladder failing the coverage invariant.
AcquisitionResult run_acquisition(const EdaTrace& trace, const AfeConfig& afe_cfg,
                                  const GainLadder& ladder, const Thresholds& thresholds,
                                  const EngineConfig& engine_cfg,
                                  const CalibrationTable* calib = nullptr);

}  // namespace edasim
