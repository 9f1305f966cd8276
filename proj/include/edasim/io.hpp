#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "edasim/analysis.hpp"
#include "edasim/defaults.hpp"
#include "edasim/power.hpp"

namespace edasim {

// CSV writers. Numbers are printed with %.9g so identical inputs always
// produce identical bytes.
std::string trace_to_csv(const EdaTrace& trace);
EdaTrace trace_from_csv(const std::string& csv);

std::string records_to_csv(const std::vector<AcquisitionRecord>& records);
std::vector<AcquisitionRecord> records_from_csv(const std::string& csv);

std::string events_to_jsonl(const EventLog& log);
std::string sweep_to_csv(const std::vector<SweepRow>& rows);
std::string error_table_to_csv(const std::vector<ErrorRow>& rows);
std::string fig2_to_csv(const Fig2Report& report);
std::string timeline_to_csv(const PowerTimeline& timeline);

// JSON configs. Loading is strict: unknown keys raise ConfigError naming the
// offending field. apply_* functions overlay the fields present in the JSON
// text onto an existing config, so a partial file overrides field-wise.
std::string ladder_to_json(const GainLadder& ladder);
GainLadder ladder_from_json(const std::string& json_text);

std::string calibration_to_json(const CalibrationTable& table);
CalibrationTable calibration_from_json(const std::string& json_text);

std::string run_config_to_json(const RunConfig& cfg);
void apply_run_config_json(RunConfig& cfg, const std::string& json_text,
                           const std::filesystem::path& base_dir);

std::string power_summary_to_json(const PowerSummary& summary);

// Whole-file helpers.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);
void write_file(const std::filesystem::path& path, const std::vector<uint8_t>& bytes);
std::vector<uint8_t> read_binary_file(const std::filesystem::path& path);

}  // namespace edasim
