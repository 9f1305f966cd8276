#include "edasim/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "edasim/errors.hpp"

namespace edasim {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, const char* what) {
  try {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(std::string(what) + ": cannot parse number '" + s + "'");
  }
}

// Strict field extraction: every key in the object must be consumed.
struct StrictObject {
  const ordered_json& obj;
  std::string scope;
  std::vector<std::string> seen;

  StrictObject(const ordered_json& o, std::string s) : obj(o), scope(std::move(s)) {
    if (!o.is_object()) throw ConfigError(scope + ": expected a JSON object");
  }
  bool has(const char* key) {
    seen.push_back(key);
    return obj.contains(key);
  }
  template <typename T>
  void get(const char* key, T& out) {
    if (!has(key)) return;
    try {
      out = obj.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      throw ConfigError(scope + "." + key + ": wrong type");
    }
  }
  const ordered_json* sub(const char* key) {
    if (!has(key)) return nullptr;
    return &obj.at(key);
  }
  void finish() {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      bool known = false;
      for (const auto& k : seen)
        if (k == it.key()) known = true;
      if (!known) throw ConfigError(scope + "." + it.key() + ": unknown field");
    }
  }
};

ordered_json parse_json(const std::string& text, const char* scope) {
  try {
    return ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string(scope) + ": " + e.what());
  }
}

}  // namespace

std::string trace_to_csv(const EdaTrace& trace) {
  std::string out = "t_s,conductance_us\n";
  for (size_t i = 0; i < trace.samples.size(); i++) {
    out += fmt(static_cast<double>(i) / trace.sample_rate_hz);
    out += ',';
    out += fmt(trace.samples[i]);
    out += '\n';
  }
  return out;
}

EdaTrace trace_from_csv(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line) || line != "t_s,conductance_us")
    throw ConfigError("trace csv: missing header 't_s,conductance_us'");
  EdaTrace trace;
  std::vector<double> times;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cols = split(line, ',');
    if (cols.size() != 2) throw ConfigError("trace csv: expected 2 columns");
    times.push_back(parse_double(cols[0], "trace csv t_s"));
    trace.samples.push_back(parse_double(cols[1], "trace csv conductance_us"));
  }
  if (trace.samples.size() < 2) throw ConfigError("trace csv: need at least 2 samples");
  double dt = times[1] - times[0];
  if (!(dt > 0.0)) throw ConfigError("trace csv: non-increasing time column");
  trace.sample_rate_hz = 1.0 / dt;
  return trace;
}

std::string records_to_csv(const std::vector<AcquisitionRecord>& records) {
  std::string out = "t_ms,adc_code,setting_index,saturated,conductance_us\n";
  char buf[128];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof(buf), "%lld,%d,%d,%d,", static_cast<long long>(r.t_ms), r.adc_code,
                  r.setting_index, r.saturated ? 1 : 0);
    out += buf;
    out += fmt(r.reconstructed_conductance_us);
    out += '\n';
  }
  return out;
}

std::vector<AcquisitionRecord> records_from_csv(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line) || line != "t_ms,adc_code,setting_index,saturated,conductance_us")
    throw ConfigError("records csv: bad header");
  std::vector<AcquisitionRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cols = split(line, ',');
    if (cols.size() != 5) throw ConfigError("records csv: expected 5 columns");
    AcquisitionRecord r;
    r.t_ms = static_cast<int64_t>(parse_double(cols[0], "records csv t_ms"));
    r.adc_code = static_cast<int>(parse_double(cols[1], "records csv adc_code"));
    r.setting_index = static_cast<int>(parse_double(cols[2], "records csv setting_index"));
    r.saturated = parse_double(cols[3], "records csv saturated") != 0.0;
    r.reconstructed_conductance_us = parse_double(cols[4], "records csv conductance_us");
    out.push_back(r);
  }
  return out;
}

std::string events_to_jsonl(const EventLog& log) {
  std::string out;
  char buf[160];
  for (const auto& ev : log.events) {
    const char* kind = to_string(ev.kind);
    if (ev.kind == EventKind::Sample)
      std::snprintf(buf, sizeof(buf), "{\"t_ms\":%lld,\"kind\":\"%s\",\"code\":%lld}\n",
                    static_cast<long long>(ev.t_ms), kind, static_cast<long long>(ev.payload));
    else if (ev.kind == EventKind::TxStart || ev.kind == EventKind::TxEnd)
      std::snprintf(buf, sizeof(buf), "{\"t_ms\":%lld,\"kind\":\"%s\",\"seq\":%lld}\n",
                    static_cast<long long>(ev.t_ms), kind, static_cast<long long>(ev.payload));
    else
      std::snprintf(buf, sizeof(buf), "{\"t_ms\":%lld,\"kind\":\"%s\"}\n",
                    static_cast<long long>(ev.t_ms), kind);
    out += buf;
  }
  return out;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::string out =
      "r_skin_ohm,res_fixed_ohm_per_bit,res_adaptive_ohm_per_bit,best_setting_index,"
      "vout_fixed_v,vout_adaptive_v\n";
  for (const auto& r : rows) {
    out += fmt(r.r_skin_ohm);
    out += ',';
    out += fmt(r.res_fixed);
    out += ',';
    out += fmt(r.res_adaptive);
    out += ',';
    out += std::to_string(r.best_setting_index);
    out += ',';
    out += fmt(r.vout_fixed_v);
    out += ',';
    out += fmt(r.vout_adaptive_v);
    out += '\n';
  }
  return out;
}

std::string error_table_to_csv(const std::vector<ErrorRow>& rows) {
  std::string out = "r_true_ohm,r_measured_ohm,abs_error_ohm,rel_error_percent\n";
  for (const auto& r : rows) {
    out += fmt(r.r_true_ohm);
    out += ',';
    out += fmt(r.r_measured_ohm);
    out += ',';
    out += fmt(r.abs_error_ohm);
    out += ',';
    out += fmt(r.rel_error_percent);
    out += '\n';
  }
  return out;
}

std::string fig2_to_csv(const Fig2Report& report) {
  std::string out = "t_ms,conductance_true_us,conductance_recon_us,gain_ratio,vout_v\n";
  for (size_t i = 0; i < report.t_ms.size(); i++) {
    out += std::to_string(report.t_ms[i]);
    out += ',';
    out += fmt(report.conductance_true_us[i]);
    out += ',';
    out += fmt(report.conductance_recon_us[i]);
    out += ',';
    out += fmt(report.gain_ratio_series[i]);
    out += ',';
    out += fmt(report.vout_v[i]);
    out += '\n';
  }
  return out;
}

std::string timeline_to_csv(const PowerTimeline& timeline) {
  std::string out = "t_ms,current_ma\n";
  for (size_t i = 0; i < timeline.current_ma.size(); i++) {
    out += std::to_string(i);
    out += ',';
    out += fmt(timeline.current_ma[i]);
    out += '\n';
  }
  return out;
}

std::string ladder_to_json(const GainLadder& ladder) {
  ordered_json j;
  j["version"] = 1;
  j["r_g_ohm"] = ladder.r_g_ohm;
  j["settings"] = ordered_json::array();
  for (const auto& s : ladder.settings) {
    ordered_json js;
    js["index"] = s.index;
    js["r1_ohm"] = s.r1_ohm;
    js["r2_ohm"] = s.r2_ohm;
    js["amp_factor"] = s.amp_factor;
    j["settings"].push_back(js);
  }
  return j.dump(2) + "\n";
}

GainLadder ladder_from_json(const std::string& json_text) {
  ordered_json j = parse_json(json_text, "ladder");
  StrictObject root(j, "ladder");
  int version = 1;
  root.get("version", version);
  if (version != 1) throw ConfigError("ladder.version: unsupported");
  GainLadder ladder;
  root.get("r_g_ohm", ladder.r_g_ohm);
  const ordered_json* settings = root.sub("settings");
  root.finish();
  if (!settings || !settings->is_array() || settings->size() < 2)
    throw ConfigError("ladder.settings: expected an array of at least 2 settings");
  for (const auto& js : *settings) {
    StrictObject so(js, "ladder.settings");
    GainSetting s;
    s.r_g_ohm = ladder.r_g_ohm;
    so.get("index", s.index);
    so.get("r1_ohm", s.r1_ohm);
    so.get("r2_ohm", s.r2_ohm);
    double amp = -1.0;
    so.get("amp_factor", amp);
    so.finish();
    s.amp_factor = amp_from_r2(s.r2_ohm, ladder.r_g_ohm);
    if (amp > 0.0 && std::abs(amp - s.amp_factor) > 1e-9 * s.amp_factor)
      throw ConfigError("ladder.settings.amp_factor: inconsistent with r2_ohm/r_g_ohm");
    ladder.settings.push_back(s);
  }
  return ladder;
}

std::string calibration_to_json(const CalibrationTable& table) {
  ordered_json j;
  if (table.r_ref_ohm) j["r_ref_ohm"] = *table.r_ref_ohm;
  ordered_json entries = ordered_json::object();
  for (const auto& [idx, e] : table.entries) {
    ordered_json je;
    je["r1_ohm"] = e.r1_ohm;
    je["r2_ohm"] = e.r2_ohm;
    entries[std::to_string(idx)] = je;
  }
  j["entries"] = entries;
  return j.dump(2) + "\n";
}

CalibrationTable calibration_from_json(const std::string& json_text) {
  ordered_json j = parse_json(json_text, "calibration");
  StrictObject root(j, "calibration");
  CalibrationTable table;
  if (root.has("r_ref_ohm")) table.r_ref_ohm = j.at("r_ref_ohm").get<double>();
  const ordered_json* entries = root.sub("entries");
  root.finish();
  if (!entries) return table;
  for (auto it = entries->begin(); it != entries->end(); ++it) {
    int idx = 0;
    try {
      idx = std::stoi(it.key());
    } catch (const std::exception&) {
      throw ConfigError("calibration.entries: keys must be setting indices");
    }
    StrictObject so(it.value(), "calibration.entries." + it.key());
    CalibrationEntry e;
    so.get("r1_ohm", e.r1_ohm);
    so.get("r2_ohm", e.r2_ohm);
    so.finish();
    table.entries[idx] = e;
  }
  return table;
}

namespace {

DutyMode duty_mode_from(const std::string& s) {
  if (s == "AlwaysOn") return DutyMode::AlwaysOn;
  if (s == "DutyCycledMuxOp") return DutyMode::DutyCycledMuxOp;
  if (s == "ToggledDcdc") return DutyMode::ToggledDcdc;
  throw ConfigError("engine.duty_mode: unknown mode '" + s + "'");
}
const char* to_string(DutyMode m) {
  switch (m) {
    case DutyMode::AlwaysOn: return "AlwaysOn";
    case DutyMode::DutyCycledMuxOp: return "DutyCycledMuxOp";
    case DutyMode::ToggledDcdc: return "ToggledDcdc";
  }
  return "?";
}
TxMode tx_mode_from(const std::string& s) {
  if (s == "PerSample") return TxMode::PerSample;
  if (s == "Batched15s") return TxMode::Batched15s;
  throw ConfigError("engine.tx_mode: unknown mode '" + s + "'");
}
const char* to_string(TxMode m) {
  return m == TxMode::PerSample ? "PerSample" : "Batched15s";
}

}  // namespace

std::string run_config_to_json(const RunConfig& cfg) {
  ordered_json j;
  ordered_json synth;
  synth["duration_s"] = cfg.synth.duration_s;
  synth["tonic_level_us"] = cfg.synth.tonic_level_us;
  synth["tonic_drift_us_per_s"] = cfg.synth.tonic_drift_us_per_s;
  ordered_json events = ordered_json::array();
  for (const auto& ev : cfg.synth.scr_events) {
    ordered_json je;
    je["onset_s"] = ev.onset_s;
    je["amplitude_us"] = ev.amplitude_us;
    events.push_back(je);
  }
  synth["scr_events"] = events;
  synth["kernel_rise_s"] = cfg.synth.kernel_rise_s;
  synth["kernel_decay_s"] = cfg.synth.kernel_decay_s;
  synth["noise_sigma_us"] = cfg.synth.noise_sigma_us;
  synth["rng_seed"] = cfg.synth.rng_seed;
  synth["sample_rate_hz"] = cfg.synth.sample_rate_hz;
  j["synth"] = synth;

  ordered_json afe;
  afe["v_exc_v"] = cfg.afe.v_exc_v;
  afe["v_rail_v"] = cfg.afe.v_rail_v;
  afe["adc_bits"] = cfg.afe.adc_bits;
  afe["r_min_ohm"] = cfg.afe.r_min_ohm;
  afe["r_max_ohm"] = cfg.afe.r_max_ohm;
  afe["r_ref_ohm"] = cfg.divider.r_ref_ohm;
  j["afe"] = afe;

  ordered_json thresholds;
  thresholds["sat_hi_code"] = cfg.thresholds.sat_hi_code;
  thresholds["low_code"] = cfg.thresholds.low_code;
  j["thresholds"] = thresholds;

  ordered_json engine;
  engine["sample_period_ms"] = cfg.engine.sample_period_ms;
  engine["afe_on_ms"] = cfg.engine.afe_on_ms;
  engine["duty_mode"] = to_string(cfg.engine.duty_mode);
  engine["tx_mode"] = to_string(cfg.engine.tx_mode);
  engine["batch_samples"] = cfg.engine.batch_samples;
  engine["tx_window_ms"] = cfg.engine.tx_window_ms;
  j["engine"] = engine;

  ordered_json power;
  power["i_mcu_base_ma"] = cfg.power.i_mcu_base_ma;
  power["i_afe_active_ma"] = cfg.power.i_afe_active_ma;
  power["q_ble_event_uc"] = cfg.power.q_ble_event_uc;
  power["t_ble_event_ms"] = cfg.power.t_ble_event_ms;
  power["q_dcdc_inrush_uc"] = cfg.power.q_dcdc_inrush_uc;
  power["supply_v"] = cfg.power.supply_v;
  j["power"] = power;

  ordered_json channel;
  channel["drop_probability"] = cfg.channel.drop_probability;
  channel["rng_seed"] = cfg.channel.rng_seed;
  j["channel"] = channel;

  return j.dump(2) + "\n";
}

void apply_run_config_json(RunConfig& cfg, const std::string& json_text,
                           const std::filesystem::path& base_dir) {
  ordered_json j = parse_json(json_text, "config");
  StrictObject root(j, "config");

  if (const ordered_json* js = root.sub("synth")) {
    StrictObject so(*js, "synth");
    so.get("duration_s", cfg.synth.duration_s);
    so.get("tonic_level_us", cfg.synth.tonic_level_us);
    so.get("tonic_drift_us_per_s", cfg.synth.tonic_drift_us_per_s);
    if (const ordered_json* je = so.sub("scr_events")) {
      if (!je->is_array()) throw ConfigError("synth.scr_events: expected an array");
      cfg.synth.scr_events.clear();
      for (const auto& e : *je) {
        StrictObject eo(e, "synth.scr_events");
        ScrEvent ev;
        eo.get("onset_s", ev.onset_s);
        eo.get("amplitude_us", ev.amplitude_us);
        eo.finish();
        cfg.synth.scr_events.push_back(ev);
      }
    }
    so.get("kernel_rise_s", cfg.synth.kernel_rise_s);
    so.get("kernel_decay_s", cfg.synth.kernel_decay_s);
    so.get("noise_sigma_us", cfg.synth.noise_sigma_us);
    so.get("rng_seed", cfg.synth.rng_seed);
    so.get("sample_rate_hz", cfg.synth.sample_rate_hz);
    so.finish();
  }

  if (const ordered_json* js = root.sub("afe")) {
    StrictObject so(*js, "afe");
    so.get("v_exc_v", cfg.afe.v_exc_v);
    so.get("v_rail_v", cfg.afe.v_rail_v);
    so.get("adc_bits", cfg.afe.adc_bits);
    so.get("r_min_ohm", cfg.afe.r_min_ohm);
    so.get("r_max_ohm", cfg.afe.r_max_ohm);
    so.get("r_ref_ohm", cfg.divider.r_ref_ohm);
    so.finish();
  }

  if (root.has("ladder_file")) {
    std::string rel = j.at("ladder_file").get<std::string>();
    std::filesystem::path path = rel;
    if (path.is_relative()) path = base_dir / path;
    if (!std::filesystem::exists(path))
      throw ConfigError("config.ladder_file: '" + path.string() + "' does not exist");
    cfg.ladder = ladder_from_json(read_file(path));
  }
  if (const ordered_json* js = root.sub("ladder")) {
    cfg.ladder = ladder_from_json(js->dump());
  }

  if (const ordered_json* js = root.sub("thresholds")) {
    StrictObject so(*js, "thresholds");
    so.get("sat_hi_code", cfg.thresholds.sat_hi_code);
    so.get("low_code", cfg.thresholds.low_code);
    so.finish();
  }

  if (const ordered_json* js = root.sub("engine")) {
    StrictObject so(*js, "engine");
    so.get("sample_period_ms", cfg.engine.sample_period_ms);
    so.get("afe_on_ms", cfg.engine.afe_on_ms);
    if (so.has("duty_mode")) cfg.engine.duty_mode = duty_mode_from(js->at("duty_mode").get<std::string>());
    if (so.has("tx_mode")) cfg.engine.tx_mode = tx_mode_from(js->at("tx_mode").get<std::string>());
    so.get("batch_samples", cfg.engine.batch_samples);
    so.get("tx_window_ms", cfg.engine.tx_window_ms);
    so.finish();
  }

  if (const ordered_json* js = root.sub("power")) {
    StrictObject so(*js, "power");
    so.get("i_mcu_base_ma", cfg.power.i_mcu_base_ma);
    so.get("i_afe_active_ma", cfg.power.i_afe_active_ma);
    so.get("q_ble_event_uc", cfg.power.q_ble_event_uc);
    so.get("t_ble_event_ms", cfg.power.t_ble_event_ms);
    so.get("q_dcdc_inrush_uc", cfg.power.q_dcdc_inrush_uc);
    so.get("supply_v", cfg.power.supply_v);
    so.finish();
  }

  if (const ordered_json* js = root.sub("channel")) {
    StrictObject so(*js, "channel");
    so.get("drop_probability", cfg.channel.drop_probability);
    so.get("rng_seed", cfg.channel.rng_seed);
    so.finish();
  }

  root.finish();
}

std::string power_summary_to_json(const PowerSummary& summary) {
  ordered_json j;
  j["baseline_ma"] = summary.baseline_ma;
  j["average_ma"] = summary.average_ma;
  j["peak_ma"] = summary.peak_ma;
  j["total_charge_mah"] = summary.total_charge_mah;
  return j.dump(2) + "\n";
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << content;
}

void write_file(const std::filesystem::path& path, const std::vector<uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

std::vector<uint8_t> read_binary_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return bytes;
}

}  // namespace edasim
