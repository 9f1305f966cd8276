// edasim — adaptive-gain EDA acquisition simulator.
//
// Subcommands: simulate, sweep, errors, power, fig2, telemetry encode|decode,
// validate-config. Exit codes: 0 success, 1 malformed config (the message
// names the offending field), 2 validation failure. Diagnostics go to stderr.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "edasim/analysis.hpp"
#include "edasim/defaults.hpp"
#include "edasim/errors.hpp"
#include "edasim/io.hpp"
#include "edasim/telemetry.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;
using namespace edasim;

namespace {

struct GlobalOptions {
  std::string config_path;
  std::string out_dir = "out";
  bool seed_set = false;
  uint64_t seed = 0;
};

RunConfig load_config(const GlobalOptions& opts) {
  RunConfig cfg = default_run_config();
  std::string path = opts.config_path;
  if (path.empty()) {
    if (const char* env = std::getenv("EDA_SIM_CONFIG")) path = env;
  }
  if (!path.empty()) {
    fs::path p(path);
    apply_run_config_json(cfg, read_file(p), p.has_parent_path() ? p.parent_path() : fs::path("."));
  }
  if (opts.seed_set) {
    cfg.synth.rng_seed = opts.seed;
    cfg.channel.rng_seed = opts.seed;
  }
  return cfg;
}

fs::path ensure_out_dir(const GlobalOptions& opts) {
  fs::path dir(opts.out_dir);
  fs::create_directories(dir);
  return dir;
}

ordered_json summary_of(const PowerSummary& s) {
  ordered_json j;
  j["baseline_ma"] = s.baseline_ma;
  j["average_ma"] = s.average_ma;
  j["peak_ma"] = s.peak_ma;
  j["total_charge_mah"] = s.total_charge_mah;
  return j;
}

int cmd_simulate(const GlobalOptions& opts) {
  RunConfig cfg = load_config(opts);
  cfg.validate();
  fs::path dir = ensure_out_dir(opts);

  EdaTrace trace = synthesize_eda(cfg.synth);
  AcquisitionResult acq =
      run_acquisition(trace, cfg.afe, cfg.ladder, cfg.thresholds, cfg.engine, nullptr);
  PowerResult power = simulate_power(acq.log, acq.log.duration_ms, cfg.power);

  auto packets = packetize(acq.records, cfg.engine.tx_mode);
  std::vector<uint8_t> wire;
  for (const auto& pkt : packets) {
    auto bytes = encode(pkt);
    wire.insert(wire.end(), bytes.begin(), bytes.end());
  }
  ChannelResult channel = run_channel(packets, cfg.channel);

  // ground truth at the cycle instants, for fidelity metrics
  std::vector<double> truth, recon;
  truth.reserve(acq.records.size());
  recon.reserve(acq.records.size());
  double max_err = 0.0;
  size_t saturated = 0;
  for (const auto& rec : acq.records) {
    double g = trace.at_time(static_cast<double>(rec.t_ms) / 1000.0);
    truth.push_back(g);
    recon.push_back(rec.reconstructed_conductance_us);
    max_err = std::max(max_err, std::fabs(g - rec.reconstructed_conductance_us));
    if (rec.saturated) saturated++;
  }

  write_file(dir / "trace.csv", trace_to_csv(trace));
  write_file(dir / "records.csv", records_to_csv(acq.records));
  write_file(dir / "events.jsonl", events_to_jsonl(acq.log));
  write_file(dir / "packets.bin", wire);

  ordered_json j;
  j["records"] = acq.records.size();
  j["setting_changes"] = acq.setting_changes;
  j["saturated_records"] = saturated;
  j["max_abs_conductance_error_us"] = max_err;
  j["pearson_truth_vs_recon"] = pearson(truth, recon);
  j["power"] = summary_of(power.summary);
  ordered_json jt;
  jt["packets"] = channel.stats.sent;
  jt["delivered"] = channel.stats.sent - channel.stats.dropped;
  jt["dropped"] = channel.stats.dropped;
  jt["gaps"] = channel.stats.gap_list.size();
  j["telemetry"] = jt;
  write_file(dir / "summary.json", j.dump(2) + "\n");
  return 0;
}

int cmd_sweep(const GlobalOptions& opts, int points) {
  RunConfig cfg = load_config(opts);
  cfg.validate();
  fs::path dir = ensure_out_dir(opts);

  auto grid = log_grid(cfg.afe.r_min_ohm, cfg.afe.r_max_ohm, points);
  auto rows = resolution_sweep(cfg.afe, cfg.divider, cfg.ladder, cfg.thresholds, grid);
  write_file(dir / "resolution_sweep.csv", sweep_to_csv(rows));

  ordered_json j;
  j["grid_points"] = rows.size();
  j["res_fixed_at_r_min_ohm_per_bit"] = rows.front().res_fixed;
  j["res_fixed_at_r_max_ohm_per_bit"] = rows.back().res_fixed;
  j["res_adaptive_at_r_min_ohm_per_bit"] = rows.front().res_adaptive;
  j["res_adaptive_at_r_max_ohm_per_bit"] = rows.back().res_adaptive;
  write_file(dir / "summary.json", j.dump(2) + "\n");
  return 0;
}

int cmd_errors(const GlobalOptions& opts, uint64_t seed) {
  RunConfig cfg = load_config(opts);
  cfg.validate();
  fs::path dir = ensure_out_dir(opts);

  auto calibrated = error_table(standard_test_resistors(), cfg.afe, cfg.ladder, cfg.thresholds,
                                true, 0.01, seed);
  auto uncalibrated = error_table(standard_test_resistors(), cfg.afe, cfg.ladder, cfg.thresholds,
                                  false, 0.01, seed);
  write_file(dir / "error_table.csv", error_table_to_csv(calibrated));
  write_file(dir / "error_table_uncalibrated.csv", error_table_to_csv(uncalibrated));

  ordered_json j;
  j["resistors"] = calibrated.size();
  j["perturbation_seed"] = seed;
  j["max_rel_error_percent_calibrated"] = max_rel_error_percent(calibrated);
  j["max_rel_error_percent_uncalibrated"] = max_rel_error_percent(uncalibrated);
  write_file(dir / "summary.json", j.dump(2) + "\n");
  return 0;
}

int cmd_power(const GlobalOptions& opts, bool with_timeline) {
  RunConfig cfg = load_config(opts);
  cfg.validate();
  fs::path dir = ensure_out_dir(opts);

  EdaTrace trace = synthesize_eda(cfg.synth);
  ordered_json j;
  PowerSummary duty_per_sample, duty_batched;

  struct ModeRun {
    const char* name;
    DutyMode duty;
    TxMode tx;
  };
  const ModeRun runs[] = {
      {"always_on", DutyMode::AlwaysOn, TxMode::PerSample},
      {"duty_cycled", DutyMode::DutyCycledMuxOp, TxMode::PerSample},
      {"toggled_dcdc", DutyMode::ToggledDcdc, TxMode::PerSample},
      {"duty_cycled_batched", DutyMode::DutyCycledMuxOp, TxMode::Batched15s},
  };
  for (const auto& run : runs) {
    EngineConfig ec = cfg.engine;
    ec.duty_mode = run.duty;
    ec.tx_mode = run.tx;
    AcquisitionResult acq = run_acquisition(trace, cfg.afe, cfg.ladder, cfg.thresholds, ec);
    PowerResult pr = simulate_power(acq.log, acq.log.duration_ms, cfg.power);
    j[run.name] = summary_of(pr.summary);
    if (std::string(run.name) == "duty_cycled") duty_per_sample = pr.summary;
    if (std::string(run.name) == "duty_cycled_batched") duty_batched = pr.summary;
    if (with_timeline)
      write_file(dir / (std::string("timeline_") + run.name + ".csv"),
                 timeline_to_csv(pr.timeline));
  }
  j["batching_saving_ua"] = (duty_per_sample.average_ma - duty_batched.average_ma) * 1000.0;
  j["battery_life_h_30mah_duty_cycled"] = battery_life_hours(30.0, duty_per_sample.average_ma);
  write_file(dir / "power_summary.json", j.dump(2) + "\n");
  return 0;
}

int cmd_fig2(const GlobalOptions& opts, bool descending) {
  RunConfig cfg = load_config(opts);
  cfg.validate();
  fs::path dir = ensure_out_dir(opts);

  EdaTrace trace = synthesize_eda(fig2_ramp_params(descending));
  AcquisitionResult acq = run_acquisition(trace, cfg.afe, cfg.ladder, cfg.thresholds, cfg.engine);
  Fig2Report report = fig2_report(trace, acq, cfg.ladder, cfg.afe);
  write_file(dir / "fig2_series.csv", fig2_to_csv(report));

  ordered_json j;
  j["descending"] = descending;
  j["base_setting_index"] = report.base_index;
  j["transitions"] = ordered_json::array();
  for (const auto& tr : report.transitions) {
    ordered_json je;
    je["cycle"] = tr.cycle;
    je["from_index"] = tr.from_index;
    je["to_index"] = tr.to_index;
    je["ratio_before"] = tr.ratio_before;
    je["ratio_after"] = tr.ratio_after;
    je["vout_before_v"] = tr.vout_before_v;
    je["vout_after_v"] = tr.vout_after_v;
    j["transitions"].push_back(je);
  }
  write_file(dir / "fig2_summary.json", j.dump(2) + "\n");
  return 0;
}

int cmd_telemetry_encode(const GlobalOptions& opts, const std::string& in_path,
                         const std::string& out_name, bool batched) {
  RunConfig cfg = load_config(opts);
  fs::path dir = ensure_out_dir(opts);
  auto records = records_from_csv(read_file(in_path));
  auto packets = packetize(records, batched ? TxMode::Batched15s : cfg.engine.tx_mode);
  std::vector<uint8_t> wire;
  for (const auto& pkt : packets) {
    auto bytes = encode(pkt);
    wire.insert(wire.end(), bytes.begin(), bytes.end());
  }
  write_file(dir / out_name, wire);
  return 0;
}

int cmd_telemetry_decode(const std::string& in_path) {
  auto bytes = read_binary_file(in_path);
  StreamDecodeResult res = decode_stream(bytes);
  for (const auto& pkt : res.packets) {
    ordered_json j;
    j["version"] = pkt.version;
    j["batched"] = pkt.batched;
    j["seq"] = pkt.seq;
    j["t0_ms"] = pkt.t0_ms;
    j["count"] = pkt.samples.size();
    ordered_json samples = ordered_json::array();
    for (const auto& s : pkt.samples) {
      ordered_json js;
      js["conductance_us"] = s.conductance_q * kConductanceLsbUs;
      js["setting_index"] = s.setting_index;
      samples.push_back(js);
    }
    j["samples"] = samples;
    std::cout << j.dump() << "\n";
  }
  if (res.status != DecodeStatus::Ok) {
    std::cerr << "decode error: " << to_string(res.status) << "\n";
    return 2;
  }
  return 0;
}

int cmd_validate(const GlobalOptions& opts) {
  RunConfig cfg = load_config(opts);
  cfg.validate();
  std::cout << "config ok\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"adaptive-gain EDA acquisition simulator"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand

  GlobalOptions opts;
  app.add_option("--config", opts.config_path,
                 "JSON config overriding defaults field-wise (or $EDA_SIM_CONFIG)");
  app.add_option("--out", opts.out_dir, "output directory");
  auto* seed_opt = app.add_option("--seed", opts.seed, "override synthesis/channel RNG seeds");

  auto* simulate = app.add_subcommand("simulate", "full pipeline: trace -> AFE -> records/telemetry");
  int sweep_points = 512;
  auto* sweep = app.add_subcommand("sweep", "resolution comparison across the measurement range");
  sweep->add_option("--points", sweep_points, "log-grid points");
  uint64_t err_seed = 1;
  auto* errors = app.add_subcommand("errors", "12-resistor accuracy table on a perturbed board");
  auto* err_seed_opt =
      errors->add_option("--perturbation-seed", err_seed, "seed for the ±1% resistor draw");
  bool with_timeline = false;
  auto* power = app.add_subcommand("power", "current model across duty/tx modes");
  power->add_flag("--timeline", with_timeline, "also write per-mode 1 ms timelines");
  bool descending = false;
  auto* fig2 = app.add_subcommand("fig2", "compensation-mechanism ramp report");
  fig2->add_flag("--descending", descending, "run the 6 -> 1 µS ramp instead");

  auto* telemetry = app.add_subcommand("telemetry", "wire codec utilities");
  telemetry->require_subcommand(1);
  std::string enc_in, enc_out = "packets.bin", dec_in;
  bool enc_batched = false;
  auto* tenc = telemetry->add_subcommand("encode", "records.csv -> packet stream");
  tenc->add_option("--in", enc_in, "records csv path")->required();
  tenc->add_option("--out-file", enc_out, "output file name (under --out)");
  tenc->add_flag("--batched", enc_batched, "force 120-sample batch packets");
  auto* tdec = telemetry->add_subcommand("decode", "packet stream -> JSON on stdout");
  tdec->add_option("--in", dec_in, "packet stream path")->required();

  auto* validate = app.add_subcommand("validate-config", "load and validate the active config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  opts.seed_set = seed_opt->count() > 0;

  try {
    if (*simulate) return cmd_simulate(opts);
    if (*sweep) return cmd_sweep(opts, sweep_points);
    if (*errors) {
      // explicit --perturbation-seed wins over the global --seed
      uint64_t seed = err_seed_opt->count() ? err_seed : (opts.seed_set ? opts.seed : err_seed);
      return cmd_errors(opts, seed);
    }
    if (*power) return cmd_power(opts, with_timeline);
    if (*fig2) return cmd_fig2(opts, descending);
    if (*tenc) return cmd_telemetry_encode(opts, enc_in, enc_out, enc_batched);
    if (*tdec) return cmd_telemetry_decode(dec_in);
    if (*validate) return cmd_validate(opts);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
