#include <doctest.h>

#include <cmath>
#include <vector>

#include "edasim/afe.hpp"
#include "edasim/controller.hpp"
#include "edasim/defaults.hpp"
#include "edasim/analysis.hpp"
#include "edasim/errors.hpp"

using namespace edasim;

namespace {
const AfeConfig kCfg{};  // 1.8 V, 12-bit defaults
}

TEST_CASE("fixed divider fit oracle pins r_ref") {
  // Solve ((r_max + x)/(r_min + x))^2 = 311000/34 for x; the shipped default
  // is that root rounded to the nearest 100 Ω.
  double ratio = std::sqrt(311000.0 / 34.0);
  double x = (kCfg.r_max_ohm - ratio * kCfg.r_min_ohm) / (ratio - 1.0);
  FixedDivider divider = fitted_fixed_divider();
  CHECK(std::fabs(divider.r_ref_ohm - x) <= 50.0);
  CHECK(divider.r_ref_ohm == 80400.0);

  // both published resolution endpoints under 12-bit / 1.8 V
  CHECK(resolution_at(25e3, divider, kCfg) == doctest::Approx(34.0).epsilon(0.10));
  CHECK(resolution_at(10e6, divider, kCfg) == doctest::Approx(311e3).epsilon(0.10));
}

TEST_CASE("fixed divider transfer points") {
  FixedDivider divider = fitted_fixed_divider();

  // symmetric divider: r_skin == r_ref -> half the excitation
  FixedDivider sym{50e3};
  CHECK(transfer_vout(50e3, sym, kCfg).ideal_v == doctest::Approx(0.9));

  // open circuit
  CHECK(transfer_vout(1e12, divider, kCfg).ideal_v < 1e-6);

  // fitted reference at the low end of the range
  CHECK(transfer_vout(25e3, divider, kCfg).ideal_v == doctest::Approx(1.373).epsilon(0.002));
}

TEST_CASE("transfer is strictly decreasing in r_skin") {
  GainLadder ladder = default_gain_ladder();
  for (const auto& s : ladder.settings) {
    double prev = transfer_vout(25e3, s, kCfg).ideal_v;
    for (double r = 30e3; r <= 10e6; r *= 1.3) {
      double v = transfer_vout(r, s, kCfg).ideal_v;
      CHECK(v < prev);
      prev = v;
    }
  }
}

TEST_CASE("quantize basics") {
  CHECK(quantize(0.0, kCfg) == 0);
  CHECK(quantize(1.8, kCfg) == 4095);
  CHECK(quantize(2.5, kCfg) == 4095);
  CHECK(quantize(0.9, kCfg) == 2048);
  CHECK_THROWS_AS(quantize(-0.1, kCfg), ConfigError);

  // monotone
  int prev = 0;
  for (double v = 0.0; v <= 2.0; v += 0.001) {
    int code = quantize(v, kCfg);
    CHECK(code >= prev);
    prev = code;
  }

  // idempotent under re-quantization of the code-center voltage
  for (int code = 0; code <= kCfg.max_code(); code += 7)
    CHECK(quantize((code + 0.5) * kCfg.v_lsb(), kCfg) == code);
}

TEST_CASE("resolution_at signals saturated operating points") {
  GainLadder ladder = default_gain_ladder();
  // top setting at low resistance is far above the rail
  CHECK_THROWS_AS(resolution_at(25e3, ladder.at(0), kCfg), SaturatedOperatingPoint);
  CHECK_NOTHROW(resolution_at(10e6, ladder.at(0), kCfg));
}

TEST_CASE("adaptive ladder hits the published resolution envelope") {
  GainLadder ladder = default_gain_ladder();
  Thresholds th = Thresholds::defaults_for(kCfg);

  int idx_low = converge(25e3, 0, ladder, kCfg, th);
  CHECK(resolution_at(25e3, ladder.at(idx_low), kCfg) <= 31.0 * 1.15);

  int idx_high = converge(10e6, 0, ladder, kCfg, th);
  CHECK(resolution_at(10e6, ladder.at(idx_high), kCfg) <= 4600.0 * 1.15);
}

TEST_CASE("resolution formula matches the central finite difference") {
  GainLadder ladder = default_gain_ladder();
  FixedDivider divider = fitted_fixed_divider();
  Thresholds th = Thresholds::defaults_for(kCfg);

  for (double r = 25e3; r <= 10e6; r *= 1.21) {
    // fixed divider
    {
      double v = transfer_vout(r, divider, kCfg).ideal_v;
      double dr = invert_transfer(v - kCfg.v_lsb(), divider, kCfg) -
                  invert_transfer(v + kCfg.v_lsb(), divider, kCfg);
      CHECK(resolution_at(r, divider, kCfg) == doctest::Approx(dr / 2.0).epsilon(0.01));
    }
    // steady adaptive setting
    {
      const GainSetting& s = ladder.at(converge(r, 0, ladder, kCfg, th));
      double v = transfer_vout(r, s, kCfg).ideal_v;
      double dr = invert_transfer(v - kCfg.v_lsb(), s, kCfg) -
                  invert_transfer(v + kCfg.v_lsb(), s, kCfg);
      CHECK(resolution_at(r, s, kCfg) == doctest::Approx(dr / 2.0).epsilon(0.01));
    }
  }
}

TEST_CASE("quantize/reconstruct round trip stays within half a resolution step") {
  GainLadder ladder = default_gain_ladder();
  Thresholds th = Thresholds::defaults_for(kCfg);

  auto check_round_trip = [&](double r) {
    const GainSetting& s = ladder.at(converge(r, 0, ladder, kCfg, th));
    int code = quantize(transfer_vout(r, s, kCfg).clamped_v, kCfg);
    REQUIRE(code > 0);
    REQUIRE(code < kCfg.max_code());
    double r_hat = reconstruct_resistance(code, s, kCfg);
    double bound = resolution_at(r, s, kCfg) / 2.0 * 1.001 + 1e-9 * r;
    CHECK(std::fabs(r_hat - r) <= bound);
  };

  for (double r : standard_test_resistors()) check_round_trip(r);
  // log-spaced property sweep
  for (int i = 0; i <= 500; i++) check_round_trip(25e3 * std::pow(400.0, i / 500.0));
}

TEST_CASE("infinite-resolution reconstruction is an exact inverse") {
  GainLadder ladder = default_gain_ladder();
  for (const auto& s : ladder.settings) {
    for (double r = 30e3; r <= 9e6; r *= 2.1) {
      double v = transfer_vout(r, s, kCfg).ideal_v;
      if (v >= kCfg.v_rail_v) continue;
      double r_back = invert_transfer(v, s, kCfg);
      CHECK(std::fabs(r_back - r) <= 1e-9 * r);
    }
  }
}

TEST_CASE("mislabeled divider resistor: 330k printed, 339k on the board") {
  // True hardware uses 339 kΩ while the firmware assumes the printed 330 kΩ.
  GainSetting nominal;
  nominal.index = 0;
  nominal.r1_ohm = 330e3;
  nominal.r2_ohm = 0.0;
  nominal.r_g_ohm = 100e3;
  nominal.amp_factor = 1.0;
  GainSetting hw = nominal;
  hw.r1_ohm = 339e3;

  double r_skin = 500e3;
  int code = quantize(transfer_vout(r_skin, hw, kCfg).clamped_v, kCfg);

  double r_uncal = reconstruct_resistance(code, nominal, kCfg);
  double rel_err = std::fabs(r_uncal - r_skin) / r_skin;
  CHECK(rel_err == doctest::Approx(0.0265).epsilon(0.08));  // ≈ 2.7%

  CalibrationTable calib;
  calib.entries[0] = CalibrationEntry{339e3, 0.0};
  double r_cal = reconstruct_resistance(code, nominal, kCfg, &calib);
  double quant_bound = resolution_at(r_skin, hw, kCfg) / 2.0 * 1.001 + 1e-9 * r_skin;
  CHECK(std::fabs(r_cal - r_skin) <= quant_bound);
}

TEST_CASE("reconstruct rejects saturated codes") {
  GainLadder ladder = default_gain_ladder();
  CHECK_THROWS_AS(reconstruct_resistance(0, ladder.at(0), kCfg), SaturatedCode);
  CHECK_THROWS_AS(reconstruct_resistance(kCfg.max_code(), ladder.at(0), kCfg), SaturatedCode);
}

TEST_CASE("ladder coverage invariant holds on a dense grid") {
  GainLadder ladder = default_gain_ladder();
  CHECK(ladder.covers_range(kCfg, 4096));
  ladder.validate(kCfg);  // ordering + structural checks
}

TEST_CASE("a sparse ladder fails coverage") {
  GainLadder sparse;
  sparse.r_g_ohm = 100e3;
  GainSetting a;
  a.index = 0;
  a.r1_ohm = 10e6;
  a.r2_ohm = 949760.0;
  a.r_g_ohm = 100e3;
  a.amp_factor = amp_from_r2(a.r2_ohm, a.r_g_ohm);
  GainSetting b;
  b.index = 1;
  b.r1_ohm = 27e3;
  b.r2_ohm = 0.0;
  b.r_g_ohm = 100e3;
  b.amp_factor = 1.0;
  sparse.settings = {a, b};
  CHECK_FALSE(sparse.covers_range(kCfg));
}

TEST_CASE("calibration dominance over perturbed boards") {
  GainLadder nominal = default_gain_ladder();
  Thresholds th = Thresholds::defaults_for(kCfg);

  for (uint64_t seed = 1; seed <= 25; seed++) {
    GainLadder hw = perturb_ladder(nominal, 0.01, seed);
    CalibrationTable measured = calibration_from(hw);
    double worst_cal = 0.0, worst_uncal = 0.0;
    for (double r : standard_test_resistors()) {
      int idx = converge(r, 0, hw, kCfg, th);
      int code = quantize(transfer_vout(r, hw.at(idx), kCfg).clamped_v, kCfg);
      double cal = std::fabs(reconstruct_resistance(code, nominal.at(idx), kCfg, &measured) - r) / r;
      double uncal = std::fabs(reconstruct_resistance(code, nominal.at(idx), kCfg) - r) / r;
      worst_cal = std::max(worst_cal, cal);
      worst_uncal = std::max(worst_uncal, uncal);
    }
    CHECK(worst_cal <= worst_uncal);
  }
}

TEST_CASE("calibration table sanity bound") {
  GainLadder nominal = default_gain_ladder();
  CalibrationTable good = calibration_from(perturb_ladder(nominal, 0.01, 7));
  CHECK_NOTHROW(good.validate(nominal));

  CalibrationTable bad = good;
  bad.entries[0].r1_ohm = nominal.at(0).r1_ohm * 1.2;  // 20% out
  CHECK_THROWS_AS(bad.validate(nominal), ValidationError);
}
