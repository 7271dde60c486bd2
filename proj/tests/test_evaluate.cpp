/*
 * Copyright 2026 The ddib Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "bridge/translate.hpp"
#include "common/rng.hpp"
#include "evaluate/metrics.hpp"
#include "evaluate/report.hpp"
#include "evaluate/spectral.hpp"
#include "synth/synth.hpp"
#include "test_support.hpp"

using namespace ddib;
using namespace ddib::testing;
namespace fs = std::filesystem;

namespace {

std::size_t band_index(Band b) { return static_cast<std::size_t>(b); }

}  // namespace

TEST_SUITE("evaluate") {

TEST_CASE("metric arithmetic") {
  const std::vector<double> a{0.1, 0.3}, b{0.12, 0.28};
  CHECK(mav(a) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(mse(a, b) == doctest::Approx(4e-4).epsilon(1e-9));
  CHECK(ratio_pct(a, b) == doctest::Approx(0.2).epsilon(1e-9));
  CHECK(mse(a, a) == 0.0);
  CHECK(ratio_pct(a, a) == 0.0);
  CHECK(mse(std::vector<double>(7, 0.0), std::vector<double>(7, 1.0)) == 1.0);
  CHECK(mse(b, a) == mse(a, b));
  // ratio uses the first argument's MAV
  CHECK(ratio_pct(b, a) == doctest::Approx(100 * 4e-4 / 0.2).epsilon(1e-9));
}

TEST_CASE("metric errors") {
  try {
    ratio_pct(std::vector<double>(3, 0.0), std::vector<double>(3, 1.0));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Numeric);
  }
  try {
    mse(std::vector<double>(3, 0.0), std::vector<double>(4, 0.0));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidArgument);
  }
  try {
    aggregate("x", {}, 0);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidArgument);
  }
}

TEST_CASE("aggregate of a two-pair toy set") {
  // pair 1: mav 0.2, mse 4e-4, ratio 0.2 %
  // pair 2: a = [1, -1], b = [1.1, -1] -> mav 1, mse 5e-3, ratio 0.5 %
  const std::vector<double> a1{0.1, 0.3}, b1{0.12, 0.28}, a2{1.0, -1.0}, b2{1.1, -1.0};
  const auto row = aggregate("toy", {{a1, b1}, {a2, b2}}, 118);
  CHECK(row.count == 2);
  CHECK(row.nfe == 118);
  CHECK(row.mav_mean == doctest::Approx(0.6));
  CHECK(row.mav_std == doctest::Approx(0.4));
  CHECK(row.mse_mean == doctest::Approx(2.7e-3));
  CHECK(row.mse_std == doctest::Approx(2.3e-3));
  CHECK(row.ratio_mean_pct == doctest::Approx(0.35));
  CHECK(row.ratio_std_pct == doctest::Approx(0.15));
}

TEST_CASE("aggregate of identical pairs") {
  const auto x = sine(320, 64, 3, 0.4);
  const auto row = aggregate("same", {{x, x}, {x, x}, {x, x}}, 1);
  CHECK(row.mse_mean == 0.0);
  CHECK(row.mse_std == 0.0);
}

TEST_CASE("aggregate agrees with a two-pass computation") {
  CounterRng rng(1, 5);
  std::vector<std::vector<double>> a(9), b(9);
  std::vector<SegmentPair> pairs;
  for (std::size_t k = 0; k < 9; ++k) {
    for (int i = 0; i < 20; ++i) {
      a[k].push_back(rng.uniform(-1, 1));
      b[k].push_back(a[k].back() + 0.05 * rng.normal());
    }
    pairs.emplace_back(a[k], b[k]);
  }
  const auto row = aggregate("r", pairs, 0);
  std::vector<double> r;
  for (std::size_t k = 0; k < 9; ++k) {
    double m = 0, e = 0;
    for (int i = 0; i < 20; ++i) m += std::abs(a[k][i]), e += std::pow(a[k][i] - b[k][i], 2);
    r.push_back(100 * (e / 20) / (m / 20));
  }
  const double mean = std::accumulate(r.begin(), r.end(), 0.0) / 9;
  double var = 0;
  for (double v : r) var += (v - mean) * (v - mean);
  CHECK(row.ratio_mean_pct == doctest::Approx(mean).epsilon(1e-12));
  CHECK(row.ratio_std_pct == doctest::Approx(std::sqrt(var / 9)).epsilon(1e-10));
}

TEST_CASE("power spectrum agrees with a direct DFT and Parseval") {
  CounterRng rng(2, 5);
  for (std::size_t n : {320u, 17u, 64u}) {
    std::vector<double> x(n);
    for (double& v : x) v = rng.normal();
    const auto p = full_power_spectrum(x);
    const auto ref = naive_power(x);
    REQUIRE(p.size() == n);
    for (std::size_t k = 0; k < n; ++k) CHECK(p[k] == doctest::Approx(ref[k]).epsilon(1e-9).scale(1e-12));
    const double ms = std::inner_product(x.begin(), x.end(), x.begin(), 0.0) / static_cast<double>(n);
    CHECK(std::abs(std::accumulate(p.begin(), p.end(), 0.0) - ms) / ms <= 1e-6);
    const auto one = power_spectrum(x);
    CHECK(one.size() == n / 2 + 1);
    CHECK(std::abs(std::accumulate(one.begin(), one.end(), 0.0) - ms) / ms <= 1e-6);
  }
}

TEST_CASE("band membership at the edges") {
  CHECK(in_band(Band::Delta, 0.5));
  CHECK(!in_band(Band::Delta, 0.4));
  CHECK(in_band(Band::Theta, 3.0));
  CHECK(!in_band(Band::Delta, 3.0));
  CHECK(in_band(Band::Alpha, 8.0));
  CHECK(in_band(Band::Beta, 12.0));
  CHECK(in_band(Band::Beta, 20.0));
  CHECK(!in_band(Band::Beta, 20.2));
}

TEST_CASE("constant segments have no band power") {
  const auto rep = psd(std::vector<std::vector<double>>{std::vector<double>(320, 0.7), std::vector<double>(320, -0.2)});
  CHECK(rep.mean[0] > 0.2);
  for (double m : rep.band_means) CHECK(std::abs(m) < 1e-20);
}

TEST_CASE("a 5 Hz tone is Theta and peaks at bin 25") {
  const auto rep = psd(std::vector<std::vector<double>>{sine(320, 64, 5.0), sine(320, 64, 5.0, 1.0, 1.0)});
  const auto peak = std::max_element(rep.mean.begin(), rep.mean.end()) - rep.mean.begin();
  CHECK(peak == 25);
  CHECK(rep.freqs[25] == doctest::Approx(5.0));
  const double total = std::accumulate(rep.band_power.begin(), rep.band_power.end(), 0.0);
  CHECK(rep.band_power[band_index(Band::Theta)] / total >= 0.95);
}

TEST_CASE("1 Hz plus 10 Hz splits power equally between Delta and Alpha") {
  std::vector<double> x = sine(320, 64, 1.0);
  const auto y = sine(320, 64, 10.0);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += y[i];
  const auto rep = psd(std::vector<std::vector<double>>{x});
  const double d = rep.band_power[band_index(Band::Delta)], a = rep.band_power[band_index(Band::Alpha)];
  CHECK(std::abs(d - a) / std::max(d, a) <= 0.05);
  CHECK(d == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("report comparison") {
  const auto x = sine(320, 64, 2.0, 1.0), y = sine(320, 64, 9.0, 0.5), z = sine(320, 64, 14.0, 0.8);
  std::vector<double> mix(320);
  for (std::size_t i = 0; i < 320; ++i) mix[i] = x[i] + y[i] + z[i] + 0.3 * std::sin(0.3 * i * i);
  std::vector<double> mix2 = mix;
  for (double& v : mix2) v *= std::sqrt(2.0);
  const auto a = psd(std::vector<std::vector<double>>{mix});
  const auto b = psd(std::vector<std::vector<double>>{mix2});
  const auto same = compare_reports(a, a);
  for (double d : same.band_rel_diff) CHECK(d == 0.0);
  CHECK(same.spectrum_rel_l2 == 0.0);
  const auto twice = compare_reports(a, b);
  for (double d : twice.band_rel_diff) CHECK(d == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(band_distance(a, a) == 0.0);

  // scaling amplitudes by k scales band means by k^2; order does not matter
  std::vector<double> tripled = mix;
  for (double& v : tripled) v *= 3;
  const auto c = psd(std::vector<std::vector<double>>{tripled});
  for (std::size_t band = 0; band < 4; ++band) CHECK(c.band_means[band] == doctest::Approx(9 * a.band_means[band]));
  const auto ab = psd(std::vector<std::vector<double>>{mix, x, z});
  const auto ba = psd(std::vector<std::vector<double>>{z, mix, x});
  for (std::size_t band = 0; band < 4; ++band) CHECK(ab.band_means[band] == doctest::Approx(ba.band_means[band]).epsilon(1e-12));
}

TEST_CASE("halves of one synthetic dataset have similar spectra") {
  auto cfg = default_synth_config(Modality::Eeg);
  cfg.duration = 200;
  const auto ds = generate_dataset(cfg, default_synth_config(Modality::Fmeg), PreprocessOptions{});
  const auto& segs = ds.eeg.processed.train.segments;
  std::vector<std::vector<double>> even, odd;
  for (std::size_t i = 0; i < segs.size(); ++i) (i % 2 ? odd : even).push_back(segs[i].values);
  const auto cmp = compare_reports(psd(even), psd(odd));
  for (double d : cmp.band_rel_diff) CHECK(d < 0.15);
}

TEST_CASE("reference table carries the published numbers") {
  auto find = [](const char* data, const char* method) {
    for (const auto& r : kReferenceTable)
      if (std::string(r.data) == data && std::string(r.method) == method) return r;
    FAIL("missing row");
    return kReferenceTable[0];
  };
  const auto eh = find("eeg", "heun-bridge");
  CHECK(eh.nfe == 118);
  CHECK(eh.mse_mean == 0.01);
  CHECK(eh.mse_std == 0.06);
  CHECK(eh.ratio_mean == 0.01);
  CHECK(eh.ratio_std == 0.01);
  const auto fh = find("fmeg", "heun-bridge");
  CHECK(fh.mse_mean == 0.07);
  CHECK(fh.mse_std == 0.61);
  CHECK(fh.ratio_mean == 0.05);
  CHECK(fh.ratio_std == 0.20);
  const auto ed = find("eeg", "ddib");
  CHECK(ed.nfe == 500);
  CHECK(ed.mse_mean == 0.17);
  CHECK(ed.mse_std == 0.40);
  CHECK(ed.mav_mean == 129);
  CHECK(ed.mav_std == 122);
}

TEST_CASE("report files from oracle traces") {
  const GaussianDenoiser e(0.0, 0.3), f(0.1, 0.5);
  const auto spec = make_solver(SolverKind::Heun, 8, EdmConfig{});
  auto make = [&](const Denoiser& src, const Denoiser& tgt, Modality m, double amp) {
    std::vector<Segment> segs;
    for (int k = 0; k < 4; ++k) {
      Segment s;
      s.modality = m;
      s.values = sine(320, 64, 2.0 + 3 * k, amp);
      segs.push_back(s);
    }
    TraceSet set;
    set.source_modality = m;
    set.target_modality = other(m);
    set.steps = 8;
    set.cycle = true;
    set.traces = translate_batch(src, tgt, segs, spec, true);
    return set;
  };
  const auto ev = evaluate_sets({{"eeg_to_fmeg", make(e, f, Modality::Eeg, 0.3)},
                                 {"fmeg_to_eeg", make(f, e, Modality::Fmeg, 0.5)}});
  REQUIRE(ev.sets.size() == 2);
  CHECK(ev.sets[0].translate_nfe == 30);
  CHECK(ev.sets[0].cycle_nfe == 60);
  REQUIRE(ev.sets[0].reconstruction.has_value());
  CHECK(ev.sets[0].reconstruction->count == 4);
  CHECK(ev.cross.size() == 2);

  const fs::path dir = fs::temp_directory_path() / "ddib_test_report";
  fs::remove_all(dir);
  write_report(ev, dir);
  for (const char* f : {"table1.tsv", "bands.tsv", "metrics.json", "summary.txt", "fig_reconstruction_eeg_to_fmeg.tsv",
                        "fig_translation_fmeg_to_eeg.tsv"})
    CHECK(fs::exists(dir / f));
  std::ifstream in(dir / "table1.tsv");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(text.find("reference:heun-bridge") != std::string::npos);
  fs::remove_all(dir);
}

}  // TEST_SUITE
