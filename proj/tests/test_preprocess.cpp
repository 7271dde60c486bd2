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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <numeric>

#include "common/rng.hpp"
#include "preprocess/artifacts.hpp"
#include "preprocess/bursts.hpp"
#include "preprocess/dataset.hpp"
#include "preprocess/filter.hpp"
#include "preprocess/nleo.hpp"
#include "preprocess/normalize.hpp"
#include "preprocess/recording.hpp"
#include "preprocess/resample.hpp"
#include "preprocess/segments.hpp"
#include "test_support.hpp"

using namespace ddib;
using namespace ddib::testing;
namespace fs = std::filesystem;

namespace {

Recording make_recording(double rate, std::vector<std::vector<double>> channels, Modality m = Modality::Eeg) {
  Recording r;
  r.id = "t";
  r.modality = m;
  r.rate = rate;
  for (std::size_t c = 0; c < channels.size(); ++c) r.channels.push_back("ch" + std::to_string(c));
  r.samples = std::move(channels);
  r.validate();
  return r;
}

// Square-wave power: `level` on [a, b) seconds, 0 elsewhere.
std::vector<double> power_on(double rate, double seconds, double a, double b, double level) {
  std::vector<double> p(static_cast<std::size_t>(rate * seconds), 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double t = static_cast<double>(i) / rate;
    if (t >= a && t < b) p[i] = level;
  }
  return p;
}

}  // namespace

TEST_SUITE("preprocess") {

TEST_CASE("nleo of a ramp is constant -2") {
  const std::vector<double> x{1, 2, 3, 4, 5, 6};
  const auto y = nleo(x);
  const std::vector<double> expect{0, 0, 0, -2, -2, -2};
  CHECK(y == expect);
}

TEST_CASE("nleo of a constant is zero") {
  const std::vector<double> x(50, 7.25);
  for (double v : nleo(x)) CHECK(v == 0.0);
}

TEST_CASE("nleo of sin(pi i / 2) vanishes") {
  std::vector<double> x(64);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::sin(std::numbers::pi * static_cast<double>(i) / 2.0);
  const auto y = nleo(x);
  for (std::size_t i = 3; i < y.size(); ++i) CHECK(std::abs(y[i]) < 1e-12);
}

TEST_CASE("nleo of a pure tone matches the closed form") {
  const double w = 0.3;
  std::vector<double> x(100);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::cos(w * static_cast<double>(i) + 0.4);
  const double expect = 0.5 * (std::cos(3 * w) - std::cos(w));
  const auto y = nleo(x);
  for (std::size_t i = 3; i < y.size(); ++i) CHECK(y[i] == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("nleo of any ramp is constant") {
  CounterRng rng(5, 1);
  for (int trial = 0; trial < 10; ++trial) {
    const double a = rng.uniform(-5, 5), b = rng.uniform(-3, 3);
    std::vector<double> x(20);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = a + b * static_cast<double>(i);
    const auto y = nleo(x);
    // (a+bi)(a+b(i-3)) - (a+b(i-1))(a+b(i-2)) = -2 b^2
    for (std::size_t i = 3; i < y.size(); ++i) CHECK(y[i] == doctest::Approx(-2 * b * b).epsilon(1e-9));
  }
}

TEST_CASE("nleo rejects short input") {
  const std::vector<double> x{1, 2, 3};
  try {
    nleo(x);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooShort);
  }
}

TEST_CASE("smooth_abs of a negative constant") {
  const std::vector<double> x(1000, -3.0);
  for (double v : smooth_abs(x, 384)) CHECK(v == doctest::Approx(3.0));
  for (double v : smooth_abs(x, 7)) CHECK(v == doctest::Approx(3.0));
}

TEST_CASE("smooth_abs spreads a spike into a plateau") {
  const double k = 1.75;
  std::vector<double> x(2000, 0.0);
  x[1000] = 384.0 * k;
  const auto y = smooth_abs(x, 384);
  std::size_t on = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] > 0) {
      ++on;
      CHECK(y[i] == doctest::Approx(k));
    }
  }
  CHECK(on == 384);
}

TEST_CASE("smooth_abs with window 1 is |x|") {
  const std::vector<double> x{1, -2, 3.5, -0.25, 0};
  const auto y = smooth_abs(x, 1);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(y[i] == std::abs(x[i]));
}

TEST_CASE("bandpass removes DC") {
  const auto rec = make_recording(256, {std::vector<double>(256 * 20, 4.0)});
  const auto out = bandpass_zero_phase(rec, 0.5, 20);
  for (double v : out.samples[0]) CHECK(std::abs(v) < 1e-6);
}

TEST_CASE("bandpass keeps an in-band tone with zero lag") {
  const std::size_t n = 256 * 20;
  const auto x = sine(n, 256, 5.0);
  const auto out = bandpass_zero_phase(make_recording(256, {x}), 0.5, 20);
  const auto& y = out.samples[0];
  CHECK(tone_amplitude(y, 256, 5.0, n / 4, 3 * n / 4) == doctest::Approx(1.0).epsilon(0.02));
  // cross-correlation peak around the middle
  int best_lag = 99;
  double best = -1e300;
  for (int lag = -20; lag <= 20; ++lag) {
    double acc = 0;
    for (std::size_t i = n / 4; i < 3 * n / 4; ++i) acc += x[i] * y[static_cast<std::size_t>(static_cast<int>(i) + lag)];
    if (acc > best) best = acc, best_lag = lag;
  }
  CHECK(best_lag == 0);
}

TEST_CASE("bandpass attenuates 40 Hz") {
  const auto x = sine(256 * 20, 256, 40.0);
  const auto y = bandpass_zero_phase(make_recording(256, {x}), 0.5, 20).samples[0];
  CHECK(rms(y) < 0.1 * rms(x));
}

TEST_CASE("bandpass applied twice keeps an interior tone") {
  const std::size_t n = 256 * 20;
  const auto rec = make_recording(256, {sine(n, 256, 6.0)});
  const auto once = bandpass_zero_phase(rec, 0.5, 20);
  const auto twice = bandpass_zero_phase(once, 0.5, 20);
  const double a1 = tone_amplitude(once.samples[0], 256, 6.0, n / 4, 3 * n / 4);
  const double a2 = tone_amplitude(twice.samples[0], 256, 6.0, n / 4, 3 * n / 4);
  CHECK(std::abs(a2 - a1) / a1 < 0.05);
}

TEST_CASE("bandpass rejects bad bands") {
  const auto rec = make_recording(64, {std::vector<double>(640, 0.0)});
  for (auto [lo, hi] : {std::pair{0.5, 32.0}, std::pair{0.5, 40.0}, std::pair{0.0, 20.0}, std::pair{20.0, 10.0}}) {
    try {
      bandpass_zero_phase(rec, lo, hi);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InvalidBand);
    }
  }
}

TEST_CASE("bandpass preserves length and masks") {
  auto rec = make_recording(256, {sine(2560, 256, 3.0), sine(2560, 256, 7.0)});
  rec.masked = {{1.0, 2.0}};
  const auto out = bandpass_zero_phase(rec, 0.5, 20);
  CHECK(out.n_samples() == rec.n_samples());
  CHECK(out.masked == rec.masked);
}

TEST_CASE("resample keeps a constant") {
  const std::size_t n = 256 * 10 + 3;
  const auto out = resample(make_recording(256, {std::vector<double>(n, 2.5)}), 64.0);
  CHECK(std::llabs(static_cast<long long>(out.n_samples()) - static_cast<long long>(n / 4)) <= 1);
  CHECK(out.rate == 64.0);
  for (double v : out.samples[0]) CHECK(v == doctest::Approx(2.5).epsilon(1e-9));
}

TEST_CASE("resample keeps a 1 Hz tone") {
  const auto out = resample(make_recording(256, {sine(256 * 20, 256, 1.0)}), 64.0);
  const auto& y = out.samples[0];
  const double amp = tone_amplitude(y, 64, 1.0, 64, y.size() - 64);
  CHECK(amp == doctest::Approx(1.0).epsilon(0.02));
  // peak of a coarse DFT sits at 1 Hz
  double best_f = 0, best = 0;
  for (double f = 0.25; f <= 10; f += 0.25) {
    const double a = tone_amplitude(y, 64, f);
    if (a > best) best = a, best_f = f;
  }
  CHECK(best_f == 1.0);
}

TEST_CASE("resample at the same rate is the identity") {
  const auto x = sine(1000, 256, 3.3);
  auto rec = make_recording(256, {x});
  rec.masked = {{0.5, 1.0}};
  const auto out = resample(rec, 256.0);
  CHECK(out.samples[0] == x);
  CHECK(out.masked == rec.masked);
}

TEST_CASE("resample rescales masks") {
  auto rec = make_recording(256, {std::vector<double>(2560, 0.0)});
  rec.masked = {{2.0, 3.5}};
  const auto out = resample(rec, 64.0);
  REQUIRE(out.masked.size() == 1);
  CHECK(out.masked[0].start == doctest::Approx(2.0));
  CHECK(out.masked[0].end == doctest::Approx(3.5));
}

TEST_CASE("artifact rejection below threshold leaves the mask alone") {
  auto rec = make_recording(256, {sine(2560, 256, 2.0, 100.0)});
  rec.masked = {{1.0, 1.5}};
  const auto out = reject_amplitude_artifacts(rec, 500.0);
  CHECK(out.masked == rec.masked);
}

TEST_CASE("artifact rejection widens a single spike") {
  const double dt = 1.0 / 256;
  std::vector<double> x(256 * 20, 0.0);
  x[256 * 10] = 900.0;
  const auto out = reject_amplitude_artifacts(make_recording(256, {x, std::vector<double>(x.size(), 0.0)}), 500.0);
  REQUIRE(out.masked.size() == 1);
  CHECK(out.masked[0].start == doctest::Approx(9.5));
  CHECK(out.masked[0].end == doctest::Approx(10.0 + dt + 0.5));
}

TEST_CASE("artifact rejection merges nearby spikes") {
  const double dt = 1.0 / 256;
  std::vector<double> x(256 * 20, 0.0);
  std::vector<double> y(256 * 20, 0.0);
  x[256 * 10] = -700.0;
  const auto second = static_cast<std::size_t>(std::lround(10.6 * 256));
  y[second] = 600.0;
  const auto out = reject_amplitude_artifacts(make_recording(256, {x, y}), 500.0);
  REQUIRE(out.masked.size() == 1);
  CHECK(out.masked[0].start == doctest::Approx(9.5));
  // the second spike sits on the sample nearest 10.6 s
  CHECK(out.masked[0].end == doctest::Approx(static_cast<double>(second) * dt + dt + 0.5));
}

TEST_CASE("burst voting uses the half-channel rule") {
  const double rate = 256;
  std::vector<std::vector<double>> p(4, power_on(rate, 10, 0, 0, 0));
  p[0] = power_on(rate, 10, 1, 6, 2.0);
  p[2] = power_on(rate, 10, 1, 6, 2.0);
  const std::vector<double> thr(4, 1.0);
  const std::vector<bool> masked(p[0].size(), false);
  const auto ann = detect_bursts_from_power(p, rate, thr, masked);
  REQUIRE(ann.intervals.size() == 1);
  CHECK(ann.intervals[0].start == doctest::Approx(1.0));
  CHECK(ann.intervals[0].end == doctest::Approx(6.0));

  // one channel of four is not enough
  p[2] = power_on(rate, 10, 0, 0, 0);
  CHECK(detect_bursts_from_power(p, rate, thr, masked).intervals.empty());

  // five channels need three
  std::vector<std::vector<double>> q(5, power_on(rate, 10, 1, 6, 2.0));
  q[3] = q[4] = q[2] = power_on(rate, 10, 0, 0, 0);
  CHECK(detect_bursts_from_power(q, rate, std::vector<double>(5, 1.0), masked).intervals.empty());
  q[2] = power_on(rate, 10, 1, 6, 2.0);
  CHECK(detect_bursts_from_power(q, rate, std::vector<double>(5, 1.0), masked).intervals.size() == 1);
}

TEST_CASE("bursts closer than 2 s merge") {
  const double rate = 256;
  std::vector<double> a = power_on(rate, 20, 0, 3, 5.0);
  const auto b = power_on(rate, 20, 4, 8, 5.0);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  const std::vector<std::vector<double>> p{a, a};
  const std::vector<bool> masked(a.size(), false);
  const auto ann = detect_bursts_from_power(p, rate, std::vector<double>{1.0, 1.0}, masked);
  REQUIRE(ann.intervals.size() == 1);
  CHECK(ann.intervals[0].start == doctest::Approx(0.0));
  CHECK(ann.intervals[0].end == doctest::Approx(8.0));

  // a 2.5 s gap stays split
  std::vector<double> c = power_on(rate, 20, 0, 3, 5.0);
  const auto d = power_on(rate, 20, 5.5, 8, 5.0);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += d[i];
  CHECK(detect_bursts_from_power({c, c}, rate, std::vector<double>{1.0, 1.0}, masked).intervals.size() == 2);
}

TEST_CASE("no channel above threshold gives no bursts") {
  const std::vector<std::vector<double>> p(3, std::vector<double>(2560, 0.5));
  const std::vector<bool> masked(2560, false);
  CHECK(detect_bursts_from_power(p, 256, std::vector<double>(3, 1.0), masked).intervals.empty());
}

TEST_CASE("masked samples do not vote") {
  const double rate = 256;
  const auto a = power_on(rate, 20, 2, 12, 5.0);
  std::vector<bool> masked(a.size(), false);
  for (std::size_t i = 256 * 6; i < 256 * 7; ++i) masked[i] = true;
  const auto ann = detect_bursts_from_power({a, a}, rate, std::vector<double>{1.0, 1.0}, masked, 0.5);
  REQUIRE(ann.intervals.size() == 2);
  CHECK(ann.intervals[0].end == doctest::Approx(6.0));
  CHECK(ann.intervals[1].start == doctest::Approx(7.0));
}

TEST_CASE("detect_bursts rejects an empty recording") {
  Recording r;
  r.rate = 256;
  try {
    detect_bursts(r, std::vector<double>{});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyRecording);
  }
}

TEST_CASE("threshold is multiplier times the median") {
  const std::vector<std::vector<double>> p{std::vector<double>(100, 2.0)};
  const std::vector<bool> masked(100, false);
  CHECK(calibrate_threshold(p, masked, 1.5)[0] == doctest::Approx(3.0));
  std::vector<double> v(101);
  std::iota(v.begin(), v.end(), 0.0);
  std::reverse(v.begin(), v.end());
  CHECK(calibrate_threshold({v}, std::vector<bool>(101, false), 1.0)[0] == doctest::Approx(50.0));
}

TEST_CASE("fully masked channel fails calibration") {
  const std::vector<std::vector<double>> p{std::vector<double>(10, 1.0)};
  try {
    calibrate_threshold(p, std::vector<bool>(10, true), 3.0);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Calibration);
  }
}

namespace {

// Channels with a 6 Hz tone whose power is 10x higher inside bursts.
Recording ten_to_one(std::size_t channels, double scale = 1.0) {
  const double rate = 256;
  const std::size_t n = 256 * 80;
  std::vector<std::vector<double>> ch;
  for (std::size_t c = 0; c < channels; ++c) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) / rate;
      const bool burst = std::fmod(t, 20.0) >= 8.0 && std::fmod(t, 20.0) < 14.0;
      const double amp = burst ? std::sqrt(10.0) : 1.0;
      x[i] = scale * amp * std::sin(2 * std::numbers::pi * 6.0 * t + 0.3 * static_cast<double>(c));
    }
    ch.push_back(std::move(x));
  }
  return make_recording(rate, std::move(ch));
}

}  // namespace

TEST_CASE("threshold lands between quiet and burst power") {
  const auto rec = ten_to_one(2);
  const auto power = burst_power(rec);
  const auto thr = calibrate_threshold(rec, 3.0);
  for (std::size_t c = 0; c < 2; ++c) {
    const double quiet = power[c][256 * 2];
    const double loud = power[c][256 * 11];
    CHECK(loud == doctest::Approx(10 * quiet).epsilon(0.02));
    CHECK(thr[c] > quiet);
    CHECK(thr[c] < loud);
  }
  const auto ann = detect_bursts(rec, thr);
  REQUIRE(ann.intervals.size() == 4);
  // The median is the quiet level, so a centered 1.5 s window crosses 3x quiet
  // when 2/9 of it overlaps the burst. The NLEO stencil spans four samples.
  const double lead = 0.75 - 1.5 * 2.0 / 9.0;
  for (std::size_t b = 0; b < 4; ++b) {
    const double t0 = 20.0 * static_cast<double>(b);
    CHECK(std::abs(ann.intervals[b].start - (t0 + 8.0 - lead)) <= 4.0 / 256);
    CHECK(std::abs(ann.intervals[b].end - (t0 + 14.0 + lead)) <= 4.0 / 256);
  }
}

TEST_CASE("detection is invariant to channel order and joint scaling") {
  const auto rec = ten_to_one(4);
  const auto thr = calibrate_threshold(rec, 3.0);
  const auto base = detect_bursts(rec, thr);

  Recording shuffled = rec;
  std::vector<double> thr_shuffled = thr;
  std::reverse(shuffled.samples.begin(), shuffled.samples.end());
  std::reverse(thr_shuffled.begin(), thr_shuffled.end());
  CHECK(detect_bursts(shuffled, thr_shuffled).intervals == base.intervals);

  const double k = 7.0;
  Recording scaled = rec;
  for (auto& ch : scaled.samples)
    for (double& v : ch) v *= k;
  std::vector<double> thr_scaled = thr;
  for (double& t : thr_scaled) t *= k * k;
  CHECK(detect_bursts(scaled, thr_scaled).intervals == base.intervals);
}

TEST_CASE("merged output keeps every gap at least 2 s") {
  CounterRng rng(17, 2);
  const double rate = 64;
  std::vector<double> p(static_cast<std::size_t>(rate * 200), 0.0);
  for (int k = 0; k < 40; ++k) {
    const double a = rng.uniform(0, 195), len = rng.uniform(0.1, 3);
    for (std::size_t i = static_cast<std::size_t>(a * rate); i < std::min(p.size(), static_cast<std::size_t>((a + len) * rate)); ++i)
      p[i] = 2.0;
  }
  const auto ann = detect_bursts_from_power({p}, rate, std::vector<double>{1.0}, std::vector<bool>(p.size(), false));
  for (std::size_t i = 1; i < ann.intervals.size(); ++i)
    CHECK(ann.intervals[i].start - ann.intervals[i - 1].end >= 2.0 - 1e-9);
}

namespace {

std::size_t count_windows(double length, std::size_t channels) {
  std::vector<std::vector<double>> ch(channels, std::vector<double>(64 * 40, 0.0));
  const auto rec = make_recording(64, std::move(ch));
  BurstAnnotation ann;
  ann.intervals.push_back({10.0, 10.0 + length});
  return segment_bursts(rec, ann).size();
}

}  // namespace

TEST_CASE("segment counts") {
  CHECK(count_windows(5.0, 1) == 1);
  CHECK(count_windows(7.5, 2) == 4);
  CHECK(count_windows(4.99, 3) == 0);
  for (double L : {5.0, 5.5, 7.4, 7.5, 9.99, 10.0, 12.6, 20.0}) {
    for (std::size_t c : {1u, 3u}) {
      const std::size_t expect = L < 5.0 ? 0 : c * (static_cast<std::size_t>(std::floor((L - 5.0) / 2.5 + 1e-9)) + 1);
      CHECK(count_windows(L, c) == expect);
      CHECK(expected_segment_count(L, c) == expect);
    }
  }
}

TEST_CASE("segments carry values and provenance") {
  std::vector<double> ramp(64 * 40);
  std::iota(ramp.begin(), ramp.end(), 0.0);
  auto rec = make_recording(64, {ramp});
  rec.id = "rec7";
  BurstAnnotation ann;
  ann.intervals.push_back({3.0, 10.5});
  const auto segs = segment_bursts(rec, ann);
  REQUIRE(segs.size() == 2);
  CHECK(segs[1].values.size() == kSegmentLength);
  CHECK(segs[1].values[0] == 64 * 5.5);
  CHECK(segs[1].provenance.recording_id == "rec7");
  CHECK(segs[1].provenance.channel == "ch0");
  CHECK(segs[1].provenance.start == doctest::Approx(5.5));
}

TEST_CASE("segments touching a mask are dropped") {
  auto rec = make_recording(64, {std::vector<double>(64 * 40, 0.0)});
  rec.masked = {{7.0, 7.2}};
  BurstAnnotation ann;
  ann.intervals.push_back({0.0, 15.0});
  // windows start at 0, 2.5, 5, 7.5, 10; those at 2.5 and 5 cover 7.0
  const auto segs = segment_bursts(rec, ann);
  CHECK(segs.size() == 3);
}

TEST_CASE("normalize endpoints and midpoint") {
  const NormStats st{-2.0, 6.0, Modality::Eeg};
  CHECK(normalize_value(6.0, st) == 1.0);
  CHECK(normalize_value(-2.0, st) == -1.0);
  CHECK(normalize_value(2.0, st) == 0.0);
}

TEST_CASE("normalize round trip") {
  CounterRng rng(3, 3);
  Segment s;
  s.values.resize(320);
  for (double& v : s.values) v = rng.uniform(-150, 220);
  const auto st = compute_norm_stats(std::span<const Segment>(&s, 1));
  CHECK(st.min == *std::min_element(s.values.begin(), s.values.end()));
  CHECK(st.max == *std::max_element(s.values.begin(), s.values.end()));
  const auto n = normalize(s, st);
  for (double v : n.values) CHECK(std::abs(v) <= 1.0);
  const auto back = denormalize(n, st);
  double worst = 0;
  for (std::size_t i = 0; i < s.values.size(); ++i) worst = std::max(worst, std::abs(back.values[i] - s.values[i]));
  CHECK(worst <= 1e-6 * (st.max - st.min));
}

TEST_CASE("normalize clamps and counts out-of-range values") {
  const NormStats st{-1.0, 1.0, Modality::Fmeg};
  Segment s;
  s.modality = Modality::Fmeg;
  s.values = {0.5, 3.0, -4.0, 1.0};
  std::size_t clamped = 0;
  const auto n = normalize(s, st, &clamped);
  CHECK(clamped == 2);
  CHECK(n.values[1] == 1.0);
  CHECK(n.values[2] == -1.0);
}

TEST_CASE("normalize errors") {
  Segment s;
  s.values = {1.0, 1.0};
  try {
    compute_norm_stats(std::span<const Segment>(&s, 1));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateStats);
  }
  try {
    normalize(s, NormStats{0.0, 1.0, Modality::Fmeg});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Usage);
  }
}

TEST_CASE("recording container round trip") {
  const fs::path dir = fs::temp_directory_path() / "ddib_test_recording";
  fs::remove_all(dir);
  auto rec = make_recording(256, {sine(512, 256, 3.0, 10.0), sine(512, 256, 5.0, 20.0)}, Modality::Fmeg);
  rec.masked = {{0.25, 0.5}};
  save_recording(rec, dir);
  const auto back = load_recording(dir);
  CHECK(back.modality == Modality::Fmeg);
  CHECK(back.rate == 256);
  CHECK(back.channels == rec.channels);
  CHECK(back.masked == rec.masked);
  for (std::size_t c = 0; c < 2; ++c)
    for (std::size_t i = 0; i < 512; ++i)
      CHECK(back.samples[c][i] == static_cast<double>(static_cast<float>(rec.samples[c][i])));
  // little-endian float32 on disk
  const auto bytes = fs::file_size(dir / "ch00.f32");
  CHECK(bytes == 512 * 4);
  fs::remove_all(dir);
}

TEST_CASE("dataset container round trip") {
  const fs::path dir = fs::temp_directory_path() / "ddib_test_dataset";
  fs::remove_all(dir);
  SegmentDataset ds;
  ds.modality = Modality::Eeg;
  ds.normalized = true;
  ds.stats = NormStats{-3.0, 4.0, Modality::Eeg};
  for (int k = 0; k < 3; ++k) {
    Segment s;
    s.values = sine(320, 64, 2.0 + k, 0.9);
    s.provenance = {"r" + std::to_string(k), "c1", 2.5 * k};
    ds.segments.push_back(s);
  }
  save_dataset(ds, dir);
  CHECK(fs::file_size(dir / "segments.f32") == 3 * 320 * 4);
  const auto back = load_dataset(dir);
  REQUIRE(back.segments.size() == 3);
  CHECK(back.normalized);
  CHECK(back.stats->min == -3.0);
  CHECK(back.segments[2].provenance.recording_id == "r2");
  CHECK(back.segments[2].provenance.start == 5.0);
  CHECK(back.segments[1].values[17] == static_cast<double>(static_cast<float>(ds.segments[1].values[17])));
  fs::remove_all(dir);
}

}  // TEST_SUITE
