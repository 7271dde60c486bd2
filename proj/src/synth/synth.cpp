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

#include "synth/synth.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>
#include <sstream>

#include <fmt/format.h>

#include "common/binary_io.hpp"
#include "common/rng.hpp"

namespace ddib {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTaper = 0.25;  // burst onset/offset ramp, seconds

const std::array<const char*, 10> kEegLabels = {"Fp2-C4", "Fp1-C3", "C4-O2", "C3-O1", "Fp2-T4",
                                                "Fp1-T3", "T4-O2",  "T3-O1", "Fz-Cz", "Cz-Pz"};

enum Stream : std::uint64_t { kTimeline = 0, kBackground = 1, kEvents = 2, kArtifacts = 3 };

CounterRng stream(const SynthConfig& cfg, std::size_t index, Stream s, std::size_t channel = 0) {
  return CounterRng(cfg.rng_seed, (static_cast<std::uint64_t>(index) << 24) |
                                      (static_cast<std::uint64_t>(channel) << 4) | s);
}

EventKind pick_event(const SynthConfig& cfg, CounterRng& rng) {
  const double total = cfg.event_mix[0] + cfg.event_mix[1] + cfg.event_mix[2];
  double u = rng.uniform() * total;
  for (int k = 0; k < 3; ++k) {
    if (u < cfg.event_mix[k]) return static_cast<EventKind>(k);
    u -= cfg.event_mix[k];
  }
  return EventKind::Oscillatory;
}

// Unit-RMS noise with amplitude spectrum ~ max(f, 0.2 Hz)^(-tilt / 2).
std::vector<double> colored_noise(std::size_t n, double rate, double tilt, CounterRng& rng) {
  std::vector<double> x(n);
  for (auto& v : x) v = rng.normal();
  if (n < 2) return x;
  std::vector<std::complex<double>> spec(n / 2 + 1);
  auto* cs = reinterpret_cast<fftw_complex*>(spec.data());
  fftw_plan fwd = fftw_plan_dft_r2c_1d(static_cast<int>(n), x.data(), cs, FFTW_ESTIMATE);
  fftw_execute(fwd);
  fftw_destroy_plan(fwd);
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const double f = std::max(static_cast<double>(k) * rate / static_cast<double>(n), 0.2);
    spec[k] *= std::pow(f, -tilt / 2.0);
  }
  spec[0] = 0.0;
  fftw_plan inv = fftw_plan_dft_c2r_1d(static_cast<int>(n), cs, x.data(), FFTW_ESTIMATE);
  fftw_execute(inv);
  fftw_destroy_plan(inv);
  double ss = 0.0;
  for (double v : x) ss += v * v;
  const double rms = std::sqrt(ss / static_cast<double>(n));
  if (rms > 0)
    for (auto& v : x) v /= rms;
  return x;
}

// Adds one event starting at sample i0; returns its length in samples.
std::size_t add_event(EventKind kind, std::vector<double>& out, std::size_t i0, std::size_t i_end,
                      double rate, CounterRng& rng) {
  const double amp = rng.uniform(0.6, 1.0);
  std::size_t len = 0;
  switch (kind) {
    case EventKind::DeltaBrush: {
      // One slow-wave cycle with a fast ripple nested in its negative phase.
      const double fs = rng.uniform(0.5, 1.5);
      const double fr = rng.uniform(8.0, 20.0);
      const double ripple = rng.uniform(0.25, 0.45);
      const double phase = rng.uniform(0.0, 2.0 * kPi);
      len = static_cast<std::size_t>(rate / fs);
      for (std::size_t k = 0; k < len && i0 + k < i_end; ++k) {
        const double t = static_cast<double>(k) / rate;
        const double slow = -std::sin(2.0 * kPi * fs * t);
        const double env = std::max(0.0, -slow);
        out[i0 + k] += amp * (slow + ripple * (0.3 + env) * std::sin(2.0 * kPi * fr * t + phase));
      }
      break;
    }
    case EventKind::FrontalTransient: {
      // Biphasic sharp transient (Gaussian derivative) riding on a brief theta tail.
      const double width = rng.uniform(0.08, 0.16);
      const double dur = rng.uniform(1.0, 1.6);
      const double ft = rng.uniform(4.0, 7.0);
      len = static_cast<std::size_t>(dur * rate);
      const double center = 0.35 * dur;
      for (std::size_t k = 0; k < len && i0 + k < i_end; ++k) {
        const double t = static_cast<double>(k) / rate;
        const double u = (t - center) / width;
        const double sharp = -u * std::exp(0.5 - 0.5 * u * u);
        const double tail = 0.3 * std::sin(2.0 * kPi * ft * t) * std::exp(-t / (0.5 * dur));
        out[i0 + k] += amp * (sharp + tail);
      }
      break;
    }
    case EventKind::Oscillatory: {
      const double f = rng.uniform(4.0, 12.0);
      const double dur = rng.uniform(1.0, 2.0);
      const double phase = rng.uniform(0.0, 2.0 * kPi);
      len = static_cast<std::size_t>(dur * rate);
      for (std::size_t k = 0; k < len && i0 + k < i_end; ++k) {
        const double t = static_cast<double>(k) / rate;
        const double hann = 0.5 - 0.5 * std::cos(2.0 * kPi * t / dur);
        out[i0 + k] += amp * std::sqrt(hann) * std::sin(2.0 * kPi * f * t + phase);
      }
      break;
    }
  }
  return std::max<std::size_t>(len, 1);
}

}  // namespace

const char* to_string(EventKind k) noexcept {
  switch (k) {
    case EventKind::DeltaBrush: return "delta_brush";
    case EventKind::FrontalTransient: return "frontal_transient";
    case EventKind::Oscillatory: return "oscillatory";
  }
  return "unknown";
}

void SynthConfig::validate() const {
  require(n_recordings >= 1 && n_channels >= 1, ErrorCode::Config, "synth needs recordings and channels");
  require(duration > 0 && rate > 0, ErrorCode::Config, "synth duration and rate must be positive");
  require(burst_len.lo > 0 && burst_len.lo <= burst_len.hi, ErrorCode::Config, "burst_len range invalid");
  require(ibi_len.lo > 0 && ibi_len.lo <= ibi_len.hi, ErrorCode::Config, "ibi_len range invalid");
  require(event_mix[0] >= 0 && event_mix[1] >= 0 && event_mix[2] >= 0 &&
              event_mix[0] + event_mix[1] + event_mix[2] > 0,
          ErrorCode::Config, "event_mix weights must be nonnegative with a positive sum");
  require(amplitude_scale > 0 && burst_to_background > 0, ErrorCode::Config,
          "amplitude_scale and burst_to_background must be positive");
  require(artifact_rate >= 0, ErrorCode::Config, "artifact_rate must be nonnegative");
}

SynthConfig default_synth_config(Modality m) {
  SynthConfig cfg;
  cfg.modality = m;
  if (m == Modality::Fmeg) {
    cfg.spectral_tilt = 1.0;
    cfg.event_mix = {0.15, 0.1, 0.75};
    cfg.amplitude_scale = 400.0;
    cfg.rng_seed = 2;
  }
  return cfg;
}

BurstAnnotation GroundTruth::annotation() const {
  BurstAnnotation a;
  for (const auto& b : bursts) a.intervals.push_back(b.interval);
  return a;
}

std::string recording_id(Modality m, std::size_t index) {
  return fmt::format("{}_{:03d}", to_string(m), index);
}

std::pair<Recording, GroundTruth> generate_recording(const SynthConfig& cfg, std::size_t index) {
  cfg.validate();
  const auto n = static_cast<std::size_t>(std::llround(cfg.duration * cfg.rate));

  GroundTruth truth;
  truth.recording_id = recording_id(cfg.modality, index);
  {
    auto rng = stream(cfg, index, kTimeline);
    double t = 0.0;
    while (t < cfg.duration) {
      const double len = rng.uniform(cfg.burst_len.lo, cfg.burst_len.hi);
      const EventKind label = pick_event(cfg, rng);
      truth.bursts.push_back({{t, std::min(t + len, cfg.duration)}, label});
      t += len + rng.uniform(cfg.ibi_len.lo, cfg.ibi_len.hi);
    }
  }

  Recording rec;
  rec.id = truth.recording_id;
  rec.modality = cfg.modality;
  rec.rate = cfg.rate;

  std::vector<bool> in_burst(n, false);
  std::vector<double> taper(n, 0.0);
  for (const auto& b : truth.bursts) {
    const auto i0 = static_cast<std::size_t>(std::llround(b.interval.start * cfg.rate));
    const auto i1 = std::min(n, static_cast<std::size_t>(std::llround(b.interval.end * cfg.rate)));
    for (std::size_t i = i0; i < i1; ++i) {
      in_burst[i] = true;
      const double from_start = static_cast<double>(i - i0) / cfg.rate;
      const double to_end = static_cast<double>(i1 - i) / cfg.rate;
      const double edge = std::min({from_start, to_end, kTaper}) / kTaper;
      taper[i] = 0.5 - 0.5 * std::cos(kPi * edge);
    }
  }

  for (std::size_t c = 0; c < cfg.n_channels; ++c) {
    rec.channels.push_back(cfg.modality == Modality::Eeg && cfg.n_channels <= kEegLabels.size()
                               ? std::string(kEegLabels[c])
                               : fmt::format("{}{:02d}", cfg.modality == Modality::Eeg ? "EEG" : "MEG", c + 1));

    auto ev_rng = stream(cfg, index, kEvents, c);
    std::vector<double> events(n, 0.0);
    for (const auto& b : truth.bursts) {
      const auto i0 = static_cast<std::size_t>(std::llround(b.interval.start * cfg.rate));
      const auto i1 = std::min(n, static_cast<std::size_t>(std::llround(b.interval.end * cfg.rate)));
      for (std::size_t i = i0; i < i1;) i += add_event(b.label, events, i, i1, cfg.rate, ev_rng);
    }
    const double gain = ev_rng.uniform(0.7, 1.0);
    double peak = 0.0, burst_ss = 0.0;
    std::size_t burst_n = 0, ibi_n = 0;
    for (std::size_t i = 0; i < n; ++i) {
      events[i] *= taper[i];
      peak = std::max(peak, std::abs(events[i]));
      if (in_burst[i]) {
        burst_ss += events[i] * events[i];
        ++burst_n;
      } else {
        ++ibi_n;
      }
    }
    const double ev_scale = peak > 0 ? 0.8 * gain * cfg.amplitude_scale / peak : 0.0;
    const double event_rms = burst_n ? ev_scale * std::sqrt(burst_ss / static_cast<double>(burst_n)) : 0.0;

    auto bg_rng = stream(cfg, index, kBackground, c);
    auto background = colored_noise(n, cfg.rate, cfg.spectral_tilt, bg_rng);
    double ibi_ss = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (!in_burst[i]) ibi_ss += background[i] * background[i];
    const double bg_rms = ibi_n ? std::sqrt(ibi_ss / static_cast<double>(ibi_n)) : 1.0;
    const double target_bg = (event_rms > 0 ? event_rms : 0.1 * cfg.amplitude_scale) / cfg.burst_to_background;
    const double bg_scale = bg_rms > 0 ? target_bg / bg_rms : 0.0;

    std::vector<double> ch(n);
    for (std::size_t i = 0; i < n; ++i)
      ch[i] = std::clamp(ev_scale * events[i] + bg_scale * background[i], -cfg.amplitude_scale,
                         cfg.amplitude_scale);
    rec.samples.push_back(std::move(ch));
  }

  if (cfg.artifact_rate > 0) {
    // Spikes land on every channel and exceed the modality's rejection level.
    auto rng = stream(cfg, index, kArtifacts);
    const double spike = 3.0 * (cfg.modality == Modality::Eeg ? 500.0 : 2000.0);
    const double mean_gap = 60.0 / cfg.artifact_rate;
    for (double t = -mean_gap * std::log(1.0 - rng.uniform()); t < cfg.duration;
         t += -mean_gap * std::log(1.0 - rng.uniform())) {
      const auto i = static_cast<std::size_t>(t * cfg.rate);
      if (i >= n) break;
      for (auto& ch : rec.samples) ch[i] += spike;
    }
  }
  rec.validate();
  return {std::move(rec), std::move(truth)};
}

void write_ground_truth(const std::vector<GroundTruth>& truth, const std::filesystem::path& file) {
  std::string text;
  for (const auto& g : truth)
    for (const auto& b : g.bursts)
      text += fmt::format("{}\t{:.6f}\t{:.6f}\t{}\n", g.recording_id, b.interval.start, b.interval.end,
                          to_string(b.label));
  io::write_text(file, text);
}

std::vector<GroundTruth> read_ground_truth(const std::filesystem::path& file) {
  std::istringstream in(io::read_text(file));
  std::vector<GroundTruth> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string id, label;
    double start = 0, end = 0;
    if (!(ls >> id >> start >> end >> label)) fail(ErrorCode::Format, "bad ground truth line: " + line);
    EventKind kind = EventKind::Oscillatory;
    if (label == "delta_brush") kind = EventKind::DeltaBrush;
    else if (label == "frontal_transient") kind = EventKind::FrontalTransient;
    else if (label != "oscillatory") fail(ErrorCode::Format, "unknown event label: " + label);
    if (out.empty() || out.back().recording_id != id) out.push_back({id, {}});
    out.back().bursts.push_back({{start, end}, kind});
  }
  return out;
}

DetectionScore score_bursts(const std::vector<Interval>& detected, const std::vector<Interval>& truth,
                            double min_iou) {
  struct Pair {
    double iou;
    std::size_t d, t;
  };
  std::vector<Pair> pairs;
  for (std::size_t d = 0; d < detected.size(); ++d)
    for (std::size_t t = 0; t < truth.size(); ++t) {
      const double inter = std::max(0.0, std::min(detected[d].end, truth[t].end) -
                                             std::max(detected[d].start, truth[t].start));
      const double uni = detected[d].length() + truth[t].length() - inter;
      if (uni > 0 && inter / uni >= min_iou) pairs.push_back({inter / uni, d, t});
    }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) { return a.iou > b.iou; });
  std::vector<bool> used_d(detected.size()), used_t(truth.size());
  DetectionScore s;
  s.detected = detected.size();
  s.truth = truth.size();
  for (const auto& p : pairs) {
    if (used_d[p.d] || used_t[p.t]) continue;
    used_d[p.d] = used_t[p.t] = true;
    ++s.true_positives;
  }
  return accumulate(s, {});
}

DetectionScore accumulate(const DetectionScore& a, const DetectionScore& b) {
  DetectionScore s;
  s.true_positives = a.true_positives + b.true_positives;
  s.detected = a.detected + b.detected;
  s.truth = a.truth + b.truth;
  s.precision = s.detected ? static_cast<double>(s.true_positives) / static_cast<double>(s.detected) : 1.0;
  s.recall = s.truth ? static_cast<double>(s.true_positives) / static_cast<double>(s.truth) : 1.0;
  s.f1 = (s.precision + s.recall) > 0 ? 2.0 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
  return s;
}

namespace {

ModalityData build_modality(const SynthConfig& cfg, const PreprocessOptions& opts) {
  require(cfg.n_recordings >= 5, ErrorCode::Config, "generate_dataset needs at least 5 recordings per modality");
  ModalityData md;
  for (std::size_t i = 0; i < cfg.n_recordings; ++i) {
    auto [rec, truth] = generate_recording(cfg, i);
    md.recordings.push_back(std::move(rec));
    md.truth.push_back(std::move(truth));
  }
  md.processed = preprocess_recordings(md.recordings, cfg.modality, opts);
  for (std::size_t i = 0; i < md.truth.size(); ++i)
    md.detection = accumulate(md.detection, score_bursts(md.processed.outcomes[i].bursts.intervals,
                                                         md.truth[i].annotation().intervals));
  return md;
}

}  // namespace

SynthDataset generate_dataset(const SynthConfig& eeg, const SynthConfig& fmeg, const PreprocessOptions& opts) {
  require(eeg.modality == Modality::Eeg && fmeg.modality == Modality::Fmeg, ErrorCode::Config,
          "generate_dataset expects an EEG and an fMEG config");
  return {build_modality(eeg, opts), build_modality(fmeg, opts)};
}

void write_raw(const std::vector<Recording>& recs, const std::filesystem::path& dir) {
  for (const auto& r : recs) save_recording(r, dir / r.id);
}

}  // namespace ddib
