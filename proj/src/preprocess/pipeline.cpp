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

#include "preprocess/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include "common/binary_io.hpp"
#include "common/rng.hpp"
#include "preprocess/artifacts.hpp"
#include "preprocess/filter.hpp"
#include "preprocess/resample.hpp"

namespace ddib {

RecordingOutcome preprocess_recording(const Recording& rec, const PreprocessOptions& opts) {
  require(rec.n_channels() > 0, ErrorCode::EmptyRecording, "recording '" + rec.id + "' has no channels");
  Recording filtered = bandpass_zero_phase(rec, opts.band_lo, opts.band_hi);
  filtered = reject_amplitude_artifacts(
      filtered, opts.artifact_threshold.value_or(default_artifact_threshold(rec.modality)),
      opts.artifact_margin);

  const Recording rec256 = resample(filtered, opts.analysis_rate);
  const auto power = burst_power(rec256, opts.detection.smoothing_window);
  const auto mask = rec256.sample_mask();

  RecordingOutcome out;
  out.id = rec.id;
  out.masked = filtered.masked;
  out.thresholds = calibrate_threshold(power, mask, opts.nleo_multiplier);
  out.bursts = detect_bursts_from_power(power, rec256.rate, out.thresholds, mask, opts.detection.min_gap);

  const Recording rec64 = resample(filtered, kSegmentRate);
  out.segments = segment_bursts(rec64, out.bursts, opts.segmentation);
  return out;
}

RecordingSplit split_recordings(std::vector<std::string> ids, double train_fraction, std::uint64_t seed) {
  require(train_fraction > 0 && train_fraction < 1, ErrorCode::InvalidArgument,
          "train fraction must lie in (0, 1)");
  std::sort(ids.begin(), ids.end());
  CounterRng rng(seed, 0x5317);
  for (std::size_t i = ids.size(); i > 1; --i) std::swap(ids[i - 1], ids[rng.below(i)]);
  const std::size_t n = ids.size();
  auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(n)));
  if (n >= 2) n_train = std::clamp<std::size_t>(n_train, 1, n - 1);
  RecordingSplit s;
  s.train.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n_train));
  s.test.assign(ids.begin() + static_cast<std::ptrdiff_t>(n_train), ids.end());
  std::sort(s.train.begin(), s.train.end());
  std::sort(s.test.begin(), s.test.end());
  return s;
}

PreprocessResult preprocess_recordings(const std::vector<Recording>& recs, Modality modality,
                                       const PreprocessOptions& opts) {
  require(!recs.empty(), ErrorCode::InvalidArgument, "no recordings to preprocess");
  PreprocessResult result;
  result.modality = modality;
  std::vector<std::string> ids;
  for (const auto& rec : recs) {
    require(rec.modality == modality, ErrorCode::Usage,
            fmt::format("recording '{}' is {}, expected {}", rec.id, to_string(rec.modality), to_string(modality)));
    result.outcomes.push_back(preprocess_recording(rec, opts));
    ids.push_back(rec.id);
    spdlog::debug("{}: {} bursts, {} segments", rec.id, result.outcomes.back().bursts.intervals.size(),
                  result.outcomes.back().segments.size());
  }
  result.split = split_recordings(ids, opts.train_fraction, opts.seed);
  const std::set<std::string> train_ids(result.split.train.begin(), result.split.train.end());

  std::vector<Segment> train_raw, test_raw;
  for (auto& o : result.outcomes) {
    auto& dst = train_ids.count(o.id) ? train_raw : test_raw;
    std::move(o.segments.begin(), o.segments.end(), std::back_inserter(dst));
    o.segments.clear();
  }
  std::vector<Segment> all;
  all.reserve(train_raw.size() + test_raw.size());
  all.insert(all.end(), train_raw.begin(), train_raw.end());
  if (!opts.train_only_stats) all.insert(all.end(), test_raw.begin(), test_raw.end());
  require(!all.empty(), ErrorCode::InvalidArgument,
          fmt::format("no {} segments survived preprocessing", to_string(modality)));
  result.stats = compute_norm_stats(all);

  auto build = [&](const std::vector<Segment>& raw) {
    SegmentDataset ds;
    ds.modality = modality;
    ds.normalized = true;
    ds.stats = result.stats;
    ds.segments.reserve(raw.size());
    for (const auto& s : raw) ds.segments.push_back(normalize(s, result.stats, &result.clamped));
    return ds;
  };
  result.train = build(train_raw);
  result.test = build(test_raw);
  if (result.clamped > 0)
    spdlog::warn("{}: {} values clamped to [-1, 1] during normalization", to_string(modality), result.clamped);
  return result;
}

void write_preprocess_result(const PreprocessResult& result, const std::filesystem::path& out) {
  io::ensure_dir(out);
  save_dataset(result.train, out / "train");
  save_dataset(result.test, out / "test");
  save_norm_stats(result.stats, out / "norm_stats.json");

  std::string bursts = "recording\tstart\tend\tlabel\n";
  std::string thresholds = "recording\tchannel\tthreshold\n";
  for (const auto& o : result.outcomes) {
    for (const auto& iv : o.bursts.intervals) bursts += fmt::format("{}\t{:.6f}\t{:.6f}\tburst\n", o.id, iv.start, iv.end);
    for (std::size_t c = 0; c < o.thresholds.size(); ++c)
      thresholds += fmt::format("{}\t{}\t{:.9g}\n", o.id, c, o.thresholds[c]);
  }
  io::write_text(out / "bursts.tsv", bursts);
  io::write_text(out / "thresholds.tsv", thresholds);

  nlohmann::json split{{"modality", to_string(result.modality)},
                       {"train", result.split.train},
                       {"test", result.split.test},
                       {"train_segments", result.train.segments.size()},
                       {"test_segments", result.test.segments.size()},
                       {"clamped_values", result.clamped}};
  io::write_text(out / "split.json", split.dump(2) + "\n");
}

}  // namespace ddib
