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

#include "preprocess/recording.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <json.hpp>

#include "common/binary_io.hpp"

namespace ddib {

std::vector<Interval> canonicalize(std::vector<Interval> intervals) {
  std::erase_if(intervals, [](const Interval& iv) { return !(iv.end > iv.start); });
  std::sort(intervals.begin(), intervals.end(),
            [](const Interval& a, const Interval& b) { return a.start < b.start; });
  std::vector<Interval> out;
  for (const auto& iv : intervals) {
    if (!out.empty() && iv.start <= out.back().end)
      out.back().end = std::max(out.back().end, iv.end);
    else
      out.push_back(iv);
  }
  return out;
}

std::vector<Interval> merge_short_gaps(std::vector<Interval> intervals, double min_gap) {
  intervals = canonicalize(std::move(intervals));
  std::vector<Interval> out;
  for (const auto& iv : intervals) {
    if (!out.empty() && iv.start - out.back().end < min_gap)
      out.back().end = std::max(out.back().end, iv.end);
    else
      out.push_back(iv);
  }
  return out;
}

bool any_overlap(const std::vector<Interval>& sorted, const Interval& probe) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), probe.start,
                             [](const Interval& iv, double t) { return iv.end <= t; });
  return it != sorted.end() && it->overlaps(probe);
}

std::vector<bool> Recording::sample_mask() const {
  std::vector<bool> mask(n_samples(), false);
  for (const auto& iv : masked) {
    const auto n = static_cast<std::ptrdiff_t>(mask.size());
    auto first = static_cast<std::ptrdiff_t>(std::ceil(iv.start * rate - 1e-9));
    auto last = static_cast<std::ptrdiff_t>(std::ceil(iv.end * rate - 1e-9));
    first = std::clamp<std::ptrdiff_t>(first, 0, n);
    last = std::clamp<std::ptrdiff_t>(last, 0, n);
    for (auto i = first; i < last; ++i) mask[static_cast<std::size_t>(i)] = true;
  }
  return mask;
}

void Recording::validate() {
  require(rate > 0, ErrorCode::InvalidArgument, "recording rate must be positive");
  require(channels.size() == samples.size(), ErrorCode::InvalidArgument,
          "channel label count does not match sample arrays");
  for (const auto& ch : samples)
    require(ch.size() == n_samples(), ErrorCode::InvalidArgument,
            "recording '" + id + "' has channels of unequal length");
  const double dur = duration();
  for (auto& iv : masked) {
    iv.start = std::max(0.0, iv.start);
    iv.end = std::min(dur, iv.end);
  }
  masked = canonicalize(std::move(masked));
}

void save_recording(const Recording& rec, const std::filesystem::path& dir) {
  io::ensure_dir(dir);
  nlohmann::json j;
  j["format"] = "ddib-recording";
  j["version"] = 1;
  j["id"] = rec.id;
  j["modality"] = to_string(rec.modality);
  j["units"] = units_of(rec.modality);
  j["rate"] = rec.rate;
  j["n_samples"] = rec.n_samples();
  j["channels"] = rec.channels;
  auto masked = nlohmann::json::array();
  for (const auto& iv : rec.masked) masked.push_back({iv.start, iv.end});
  j["masked"] = masked;
  std::vector<std::string> files;
  for (std::size_t c = 0; c < rec.n_channels(); ++c) {
    auto name = fmt::format("ch{:02d}.f32", c);
    io::write_f32(dir / name, std::span<const double>(rec.samples[c]));
    files.push_back(name);
  }
  j["channel_files"] = files;
  io::write_text(dir / "recording.json", j.dump(2) + "\n");
}

Recording load_recording(const std::filesystem::path& dir) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(io::read_text(dir / "recording.json"));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Format, "bad recording manifest in " + dir.string() + ": " + e.what());
  }
  Recording rec;
  try {
    rec.id = j.value("id", dir.filename().string());
    rec.modality = modality_or_throw(j.at("modality").get<std::string>());
    rec.rate = j.at("rate").get<double>();
    rec.channels = j.at("channels").get<std::vector<std::string>>();
    const auto files = j.at("channel_files").get<std::vector<std::string>>();
    require(files.size() == rec.channels.size(), ErrorCode::Format,
            "channel_files/channels length mismatch in " + dir.string());
    for (const auto& f : files) rec.samples.push_back(io::read_f32_as_double(dir / f));
    for (const auto& m : j.at("masked")) rec.masked.push_back({m.at(0).get<double>(), m.at(1).get<double>()});
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Format, "bad recording manifest in " + dir.string() + ": " + e.what());
  }
  rec.validate();
  return rec;
}

std::vector<Recording> load_recordings(const std::filesystem::path& root) {
  namespace fs = std::filesystem;
  require(fs::is_directory(root), ErrorCode::Io, "not a directory: " + root.string());
  std::vector<fs::path> dirs;
  for (const auto& e : fs::directory_iterator(root))
    if (e.is_directory() && fs::exists(e.path() / "recording.json")) dirs.push_back(e.path());
  std::sort(dirs.begin(), dirs.end());
  std::vector<Recording> out;
  out.reserve(dirs.size());
  for (const auto& d : dirs) out.push_back(load_recording(d));
  return out;
}

}  // namespace ddib
