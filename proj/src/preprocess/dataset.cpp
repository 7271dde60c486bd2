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

#include "preprocess/dataset.hpp"

#include <json.hpp>

#include "common/binary_io.hpp"

namespace ddib {

void save_norm_stats(const NormStats& st, const std::filesystem::path& file) {
  nlohmann::json j{{"modality", to_string(st.modality)}, {"units", units_of(st.modality)},
                   {"min", st.min}, {"max", st.max}};
  io::write_text(file, j.dump(2) + "\n");
}

NormStats load_norm_stats(const std::filesystem::path& file) {
  try {
    const auto j = nlohmann::json::parse(io::read_text(file));
    NormStats st{j.at("min").get<double>(), j.at("max").get<double>(),
                 modality_or_throw(j.at("modality").get<std::string>())};
    require(st.max > st.min, ErrorCode::DegenerateStats, "stored stats have max <= min: " + file.string());
    return st;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Format, "bad norm stats file " + file.string() + ": " + e.what());
  }
}

void save_dataset(const SegmentDataset& ds, const std::filesystem::path& dir) {
  io::ensure_dir(dir);
  nlohmann::json j;
  j["format"] = "ddib-segments";
  j["version"] = 1;
  j["modality"] = to_string(ds.modality);
  j["rate"] = kSegmentRate;
  j["length"] = kSegmentLength;
  j["count"] = ds.segments.size();
  j["normalized"] = ds.normalized;
  auto recs = nlohmann::json::array();
  std::string packed;
  packed.reserve(ds.segments.size() * kSegmentLength * 4);
  for (const auto& seg : ds.segments) {
    require(seg.values.size() == kSegmentLength, ErrorCode::InvalidArgument, "segment length must be 320");
    recs.push_back({seg.provenance.recording_id, seg.provenance.channel, seg.provenance.start});
    std::vector<float> f(seg.values.begin(), seg.values.end());
    io::append_f32_le(packed, f);
  }
  j["records"] = recs;
  if (ds.stats) {
    j["norm_stats"] = "norm_stats.json";
    save_norm_stats(*ds.stats, dir / "norm_stats.json");
  }
  io::write_text(dir / "segments.f32", packed);
  io::write_text(dir / "manifest.json", j.dump(1) + "\n");
}

SegmentDataset load_dataset(const std::filesystem::path& dir) {
  SegmentDataset ds;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(io::read_text(dir / "manifest.json"));
    ds.modality = modality_or_throw(j.at("modality").get<std::string>());
    ds.normalized = j.value("normalized", false);
    require(j.at("length").get<std::size_t>() == kSegmentLength, ErrorCode::Format,
            "unsupported segment length in " + dir.string());
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Format, "bad segment manifest in " + dir.string() + ": " + e.what());
  }
  if (j.contains("norm_stats")) ds.stats = load_norm_stats(dir / j["norm_stats"].get<std::string>());
  const auto flat = io::read_f32(dir / "segments.f32");
  const auto& recs = j.at("records");
  require(flat.size() == recs.size() * kSegmentLength, ErrorCode::Format,
          "segments.f32 size does not match manifest count in " + dir.string());
  ds.segments.reserve(recs.size());
  for (std::size_t i = 0; i < recs.size(); ++i) {
    Segment seg;
    seg.modality = ds.modality;
    seg.values.assign(flat.begin() + static_cast<std::ptrdiff_t>(i * kSegmentLength),
                      flat.begin() + static_cast<std::ptrdiff_t>((i + 1) * kSegmentLength));
    seg.provenance = {recs[i].at(0).get<std::string>(), recs[i].at(1).get<std::string>(),
                      recs[i].at(2).get<double>()};
    ds.segments.push_back(std::move(seg));
  }
  return ds;
}

}  // namespace ddib
