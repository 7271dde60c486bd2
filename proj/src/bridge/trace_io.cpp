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

#include "bridge/trace_io.hpp"

#include <sstream>

#include <json.hpp>

#include "common/binary_io.hpp"
#include "common/error.hpp"

namespace ddib {

namespace {

using nlohmann::json;

json stats_json(const std::optional<NormStats>& s) {
  if (!s) return nullptr;
  return {{"min", s->min}, {"max", s->max}, {"modality", to_string(s->modality)}};
}

std::optional<NormStats> stats_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return NormStats{j.at("min").get<double>(), j.at("max").get<double>(),
                   modality_or_throw(j.at("modality").get<std::string>())};
}

void pack(const std::filesystem::path& file, const std::vector<const std::vector<double>*>& rows) {
  std::vector<double> flat;
  for (const auto* r : rows) flat.insert(flat.end(), r->begin(), r->end());
  io::write_f32(file, std::span<const double>(flat));
}

std::vector<std::vector<double>> unpack(const std::filesystem::path& file, std::size_t count, std::size_t len) {
  const auto flat = io::read_f32_as_double(file);
  require(flat.size() == count * len, ErrorCode::Format, file.string() + " has the wrong size");
  std::vector<std::vector<double>> rows(count);
  for (std::size_t i = 0; i < count; ++i)
    rows[i].assign(flat.begin() + static_cast<std::ptrdiff_t>(i * len),
                   flat.begin() + static_cast<std::ptrdiff_t>((i + 1) * len));
  return rows;
}

}  // namespace

void save_traces(const TraceSet& set, const std::filesystem::path& dir) {
  io::ensure_dir(dir);
  const std::size_t len = set.traces.empty() ? 0 : set.traces.front().source.size();
  json recs = json::array();
  std::vector<const std::vector<double>*> src, lat, out, rec, lat2;
  for (const auto& t : set.traces) {
    require(t.source.size() == len && t.latent.size() == len && t.translated.size() == len,
            ErrorCode::InvalidArgument, "trace rows differ in length");
    require(!set.cycle || (t.reconstructed && t.latent2), ErrorCode::InvalidArgument,
            "cycle trace set is missing reconstructions");
    recs.push_back({{"recording", t.provenance.recording_id}, {"channel", t.provenance.channel},
                    {"start", t.provenance.start},
                    {"nfe", {t.nfe_forward, t.nfe_reverse, t.nfe_back_forward, t.nfe_back_reverse}},
                    {"nfe_total", t.nfe_total}});
    src.push_back(&t.source);
    lat.push_back(&t.latent);
    out.push_back(&t.translated);
    if (set.cycle) {
      rec.push_back(&*t.reconstructed);
      lat2.push_back(&*t.latent2);
    }
  }
  pack(dir / "source.f32", src);
  pack(dir / "latent.f32", lat);
  pack(dir / "translated.f32", out);
  if (set.cycle) {
    pack(dir / "reconstructed.f32", rec);
    pack(dir / "latent2.f32", lat2);
  }
  json m;
  m["format"] = "ddib-traces";
  m["version"] = 1;
  m["source_modality"] = to_string(set.source_modality);
  m["target_modality"] = to_string(set.target_modality);
  m["solver"] = to_string(set.solver);
  m["steps"] = set.steps;
  m["cycle"] = set.cycle;
  m["count"] = set.traces.size();
  m["length"] = len;
  m["source_stats"] = stats_json(set.source_stats);
  m["target_stats"] = stats_json(set.target_stats);
  m["records"] = recs;
  io::write_text(dir / "manifest.json", m.dump(1) + "\n");
  io::write_text(dir / "summary.txt", trace_summary(set));
}

bool is_trace_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_regular_file(dir / "manifest.json")) return false;
  try {
    return json::parse(io::read_text(dir / "manifest.json")).value("format", "") == "ddib-traces";
  } catch (const json::exception&) {
    return false;
  }
}

TraceSet load_traces(const std::filesystem::path& dir) {
  TraceSet set;
  std::size_t count = 0, len = 0;
  json recs;
  try {
    const json m = json::parse(io::read_text(dir / "manifest.json"));
    require(m.value("format", "") == "ddib-traces", ErrorCode::Format, dir.string() + " is not a trace directory");
    set.source_modality = modality_or_throw(m.at("source_modality").get<std::string>());
    set.target_modality = modality_or_throw(m.at("target_modality").get<std::string>());
    const auto kind = parse_solver_kind(m.at("solver").get<std::string>());
    require(kind.has_value(), ErrorCode::Format, "unknown solver in trace manifest");
    set.solver = *kind;
    set.steps = m.at("steps").get<std::size_t>();
    set.cycle = m.at("cycle").get<bool>();
    set.source_stats = stats_from(m.at("source_stats"));
    set.target_stats = stats_from(m.at("target_stats"));
    count = m.at("count").get<std::size_t>();
    len = m.at("length").get<std::size_t>();
    recs = m.at("records");
    require(recs.size() == count, ErrorCode::Format, "trace manifest record count mismatch");
  } catch (const json::exception& e) {
    fail(ErrorCode::Format, std::string("malformed trace manifest: ") + e.what());
  }
  auto src = unpack(dir / "source.f32", count, len);
  auto lat = unpack(dir / "latent.f32", count, len);
  auto out = unpack(dir / "translated.f32", count, len);
  std::vector<std::vector<double>> rec, lat2;
  if (set.cycle) {
    rec = unpack(dir / "reconstructed.f32", count, len);
    lat2 = unpack(dir / "latent2.f32", count, len);
  }
  set.traces.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    auto& t = set.traces[i];
    const auto& r = recs[i];
    t.provenance = {r.at("recording").get<std::string>(), r.at("channel").get<std::string>(),
                    r.at("start").get<double>()};
    const auto nfe = r.at("nfe").get<std::vector<std::size_t>>();
    require(nfe.size() == 4, ErrorCode::Format, "trace NFE record must have four legs");
    t.nfe_forward = nfe[0];
    t.nfe_reverse = nfe[1];
    t.nfe_back_forward = nfe[2];
    t.nfe_back_reverse = nfe[3];
    t.nfe_total = r.at("nfe_total").get<std::size_t>();
    t.source = std::move(src[i]);
    t.latent = std::move(lat[i]);
    t.translated = std::move(out[i]);
    if (set.cycle) {
      t.reconstructed = std::move(rec[i]);
      t.latent2 = std::move(lat2[i]);
    }
  }
  return set;
}

std::string trace_summary(const TraceSet& set) {
  std::ostringstream o;
  o << "direction      " << to_string(set.source_modality) << " -> " << to_string(set.target_modality) << "\n";
  o << "solver         " << to_string(set.solver) << ", N = " << set.steps << "\n";
  o << "cycle          " << (set.cycle ? "yes" : "no") << "\n";
  o << "segments       " << set.traces.size() << "\n";
  if (!set.traces.empty()) {
    const auto& t = set.traces.front();
    o << "nfe forward    " << t.nfe_forward << "\n";
    o << "nfe reverse    " << t.nfe_reverse << "\n";
    o << "nfe translate  " << t.nfe_forward + t.nfe_reverse << "\n";
    if (set.cycle) o << "nfe cycle      " << t.nfe_total << "\n";
  }
  return o.str();
}

}  // namespace ddib
