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

#include "evaluate/report.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <sstream>

#include <json.hpp>

#include "common/binary_io.hpp"
#include "common/error.hpp"

namespace ddib {

namespace {

using nlohmann::json;

std::vector<std::span<const double>> column(const TraceSet& s, int which) {
  std::vector<std::span<const double>> v;
  v.reserve(s.traces.size());
  for (const auto& t : s.traces) {
    if (which == 0) v.emplace_back(t.source);
    if (which == 1) v.emplace_back(t.translated);
    if (which == 2) v.emplace_back(*t.reconstructed);
  }
  return v;
}

std::string label(const SetEvaluation& e) {
  return fmt::format("{} via {} ({} N={})", to_string(e.source), to_string(e.target), to_string(e.solver), e.steps);
}

json row_json(const MetricRow& r) {
  return {{"label", r.label},       {"count", r.count},         {"nfe", r.nfe},
          {"mav_mean", r.mav_mean}, {"mav_std", r.mav_std},     {"mse_mean", r.mse_mean},
          {"mse_std", r.mse_std},   {"ratio_mean_pct", r.ratio_mean_pct}, {"ratio_std_pct", r.ratio_std_pct}};
}

json bands_json(const std::array<double, 4>& b) {
  json j;
  for (std::size_t i = 0; i < 4; ++i) j[to_string(kBands[i])] = b[i];
  return j;
}

std::string spectrum_table(const std::vector<std::pair<std::string, const SpectralReport*>>& series) {
  std::string out = "freq_hz";
  for (const auto& [name, r] : series) out += "\t" + name + "_mean\t" + name + "_std";
  out += "\n";
  const auto& f = series.front().second->freqs;
  for (std::size_t k = 0; k < f.size(); ++k) {
    out += fmt::format("{:.1f}", f[k]);
    for (const auto& [name, r] : series) out += fmt::format("\t{:.9e}\t{:.9e}", r->mean[k], r->std[k]);
    out += "\n";
  }
  return out;
}

}  // namespace

Evaluation evaluate_sets(const std::vector<std::pair<std::string, TraceSet>>& sets) {
  require(!sets.empty(), ErrorCode::InvalidArgument, "no trace sets to evaluate");
  Evaluation ev;
  for (const auto& [name, s] : sets) {
    require(!s.traces.empty(), ErrorCode::InvalidArgument, "trace set '" + name + "' is empty");
    SetEvaluation e;
    e.name = name;
    e.source = s.source_modality;
    e.target = s.target_modality;
    e.solver = s.solver;
    e.steps = s.steps;
    const auto& t0 = s.traces.front();
    e.translate_nfe = t0.nfe_forward + t0.nfe_reverse;
    e.cycle_nfe = t0.nfe_total;

    std::vector<SegmentPair> tr;
    for (const auto& t : s.traces) tr.emplace_back(t.source, t.translated);
    e.translation = aggregate(label(e) + " translation", tr, e.translate_nfe);
    e.original = psd(column(s, 0));
    e.translated = psd(column(s, 1));
    if (s.cycle) {
      std::vector<SegmentPair> rc;
      for (const auto& t : s.traces) rc.emplace_back(t.source, *t.reconstructed);
      e.reconstruction = aggregate(label(e), rc, e.translate_nfe);
      e.reconstructed = psd(column(s, 2));
      e.reconstruction_spectrum = compare_reports(e.original, *e.reconstructed);
    }
    ev.sets.push_back(std::move(e));
  }

  for (const auto& e : ev.sets) {
    const auto other = std::find_if(ev.sets.begin(), ev.sets.end(), [&](const SetEvaluation& o) {
      return o.source == e.target && o.original.freqs.size() == e.translated.freqs.size();
    });
    if (other == ev.sets.end() || e.source == e.target) continue;
    CrossCheck c;
    c.name = e.name;
    c.source = e.source;
    c.target = e.target;
    c.distance_to_target = band_distance(e.translated, other->original);
    c.distance_to_source = band_distance(e.translated, e.original);
    c.closer_to_target = c.distance_to_target < c.distance_to_source;
    if (e.reconstruction && e.reconstruction->mse_mean > 0)
      c.translation_over_cycle = e.translation.mse_mean / e.reconstruction->mse_mean;
    else if (e.reconstruction)
      c.translation_over_cycle = INFINITY;
    ev.cross.push_back(c);
  }
  return ev;
}

Evaluation evaluate_directory(const std::filesystem::path& dir) {
  std::vector<std::pair<std::string, TraceSet>> sets;
  if (is_trace_dir(dir)) {
    sets.emplace_back(dir.filename().string(), load_traces(dir));
  } else {
    require(std::filesystem::is_directory(dir), ErrorCode::Io, "trace directory " + dir.string() + " not found");
    std::vector<std::filesystem::path> subs;
    for (const auto& d : std::filesystem::directory_iterator(dir))
      if (d.is_directory() && is_trace_dir(d.path())) subs.push_back(d.path());
    std::sort(subs.begin(), subs.end());
    for (const auto& p : subs) sets.emplace_back(p.filename().string(), load_traces(p));
  }
  require(!sets.empty(), ErrorCode::Dependency, "no trace sets found under " + dir.string());
  return evaluate_sets(sets);
}

std::string evaluation_summary(const Evaluation& ev) {
  std::ostringstream o;
  o << "Reconstruction (original vs cycle output, normalized units)\n";
  for (const auto& e : ev.sets) {
    if (!e.reconstruction) continue;
    const auto& r = *e.reconstruction;
    o << fmt::format("  {:<32} MAV {:.2f} +- {:.2f} e-3  MSE {:.4f} +- {:.4f} e-3  ratio {:.4f} +- {:.4f} %  NFE {}\n",
                     r.label, r.mav_mean * 1e3, r.mav_std * 1e3, r.mse_mean * 1e3, r.mse_std * 1e3,
                     r.ratio_mean_pct, r.ratio_std_pct, r.nfe);
    o << "    band rel. diff (reconstructed vs original):";
    for (std::size_t i = 0; i < 4; ++i)
      o << fmt::format(" {} {:.4f}", to_string(kBands[i]), e.reconstruction_spectrum->band_rel_diff[i]);
    o << "\n";
  }
  o << "Translation\n";
  for (const auto& e : ev.sets)
    o << fmt::format("  {:<32} input-vs-translation MSE {:.4f} e-3  NFE {} (cycle {})\n", e.name,
                     e.translation.mse_mean * 1e3, e.translate_nfe, e.cycle_nfe);
  for (const auto& c : ev.cross)
    o << fmt::format("  {} -> {}: band distance to {} originals {:.4e}, to {} originals {:.4e}; "
                     "translation/cycle MSE {:.1f}\n",
                     to_string(c.source), to_string(c.target), to_string(c.target), c.distance_to_target,
                     to_string(c.source), c.distance_to_source, c.translation_over_cycle);
  return o.str();
}

void write_report(const Evaluation& ev, const std::filesystem::path& out) {
  io::ensure_dir(out);

  std::string t1 = "data\tmethod\tsolver\tsteps\tcount\tnfe\tmav_mean_e3\tmav_std_e3\tmse_mean_e3\tmse_std_e3\t"
                   "ratio_mean_pct\tratio_std_pct\n";
  for (const auto& e : ev.sets) {
    if (!e.reconstruction) continue;
    const auto& r = *e.reconstruction;
    t1 += fmt::format("{}\t{}\t{}\t{}\t{}\t{}\t{:.6f}\t{:.6f}\t{:.6f}\t{:.6f}\t{:.6f}\t{:.6f}\n", to_string(e.source),
                      "measured", to_string(e.solver), e.steps, r.count, r.nfe, r.mav_mean * 1e3, r.mav_std * 1e3,
                      r.mse_mean * 1e3, r.mse_std * 1e3, r.ratio_mean_pct, r.ratio_std_pct);
  }
  for (const auto& ref : kReferenceTable)
    t1 += fmt::format("{}\treference:{}\t-\t-\t-\t{}\t{:.2f}\t{:.2f}\t{:.2f}\t{:.2f}\t{:.2f}\t{:.2f}\n", ref.data,
                      ref.method, ref.nfe, ref.mav_mean, ref.mav_std, ref.mse_mean, ref.mse_std, ref.ratio_mean,
                      ref.ratio_std);
  io::write_text(out / "table1.tsv", t1);

  std::string bands = "set\tseries\tdelta\ttheta\talpha\tbeta\n";
  auto band_line = [&](const std::string& set, const char* series, const SpectralReport& r) {
    bands += fmt::format("{}\t{}\t{:.9e}\t{:.9e}\t{:.9e}\t{:.9e}\n", set, series, r.band_means[0], r.band_means[1],
                         r.band_means[2], r.band_means[3]);
  };
  for (const auto& e : ev.sets) {
    band_line(e.name, "original", e.original);
    band_line(e.name, "translated", e.translated);
    if (e.reconstructed) band_line(e.name, "reconstructed", *e.reconstructed);
  }
  io::write_text(out / "bands.tsv", bands);

  for (const auto& e : ev.sets) {
    if (e.reconstructed)
      io::write_text(out / fmt::format("fig_reconstruction_{}.tsv", e.name),
                     spectrum_table({{"original", &e.original}, {"reconstructed", &*e.reconstructed}}));
    std::vector<std::pair<std::string, const SpectralReport*>> series{{"source", &e.original},
                                                                      {"translated", &e.translated}};
    for (const auto& o : ev.sets)
      if (o.source == e.target && &o != &e) {
        series.emplace_back("target_original", &o.original);
        break;
      }
    io::write_text(out / fmt::format("fig_translation_{}.tsv", e.name), spectrum_table(series));
  }

  json j;
  j["format"] = "ddib-evaluation";
  j["sets"] = json::array();
  for (const auto& e : ev.sets) {
    json s;
    s["name"] = e.name;
    s["source"] = to_string(e.source);
    s["target"] = to_string(e.target);
    s["solver"] = to_string(e.solver);
    s["steps"] = e.steps;
    s["translate_nfe"] = e.translate_nfe;
    s["cycle_nfe"] = e.cycle_nfe;
    s["translation"] = row_json(e.translation);
    s["bands"] = {{"original", bands_json(e.original.band_means)},
                  {"translated", bands_json(e.translated.band_means)}};
    if (e.reconstruction) {
      s["reconstruction"] = row_json(*e.reconstruction);
      s["bands"]["reconstructed"] = bands_json(e.reconstructed->band_means);
      s["reconstruction_band_rel_diff"] = bands_json(e.reconstruction_spectrum->band_rel_diff);
      s["reconstruction_spectrum_rel_l2"] = e.reconstruction_spectrum->spectrum_rel_l2;
    }
    j["sets"].push_back(s);
  }
  j["cross"] = json::array();
  for (const auto& c : ev.cross)
    j["cross"].push_back({{"name", c.name},
                          {"source", to_string(c.source)},
                          {"target", to_string(c.target)},
                          {"distance_to_target", c.distance_to_target},
                          {"distance_to_source", c.distance_to_source},
                          {"closer_to_target", c.closer_to_target},
                          {"translation_over_cycle",
                           std::isfinite(c.translation_over_cycle) ? json(c.translation_over_cycle) : json(nullptr)}});
  io::write_text(out / "metrics.json", j.dump(1) + "\n");
  io::write_text(out / "summary.txt", evaluation_summary(ev));
}

}  // namespace ddib
