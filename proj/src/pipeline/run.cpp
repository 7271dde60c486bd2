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

#include "pipeline/run.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>

#include <json.hpp>
#include <spdlog/spdlog.h>

#include "common/binary_io.hpp"
#include "common/checksum.hpp"
#include "common/error.hpp"
#include "evaluate/report.hpp"

namespace ddib {

namespace fs = std::filesystem;
using nlohmann::json;

WorkspaceLock::WorkspaceLock(const fs::path& file) {
  io::ensure_dir(file.parent_path());
  fd_ = ::open(file.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
  require(fd_ >= 0, ErrorCode::Io, "cannot open lock file " + file.string());
  if (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
    ::close(fd_);
    fd_ = -1;
    fail(ErrorCode::Usage, "workspace is locked by another process (" + file.string() + ")");
  }
  const std::string pid = std::to_string(::getpid()) + "\n";
  if (::ftruncate(fd_, 0) == 0) (void)!::write(fd_, pid.data(), pid.size());
}

WorkspaceLock::~WorkspaceLock() {
  if (fd_ >= 0) {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
}

// ------------------------------------------------------------------ stages

void synth_stage(const SynthConfig& eeg, const SynthConfig& fmeg, const fs::path& raw_dir) {
  for (const SynthConfig* cfg : {&eeg, &fmeg}) {
    cfg->validate();
    const fs::path dir = raw_dir / to_string(cfg->modality);
    if (fs::exists(dir)) fs::remove_all(dir);
    io::ensure_dir(dir);
    std::vector<GroundTruth> truth;
    for (std::size_t i = 0; i < cfg->n_recordings; ++i) {
      auto [rec, gt] = generate_recording(*cfg, i);
      save_recording(rec, dir / rec.id);
      truth.push_back(std::move(gt));
    }
    write_ground_truth(truth, raw_dir / ("ground_truth_" + std::string(to_string(cfg->modality)) + ".tsv"));
    spdlog::info("synth: {} {} recordings", cfg->n_recordings, to_string(cfg->modality));
  }
}

PreprocessSummary preprocess_stage(const fs::path& in_dir, const fs::path& out_dir, Modality modality,
                                   const PreprocessOptions& opts) {
  fs::path rec_dir = in_dir / to_string(modality);
  if (!fs::is_directory(rec_dir)) rec_dir = in_dir;
  require(fs::is_directory(rec_dir), ErrorCode::Dependency, "recording directory " + rec_dir.string() + " not found");
  auto recs = load_recordings(rec_dir);
  require(!recs.empty(), ErrorCode::Dependency, "no recordings under " + rec_dir.string());
  for (const auto& r : recs)
    require(r.modality == modality, ErrorCode::Usage,
            "recording " + r.id + " is " + to_string(r.modality) + ", expected " + to_string(modality));

  const PreprocessResult res = preprocess_recordings(recs, modality, opts);
  if (fs::exists(out_dir)) fs::remove_all(out_dir);
  write_preprocess_result(res, out_dir);

  PreprocessSummary s;
  s.recordings = recs.size();
  s.train_segments = res.train.segments.size();
  s.test_segments = res.test.segments.size();
  s.clamped = res.clamped;

  const fs::path gt_file = in_dir / ("ground_truth_" + std::string(to_string(modality)) + ".tsv");
  if (fs::is_regular_file(gt_file)) {
    const auto truth = read_ground_truth(gt_file);
    DetectionScore total;
    for (const auto& o : res.outcomes) {
      const auto it = std::find_if(truth.begin(), truth.end(), [&](const GroundTruth& g) { return g.recording_id == o.id; });
      if (it == truth.end()) continue;
      total = accumulate(total, score_bursts(o.bursts.intervals, it->annotation().intervals));
    }
    s.detection = total;
    json j = {{"modality", to_string(modality)}, {"true_positives", total.true_positives},
              {"detected", total.detected},      {"truth", total.truth},
              {"precision", total.precision},    {"recall", total.recall},
              {"f1", total.f1}};
    io::write_text(out_dir / "detection.json", j.dump(1) + "\n");
  }
  spdlog::info("preprocess {}: {} recordings, {} train / {} test segments", to_string(modality), s.recordings,
               s.train_segments, s.test_segments);
  return s;
}

namespace {

SegmentDataset load_split(const fs::path& dir, const char* split) {
  if (fs::is_regular_file(dir / "manifest.json")) return load_dataset(dir);
  require(fs::is_regular_file(dir / split / "manifest.json"), ErrorCode::Dependency,
          "no " + std::string(split) + " dataset under " + dir.string());
  return load_dataset(dir / split);
}

}  // namespace

Checkpoint train_stage(const fs::path& data_dir, Modality modality, const EdmConfig& edm,
                       const nn::UNetConfig& arch, const TrainConfig& cfg, const fs::path& out_file) {
  const SegmentDataset ds = load_split(data_dir, "train");
  require(ds.modality == modality, ErrorCode::Usage,
          std::string("training data is ") + to_string(ds.modality) + ", expected " + to_string(modality));
  require(ds.normalized, ErrorCode::Usage, "training data must be normalized");
  spdlog::info("train {}: {} segments, {} iterations at batch {}", to_string(modality), ds.segments.size(),
               cfg.iterations, cfg.batch_size);
  const TrainResult tr = train(ds, edm, arch, cfg);

  Checkpoint c;
  c.modality = modality;
  c.edm = tr.edm;
  c.norm_stats = ds.stats;
  c.arch = arch;
  c.meta.iterations = cfg.iterations;
  c.meta.batch_size = cfg.batch_size;
  c.meta.learning_rate = cfg.learning_rate;
  c.meta.ema_decay = cfg.ema_decay;
  c.meta.seed = cfg.seed;
  c.meta.final_loss = tr.final_loss;
  c.meta.seconds = tr.seconds;
  c.meta.loss_trace = tr.loss_trace;
  c.tensors = tensor_index(arch);
  c.params = tr.ema_params;
  save_checkpoint(c, out_file);
  spdlog::info("train {}: smoothed loss {:.4f} -> {:.4f} in {:.0f} s", to_string(modality),
               smoothed_head(tr.loss_trace, 100), tr.final_loss, tr.seconds);
  return c;
}

std::vector<Segment> pick_segments(const std::vector<Segment>& all, std::size_t n) {
  if (n == 0 || n >= all.size()) return all;
  std::vector<Segment> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(all[i * all.size() / n]);
  return out;
}

TraceSet translate_stage(const TranslateOptions& o, const fs::path& out_dir) {
  for (const auto& p : {o.src_checkpoint, o.tgt_checkpoint})
    require(fs::is_regular_file(p), ErrorCode::Dependency, "missing checkpoint " + p.string());
  const Checkpoint src = load_checkpoint(o.src_checkpoint);
  const Checkpoint tgt = load_checkpoint(o.tgt_checkpoint);
  const SegmentDataset ds = load_split(o.data, "test");
  require(ds.modality == src.modality, ErrorCode::Usage,
          std::string("data modality ") + to_string(ds.modality) + " does not match the source checkpoint (" +
              to_string(src.modality) + ")");
  const auto segs = pick_segments(ds.segments, o.max_segments);
  require(!segs.empty(), ErrorCode::Dependency, "no segments to translate in " + o.data.string());

  const auto d_src = make_denoiser(src);
  const auto d_tgt = make_denoiser(tgt);
  spdlog::info("translate {} -> {}: {} segments, {} N={}{}", to_string(src.modality), to_string(tgt.modality),
               segs.size(), to_string(o.spec.kind), o.spec.steps(), o.cycle ? ", cycle" : "");
  TraceSet set;
  set.source_modality = src.modality;
  set.target_modality = tgt.modality;
  set.solver = o.spec.kind;
  set.steps = o.spec.steps();
  set.cycle = o.cycle;
  set.source_stats = src.norm_stats;
  set.target_stats = tgt.norm_stats;
  set.traces = translate_batch(*d_src, *d_tgt, segs, o.spec, o.cycle, o.chunk, [](std::size_t done, std::size_t n) {
    spdlog::debug("translated {}/{}", done, n);
  });
  if (fs::exists(out_dir)) fs::remove_all(out_dir);
  save_traces(set, out_dir);
  return set;
}

// ------------------------------------------------------------ orchestration

const StageRecord* RunManifest::find(const std::string& stage) const {
  for (const auto& s : stages)
    if (s.stage == stage) return &s;
  return nullptr;
}

std::string RunManifest::checksum_digest() const {
  std::string text;
  for (const auto& s : stages) {
    text += s.stage + "\n";
    for (const auto& [k, v] : s.outputs) text += "  " + k + " " + v + "\n";
  }
  return sha256_hex(text);
}

namespace {

json to_json(const RunManifest& m) {
  json j;
  j["format"] = "ddib-run-manifest";
  j["version"] = 1;
  j["library_version"] = "0.1.0";
  j["config"] = m.config;
  j["ok"] = m.ok;
  j["stages"] = json::array();
  for (const auto& s : m.stages)
    j["stages"].push_back({{"stage", s.stage},
                           {"status", s.status},
                           {"key", s.key},
                           {"outputs", s.outputs},
                           {"seconds", s.seconds},
                           {"build_seconds", s.build_seconds},
                           {"message", s.message}});
  j["checksum_digest"] = m.checksum_digest();
  return j;
}

std::optional<RunManifest> read_manifest(const fs::path& file) {
  if (!fs::is_regular_file(file)) return std::nullopt;
  try {
    const json j = json::parse(io::read_text(file));
    RunManifest m;
    m.config = j.at("config").get<std::string>();
    m.ok = j.at("ok").get<bool>();
    for (const auto& s : j.at("stages"))
      m.stages.push_back({s.at("stage").get<std::string>(), s.at("status").get<std::string>(),
                          s.at("key").get<std::string>(), s.at("outputs").get<std::map<std::string, std::string>>(),
                          s.at("seconds").get<double>(), s.value("build_seconds", 0.0), s.at("message").get<std::string>()});
    return m;
  } catch (const std::exception& e) {
    spdlog::warn("ignoring unreadable manifest {}: {}", file.string(), e.what());
    return std::nullopt;
  }
}

std::string digest_path(const fs::path& p) {
  if (fs::is_regular_file(p)) return sha256_file(p);
  if (fs::is_directory(p)) return sha256_tree(p);
  return "";
}

struct StagePlan {
  Stage stage;
  std::vector<Stage> deps;
  std::vector<fs::path> outputs;        // relative to the workspace
  std::vector<fs::path> extra_inputs;   // absolute files that feed the stage
  std::function<void()> body;
};

}  // namespace

RunManifest run_pipeline(const PipelineConfig& cfg) {
  cfg.validate();
  const Workspace ws{cfg.workspace};
  io::ensure_dir(ws.root);
  WorkspaceLock lock(ws.lock());
  for (const auto& d : {ws.raw(), ws.segments(), ws.checkpoints(), ws.traces(), ws.reports()}) io::ensure_dir(d);

  const auto previous = read_manifest(ws.manifest());
  const fs::path eeg_ckpt = cfg.bridge.eeg_checkpoint.value_or(ws.checkpoint(Modality::Eeg));
  const fs::path fmeg_ckpt = cfg.bridge.fmeg_checkpoint.value_or(ws.checkpoint(Modality::Fmeg));
  const bool external_ckpt = cfg.bridge.eeg_checkpoint || cfg.bridge.fmeg_checkpoint;

  std::vector<StagePlan> plan;
  plan.push_back({Stage::Synth, {}, {"raw"}, {}, [&] { synth_stage(cfg.synth_eeg, cfg.synth_fmeg, ws.raw()); }});
  plan.push_back({Stage::Preprocess, {Stage::Synth}, {"segments"}, {}, [&] {
                    for (Modality m : {Modality::Eeg, Modality::Fmeg})
                      preprocess_stage(ws.raw(), ws.segments() / to_string(m), m, cfg.preprocess);
                  }});
  for (Modality m : {Modality::Eeg, Modality::Fmeg}) {
    const Stage st = m == Modality::Eeg ? Stage::TrainEeg : Stage::TrainFmeg;
    plan.push_back({st,
                    {Stage::Preprocess},
                    {fs::relative(ws.checkpoint(m), ws.root)},
                    {},
                    [&, m] {
                      TrainConfig t = cfg.train;
                      t.seed = cfg.seed * 2 + (m == Modality::Eeg ? 11 : 12);
                      train_stage(ws.segments() / to_string(m), m, cfg.edm, cfg.model, t, ws.checkpoint(m));
                    }});
  }
  plan.push_back({Stage::Translate,
                  external_ckpt ? std::vector<Stage>{Stage::Preprocess}
                                : std::vector<Stage>{Stage::Preprocess, Stage::TrainEeg, Stage::TrainFmeg},
                  {"traces"},
                  {eeg_ckpt, fmeg_ckpt},
                  [&] {
                    const SolverSpec spec = cfg.bridge.solver_spec(cfg.edm);
                    for (Modality m : {Modality::Eeg, Modality::Fmeg}) {
                      TranslateOptions o{m == Modality::Eeg ? eeg_ckpt : fmeg_ckpt,
                                         m == Modality::Eeg ? fmeg_ckpt : eeg_ckpt,
                                         ws.segments() / to_string(m),
                                         spec,
                                         cfg.bridge.cycle,
                                         cfg.bridge.max_segments,
                                         cfg.bridge.chunk};
                      translate_stage(o, ws.trace_dir(m));
                    }
                  }});
  plan.push_back({Stage::Evaluate, {Stage::Translate}, {"reports"}, {}, [&] {
                    if (fs::exists(ws.reports())) fs::remove_all(ws.reports());
                    write_report(evaluate_directory(ws.traces()), ws.reports());
                  }});

  RunManifest man;
  man.config = to_ini(cfg);
  std::map<Stage, std::string> out_digest;
  auto outputs_of = [&](const StagePlan& p) {
    std::map<std::string, std::string> o;
    for (const auto& rel : p.outputs) o[rel.string()] = digest_path(ws.root / rel);
    return o;
  };
  auto flush = [&] { io::write_text(ws.manifest(), to_json(man).dump(1) + "\n"); };

  for (const auto& p : plan) {
    StageRecord rec;
    rec.stage = to_string(p.stage);
    std::string key_text = stage_fingerprint(cfg, p.stage);
    for (Stage d : p.deps) {
      auto it = out_digest.find(d);
      std::string dig;
      if (it != out_digest.end()) {
        dig = it->second;
      } else {
        const auto& dp = *std::find_if(plan.begin(), plan.end(), [&](const StagePlan& q) { return q.stage == d; });
        for (const auto& [k, v] : outputs_of(dp)) dig += k + "=" + v + ";";
      }
      key_text += std::string("dep ") + to_string(d) + " " + dig + "\n";
    }
    for (const auto& f : p.extra_inputs) key_text += "input " + f.string() + " " + digest_path(f) + "\n";
    rec.key = sha256_hex(key_text);

    if (!cfg.wants(p.stage)) {
      rec.status = "not-requested";
      rec.outputs = outputs_of(p);
    } else {
      for (Stage d : p.deps) {
        const auto& dp = *std::find_if(plan.begin(), plan.end(), [&](const StagePlan& q) { return q.stage == d; });
        for (const auto& rel : dp.outputs)
          if (!fs::exists(ws.root / rel))
            fail(ErrorCode::Dependency, std::string("stage ") + to_string(p.stage) + " needs " +
                                            (ws.root / rel).string() + " from stage " + to_string(d));
      }
      for (const auto& f : p.extra_inputs)
        if (!fs::exists(f))
          fail(ErrorCode::Dependency, std::string("stage ") + to_string(p.stage) + " needs missing artifact " + f.string());

      const StageRecord* prev = previous ? previous->find(rec.stage) : nullptr;
      const auto current = outputs_of(p);
      const bool complete = std::all_of(current.begin(), current.end(), [](const auto& kv) { return !kv.second.empty(); });
      if (prev && prev->status != "failed" && prev->status != "not-requested" && prev->key == rec.key &&
          prev->outputs == current && complete) {
        rec.status = "skipped";
        rec.outputs = current;
        rec.build_seconds = prev->build_seconds;
        spdlog::info("stage {}: up to date", rec.stage);
      } else {
        spdlog::info("stage {}: running", rec.stage);
        const auto t0 = std::chrono::steady_clock::now();
        try {
          p.body();
        } catch (const std::exception& e) {
          rec.status = "failed";
          rec.message = e.what();
          rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
          man.ok = false;
          man.stages.push_back(rec);
          flush();
          throw;
        }
        rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        rec.build_seconds = rec.seconds;
        rec.status = "ok";
        rec.outputs = outputs_of(p);
      }
    }
    std::string dig;
    for (const auto& [k, v] : rec.outputs) dig += k + "=" + v + ";";
    out_digest[p.stage] = dig;
    man.stages.push_back(rec);
    flush();
  }
  return man;
}

}  // namespace ddib
