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


#include "ddib/ddib.h"

#include <cblas.h>
#include <spdlog/spdlog.h>

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iterator>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "bridge/trace_io.hpp"
#include "bridge/translate.hpp"
#include "common/error.hpp"
#include "diffusion/checkpoint.hpp"
#include "diffusion/oracle.hpp"
#include "evaluate/report.hpp"
#include "pipeline/config.hpp"
#include "pipeline/run.hpp"
#include "pipeline/verify.hpp"

#define DDIB_VERSION_STRING "0.1.0"

namespace fs = std::filesystem;
using ddib::ErrorCode;

namespace {

class CountingDenoiser final : public ddib::Denoiser {
 public:
  explicit CountingDenoiser(std::unique_ptr<ddib::Denoiser> inner) : inner_(std::move(inner)) {}

  std::size_t dim() const noexcept override { return inner_->dim(); }
  std::optional<ddib::Modality> modality() const noexcept override { return inner_->modality(); }
  void denoise(std::span<const double> x, std::size_t batch, double sigma, std::span<double> out) const override {
    calls_.fetch_add(1, std::memory_order_relaxed);
    inner_->denoise(x, batch, sigma, out);
  }
  using Denoiser::denoise;

  std::uint64_t calls() const noexcept { return calls_.load(std::memory_order_relaxed); }

 private:
  std::unique_ptr<ddib::Denoiser> inner_;
  mutable std::atomic<std::uint64_t> calls_{0};
};

thread_local std::string g_last_error;

void init_once() {
  static std::once_flag flag;
  std::call_once(flag, [] {
    if (const char* env = std::getenv("DDIB_NUM_THREADS")) {
      const int n = std::atoi(env);
      if (n > 0) openblas_set_num_threads(n);
    }
  });
}

ddib_status to_status(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidArgument: return DDIB_ERR_INVALID_ARGUMENT;
    case ErrorCode::InvalidBand: return DDIB_ERR_INVALID_BAND;
    case ErrorCode::TooShort: return DDIB_ERR_TOO_SHORT;
    case ErrorCode::EmptyRecording: return DDIB_ERR_EMPTY_RECORDING;
    case ErrorCode::Calibration: return DDIB_ERR_CALIBRATION;
    case ErrorCode::DegenerateStats: return DDIB_ERR_DEGENERATE_STATS;
    case ErrorCode::Schedule: return DDIB_ERR_SCHEDULE;
    case ErrorCode::Config: return DDIB_ERR_CONFIG;
    case ErrorCode::Numeric: return DDIB_ERR_NUMERIC;
    case ErrorCode::SolverDivergence: return DDIB_ERR_SOLVER_DIVERGENCE;
    case ErrorCode::Usage: return DDIB_ERR_USAGE;
    case ErrorCode::Io: return DDIB_ERR_IO;
    case ErrorCode::Format: return DDIB_ERR_FORMAT;
    case ErrorCode::Dependency: return DDIB_ERR_DEPENDENCY;
    case ErrorCode::Verification: return DDIB_ERR_VERIFICATION;
  }
  return DDIB_ERR_INTERNAL;
}

template <class F>
ddib_status guarded(F&& f) noexcept {
  try {
    init_once();
    g_last_error.clear();
    f();
    return DDIB_OK;
  } catch (const ddib::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::exception& e) {
    g_last_error = e.what();
  } catch (...) {
    g_last_error = "unknown exception";
  }
  return DDIB_ERR_INTERNAL;
}

void need(const void* p, const char* what) {
  ddib::require(p != nullptr, ErrorCode::InvalidArgument, std::string(what) + " is null");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::vector<std::string> override_list(const char* const* overrides, std::size_t n) {
  std::vector<std::string> out;
  if (n > 0) need(overrides, "overrides");
  for (std::size_t i = 0; i < n; ++i) {
    need(overrides[i], "override");
    out.emplace_back(overrides[i]);
  }
  return out;
}

ddib::PipelineConfig config_or_default(const char* path, const std::vector<std::string>& overrides) {
  if (path && *path) return ddib::load_config(path, overrides);
  return ddib::config_from_string("", overrides);
}

ddib::Modality modality_arg(const char* s) {
  need(s, "modality");
  const auto m = ddib::parse_modality(s);
  ddib::require(m.has_value(), ErrorCode::InvalidArgument, std::string("unknown modality '") + s + "'");
  return *m;
}

ddib::SolverSpec solver_arg(const char* preset, const char* solver, std::size_t steps, const ddib::EdmConfig& edm) {
  if (preset && *preset) return ddib::solver_preset(preset, edm);
  need(solver, "solver");
  const std::string name(solver);
  if (name.rfind("paper-", 0) == 0) return ddib::solver_preset(name, edm);
  const auto kind = ddib::parse_solver_kind(name);
  ddib::require(kind.has_value(), ErrorCode::InvalidArgument, "unknown solver '" + name + "'");
  return ddib::make_solver(*kind, steps, edm);
}

}  // namespace

struct ddib_denoiser {
  std::unique_ptr<CountingDenoiser> d;
  ddib::EdmConfig edm;
};

struct ddib_trace_set {
  ddib::TraceSet set;
};

struct ddib_verify_report {
  ddib::VerifyReport report;
};

extern "C" {

const char* ddib_version(void) { return DDIB_VERSION_STRING; }

const char* ddib_status_name(ddib_status status) {
  switch (status) {
    case DDIB_OK: return "ok";
    case DDIB_ERR_INTERNAL: return "internal";
    default: break;
  }
  const int i = static_cast<int>(status);
  if (i >= 1 && i <= 15) return ddib::to_string(static_cast<ErrorCode>(i - 1));
  return "unknown";
}

const char* ddib_last_error(void) { return g_last_error.c_str(); }

void ddib_set_verbosity(int level) {
  if (level <= 0)
    spdlog::set_level(spdlog::level::warn);
  else if (level == 1)
    spdlog::set_level(spdlog::level::info);
  else
    spdlog::set_level(spdlog::level::debug);
}

ddib_status ddib_set_num_threads(int n) {
  return guarded([&] {
    ddib::require(n > 0, ErrorCode::InvalidArgument, "thread count must be positive");
    openblas_set_num_threads(n);
  });
}

void ddib_string_free(char* s) { std::free(s); }

ddib_status ddib_synth(const char* config_path, const char* const* overrides, size_t n_overrides,
                       const char* out_dir) {
  return guarded([&] {
    need(out_dir, "out_dir");
    const auto cfg = config_or_default(config_path, override_list(overrides, n_overrides));
    ddib::synth_stage(cfg.synth_eeg, cfg.synth_fmeg, out_dir);
  });
}

ddib_status ddib_preprocess(const ddib_preprocess_options* o, ddib_preprocess_summary* summary) {
  return guarded([&] {
    need(o, "options");
    need(o->in_dir, "in_dir");
    need(o->out_dir, "out_dir");
    auto opts = config_or_default(o->config_path, {}).preprocess;
    opts.nleo_multiplier = o->nleo_multiplier;
    opts.seed = o->seed;
    const auto s = ddib::preprocess_stage(o->in_dir, o->out_dir, modality_arg(o->modality), opts);
    if (summary) {
      *summary = {};
      summary->recordings = s.recordings;
      summary->train_segments = s.train_segments;
      summary->test_segments = s.test_segments;
      if (s.detection) {
        summary->has_detection = 1;
        summary->precision = s.detection->precision;
        summary->recall = s.detection->recall;
        summary->f1 = s.detection->f1;
      }
    }
  });
}

ddib_status ddib_train(const ddib_train_options* o, ddib_train_summary* summary) {
  return guarded([&] {
    need(o, "options");
    need(o->data_dir, "data_dir");
    need(o->out_path, "out_path");
    const auto cfg = config_or_default(o->config_path, override_list(o->overrides, o->n_overrides));
    ddib::TrainConfig t = cfg.train;
    t.iterations = o->iterations;
    t.batch_size = o->batch;
    t.seed = o->seed;
    const auto ckpt = ddib::train_stage(o->data_dir, modality_arg(o->modality), cfg.edm, cfg.model, t, o->out_path);
    if (summary) {
      summary->iterations = ckpt.meta.iterations;
      summary->initial_loss = ddib::smoothed_head(ckpt.meta.loss_trace, 100);
      summary->final_loss = ddib::smoothed_tail(ckpt.meta.loss_trace, 100);
      summary->seconds = ckpt.meta.seconds;
    }
  });
}

ddib_status ddib_translate(const ddib_translate_options* o, ddib_trace_set** traces) {
  return guarded([&] {
    need(o, "options");
    need(o->src_checkpoint, "src_checkpoint");
    need(o->tgt_checkpoint, "tgt_checkpoint");
    need(o->data_dir, "data_dir");
    need(o->out_dir, "out_dir");
    if (traces) *traces = nullptr;
    ddib::require(fs::is_regular_file(o->src_checkpoint), ErrorCode::Dependency,
                  std::string("missing checkpoint ") + o->src_checkpoint);
    const ddib::EdmConfig edm = ddib::load_checkpoint(o->src_checkpoint).edm;
    const ddib::TranslateOptions t{o->src_checkpoint, o->tgt_checkpoint, o->data_dir,
                                   solver_arg(o->preset, o->solver, o->steps, edm), o->cycle != 0,
                                   o->max_segments};
    auto set = ddib::translate_stage(t, o->out_dir);
    if (traces) *traces = new ddib_trace_set{std::move(set)};
  });
}

ddib_status ddib_evaluate(const char* traces_dir, const char* out_dir, char** summary) {
  return guarded([&] {
    need(traces_dir, "traces_dir");
    need(out_dir, "out_dir");
    if (summary) *summary = nullptr;
    const auto ev = ddib::evaluate_directory(traces_dir);
    ddib::write_report(ev, out_dir);
    if (summary) *summary = dup_string(ddib::evaluation_summary(ev));
  });
}

ddib_status ddib_run(const char* config_path, const char* const* overrides, size_t n_overrides,
                     char** manifest_json) {
  if (manifest_json) *manifest_json = nullptr;
  return guarded([&] {
    const auto cfg = config_or_default(config_path, override_list(overrides, n_overrides));
    ddib::run_pipeline(cfg);
    if (manifest_json) {
      const fs::path file = ddib::Workspace{cfg.workspace}.manifest();
      std::ifstream in(file);
      std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
      *manifest_json = dup_string(text);
    }
  });
}

ddib_status ddib_config_dump(const char* config_path, const char* const* overrides, size_t n_overrides,
                             char** ini) {
  return guarded([&] {
    need(ini, "ini");
    *ini = nullptr;
    const auto cfg = config_or_default(config_path, override_list(overrides, n_overrides));
    cfg.validate();
    *ini = dup_string(ddib::to_ini(cfg));
  });
}

ddib_status ddib_denoiser_load(const char* checkpoint, ddib_denoiser** out) {
  return guarded([&] {
    need(checkpoint, "checkpoint");
    need(out, "out");
    *out = nullptr;
    ddib::require(fs::is_regular_file(checkpoint), ErrorCode::Dependency,
                  std::string("missing checkpoint ") + checkpoint);
    const auto ckpt = ddib::load_checkpoint(checkpoint);
    *out = new ddib_denoiser{std::make_unique<CountingDenoiser>(ddib::make_denoiser(ckpt)), ckpt.edm};
  });
}

ddib_status ddib_denoiser_mixture(size_t n_components, const double* weights, const double* means,
                                  const double* stds, size_t dim, ddib_denoiser** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    ddib::require(n_components > 0, ErrorCode::InvalidArgument, "mixture needs at least one component");
    need(weights, "weights");
    need(means, "means");
    need(stds, "stds");
    std::vector<ddib::MixtureComponent> comps;
    for (std::size_t i = 0; i < n_components; ++i) {
      ddib::MixtureComponent c;
      c.weight = weights[i];
      c.mean.assign(dim == 0 ? 1 : dim, means[i]);
      c.std = stds[i];
      comps.push_back(std::move(c));
    }
    auto oracle = std::make_unique<ddib::GaussianMixtureOracle>(std::move(comps));
    *out = new ddib_denoiser{std::make_unique<CountingDenoiser>(std::move(oracle)), ddib::EdmConfig{}};
  });
}

void ddib_denoiser_free(ddib_denoiser* d) { delete d; }

size_t ddib_denoiser_dim(const ddib_denoiser* d) { return d ? d->d->dim() : 0; }

uint64_t ddib_denoiser_calls(const ddib_denoiser* d) { return d ? d->d->calls() : 0; }

ddib_status ddib_denoiser_denoise(const ddib_denoiser* d, const double* x, size_t batch, size_t len,
                                  double sigma, double* out) {
  return guarded([&] {
    need(d, "denoiser");
    need(x, "x");
    need(out, "out");
    ddib::require(batch > 0 && len > 0, ErrorCode::InvalidArgument, "empty input");
    ddib::require(d->d->dim() == 0 || d->d->dim() == len, ErrorCode::InvalidArgument,
                  "row length does not match the denoiser");
    d->d->denoise(std::span<const double>(x, batch * len), batch, sigma, std::span<double>(out, batch * len));
  });
}

ddib_status ddib_translate_rows(const ddib_denoiser* src, const ddib_denoiser* tgt, const double* x, size_t batch,
                                size_t len, const char* solver, size_t steps, int cycle, ddib_trace_set** out) {
  return guarded([&] {
    need(src, "src");
    need(tgt, "tgt");
    need(x, "x");
    need(out, "out");
    *out = nullptr;
    ddib::require(batch > 0 && len > 0, ErrorCode::InvalidArgument, "empty input");
    const ddib::SolverSpec spec = solver_arg(nullptr, solver, steps, src->edm);
    const ddib::Modality sm = src->d->modality().value_or(ddib::Modality::Eeg);
    std::vector<ddib::Segment> segs(batch);
    for (std::size_t b = 0; b < batch; ++b) {
      segs[b].values.assign(x + b * len, x + (b + 1) * len);
      segs[b].modality = sm;
    }
    ddib_trace_set t;
    t.set.source_modality = sm;
    t.set.target_modality = tgt->d->modality().value_or(ddib::other(sm));
    t.set.solver = spec.kind;
    t.set.steps = spec.steps();
    t.set.cycle = cycle != 0;
    t.set.traces = ddib::translate_batch(*src->d, *tgt->d, segs, spec, cycle != 0);
    *out = new ddib_trace_set{std::move(t)};
  });
}

size_t ddib_trace_set_count(const ddib_trace_set* t) { return t ? t->set.traces.size() : 0; }

size_t ddib_trace_set_length(const ddib_trace_set* t) {
  return t && !t->set.traces.empty() ? t->set.traces.front().source.size() : 0;
}

ddib_status ddib_trace_set_nfe(const ddib_trace_set* t, size_t index, ddib_nfe* nfe) {
  return guarded([&] {
    need(t, "trace set");
    need(nfe, "nfe");
    ddib::require(index < t->set.traces.size(), ErrorCode::InvalidArgument, "trace index out of range");
    const auto& tr = t->set.traces[index];
    *nfe = {tr.nfe_forward, tr.nfe_reverse, tr.nfe_back_forward, tr.nfe_back_reverse, tr.nfe_total};
  });
}

ddib_status ddib_trace_set_row(const ddib_trace_set* t, size_t index, ddib_trace_field field, double* out) {
  return guarded([&] {
    need(t, "trace set");
    need(out, "out");
    ddib::require(index < t->set.traces.size(), ErrorCode::InvalidArgument, "trace index out of range");
    const auto& tr = t->set.traces[index];
    const std::vector<double>* row = nullptr;
    switch (field) {
      case DDIB_TRACE_SOURCE: row = &tr.source; break;
      case DDIB_TRACE_LATENT: row = &tr.latent; break;
      case DDIB_TRACE_TRANSLATED: row = &tr.translated; break;
      case DDIB_TRACE_RECONSTRUCTED: row = tr.reconstructed ? &*tr.reconstructed : nullptr; break;
      case DDIB_TRACE_LATENT2: row = tr.latent2 ? &*tr.latent2 : nullptr; break;
    }
    ddib::require(row != nullptr, ErrorCode::Usage, "trace field not present; translate with a cycle");
    std::copy(row->begin(), row->end(), out);
  });
}

void ddib_trace_set_free(ddib_trace_set* t) { delete t; }

ddib_status ddib_verify_oracles(ddib_verify_report** out) {
  bool passed = false;
  const ddib_status st = guarded([&] {
    need(out, "out");
    *out = nullptr;
    auto r = std::make_unique<ddib_verify_report>();
    r->report = ddib::verify_oracles();
    passed = r->report.all_passed();
    *out = r.release();
  });
  if (st != DDIB_OK) return st;
  if (!passed) {
    g_last_error = "one or more oracle properties failed";
    return DDIB_ERR_VERIFICATION;
  }
  return DDIB_OK;
}

size_t ddib_verify_report_count(const ddib_verify_report* r) { return r ? r->report.properties.size() : 0; }

const char* ddib_verify_report_name(const ddib_verify_report* r, size_t i) {
  return r && i < r->report.properties.size() ? r->report.properties[i].name.c_str() : "";
}

int ddib_verify_report_passed(const ddib_verify_report* r, size_t i) {
  return r && i < r->report.properties.size() && r->report.properties[i].passed ? 1 : 0;
}

const char* ddib_verify_report_measured(const ddib_verify_report* r, size_t i) {
  return r && i < r->report.properties.size() ? r->report.properties[i].measured.c_str() : "";
}

void ddib_verify_report_free(ddib_verify_report* r) { delete r; }

}  // extern "C"
