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

#include "pipeline/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "common/error.hpp"

namespace ddib {

namespace pt = boost::property_tree;

namespace {

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    const auto b = tok.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    try {
      out.push_back(std::stoi(tok.substr(b)));
    } catch (const std::exception&) {
      fail(ErrorCode::Config, "bad integer list '" + s + "'");
    }
  }
  return out;
}

std::string join(const std::vector<int>& v) { return fmt::format("{}", fmt::join(v, ",")); }

bool parse_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  fail(ErrorCode::Config, "bad boolean '" + s + "'");
}

std::string fmt_double(double v) { return fmt::format("{}", v); }

class Reader {
 public:
  explicit Reader(const pt::ptree& tree) : tree_(tree) {}

  std::optional<std::string> raw(const std::string& key) {
    used_.insert(key);
    if (auto v = tree_.get_optional<std::string>(pt::ptree::path_type(key, '.'))) return *v;
    return std::nullopt;
  }
  template <typename T>
  void get(const std::string& key, T& out) {
    const auto v = raw(key);
    if (!v) return;
    try {
      if constexpr (std::is_same_v<T, bool>) {
        out = parse_bool(*v);
      } else if constexpr (std::is_same_v<T, std::string> || std::is_same_v<T, std::filesystem::path>) {
        out = T(*v);
      } else if constexpr (std::is_floating_point_v<T>) {
        std::size_t pos = 0;
        out = static_cast<T>(std::stod(*v, &pos));
        if (pos != v->size()) throw std::invalid_argument(key);
      } else {
        std::size_t pos = 0;
        const long long x = std::stoll(*v, &pos);
        if (pos != v->size() || (std::is_unsigned_v<T> && x < 0)) throw std::invalid_argument(key);
        out = static_cast<T>(x);
      }
    } catch (const Error&) {
      throw;
    } catch (const std::exception&) {
      fail(ErrorCode::Config, "bad value '" + *v + "' for " + key);
    }
  }
  void check_unknown() const {
    for (const auto& [section, body] : tree_) {
      if (body.empty() && !body.data().empty())
        fail(ErrorCode::Config, "key '" + section + "' must live in a section");
      for (const auto& [key, v] : body)
        if (!used_.count(section + "." + key)) fail(ErrorCode::Config, "unknown config key " + section + "." + key);
    }
  }

 private:
  const pt::ptree& tree_;
  std::set<std::string> used_;
};

void apply(PipelineConfig& c, Reader& r) {
  r.get("run.workspace", c.workspace);
  r.get("run.seed", c.seed);
  if (auto st = r.raw("run.stages")) {
    c.stages.clear();
    std::stringstream ss(*st);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      tok.erase(0, tok.find_first_not_of(" \t"));
      tok.erase(tok.find_last_not_of(" \t") + 1);
      if (tok.empty()) continue;
      if (tok == "train") {
        c.stages.push_back(Stage::TrainEeg);
        c.stages.push_back(Stage::TrainFmeg);
        continue;
      }
      if (tok == "all") {
        c.stages.assign(std::begin(kAllStages), std::end(kAllStages));
        continue;
      }
      const auto s = parse_stage(tok);
      if (!s) fail(ErrorCode::Config, "unknown stage '" + tok + "'");
      c.stages.push_back(*s);
    }
  }

  for (auto* sc : {&c.synth_eeg, &c.synth_fmeg}) {
    r.get("synth.recordings", sc->n_recordings);
    r.get("synth.duration", sc->duration);
    r.get("synth.channels", sc->n_channels);
    r.get("synth.artifact_rate", sc->artifact_rate);
    r.get("synth.burst_to_background", sc->burst_to_background);
  }
  r.get("synth.eeg_amplitude", c.synth_eeg.amplitude_scale);
  r.get("synth.fmeg_amplitude", c.synth_fmeg.amplitude_scale);

  auto& p = c.preprocess;
  r.get("preprocess.band_lo", p.band_lo);
  r.get("preprocess.band_hi", p.band_hi);
  if (auto v = r.raw("preprocess.artifact_threshold")) {
    if (*v == "auto" || v->empty()) {
      p.artifact_threshold.reset();
    } else {
      double t = 0;
      r.get("preprocess.artifact_threshold", t);
      p.artifact_threshold = t;
    }
  }
  r.get("preprocess.artifact_margin", p.artifact_margin);
  r.get("preprocess.nleo_multiplier", p.nleo_multiplier);
  r.get("preprocess.smoothing_window", p.detection.smoothing_window);
  r.get("preprocess.min_gap", p.detection.min_gap);
  r.get("preprocess.segment_length", p.segmentation.length_s);
  r.get("preprocess.segment_hop", p.segmentation.hop_s);
  r.get("preprocess.train_fraction", p.train_fraction);
  r.get("preprocess.train_only_stats", p.train_only_stats);

  r.get("edm.sigma_data", c.edm.sigma_data);
  r.get("edm.sigma_min", c.edm.sigma_min);
  r.get("edm.sigma_max", c.edm.sigma_max);
  r.get("edm.rho", c.edm.rho);
  r.get("edm.p_mean", c.edm.p_mean);
  r.get("edm.p_std", c.edm.p_std);

  r.get("model.base_width", c.model.base_width);
  if (auto v = r.raw("model.mults")) c.model.mults = parse_int_list(*v);
  r.get("model.res_blocks", c.model.res_blocks);
  if (auto v = r.raw("model.attention_lengths")) c.model.attention_lengths = parse_int_list(*v);
  r.get("model.groups", c.model.groups);

  r.get("train.iterations", c.train.iterations);
  r.get("train.batch", c.train.batch_size);
  r.get("train.learning_rate", c.train.learning_rate);
  r.get("train.lr_rampup", c.train.lr_rampup);
  r.get("train.lr_cosine", c.train.lr_cosine);
  r.get("train.ema_decay", c.train.ema_decay);
  r.get("train.sigma_data_from_data", c.train.sigma_data_from_data);
  r.get("train.log_every", c.train.log_every);

  r.get("bridge.preset", c.bridge.preset);
  if (auto v = r.raw("bridge.solver")) {
    const auto k = parse_solver_kind(*v);
    if (!k) fail(ErrorCode::Config, "unknown solver '" + *v + "'");
    c.bridge.solver = *k;
  }
  r.get("bridge.steps", c.bridge.steps);
  r.get("bridge.cycle", c.bridge.cycle);
  r.get("bridge.max_segments", c.bridge.max_segments);
  r.get("bridge.chunk", c.bridge.chunk);
  if (auto v = r.raw("bridge.eeg_checkpoint"); v && !v->empty()) c.bridge.eeg_checkpoint = *v;
  if (auto v = r.raw("bridge.fmeg_checkpoint"); v && !v->empty()) c.bridge.fmeg_checkpoint = *v;

  // Derived seeds.
  c.synth_eeg.rng_seed = c.seed * 2 + 1;
  c.synth_fmeg.rng_seed = c.seed * 2 + 2;
  c.preprocess.seed = c.seed;
  c.train.seed = c.seed;
}

pt::ptree parse_ini(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    fail(ErrorCode::Config, std::string("config parse error: ") + e.what());
  }
  return tree;
}

}  // namespace

const char* to_string(Stage s) noexcept {
  switch (s) {
    case Stage::Synth: return "synth";
    case Stage::Preprocess: return "preprocess";
    case Stage::TrainEeg: return "train-eeg";
    case Stage::TrainFmeg: return "train-fmeg";
    case Stage::Translate: return "translate";
    case Stage::Evaluate: return "evaluate";
  }
  return "?";
}

std::optional<Stage> parse_stage(const std::string& s) {
  for (Stage st : kAllStages)
    if (s == to_string(st)) return st;
  return std::nullopt;
}

SolverSpec BridgeConfig::solver_spec(const EdmConfig& edm) const {
  if (!preset.empty()) return solver_preset(preset, edm);
  return make_solver(solver, steps, edm);
}

void PipelineConfig::validate() const {
  synth_eeg.validate();
  synth_fmeg.validate();
  edm.validate();
  model.validate();
  train.validate();
  require(model.length == 320, ErrorCode::Config, "segments are 320 samples; model.length must be 320");
  require(preprocess.train_fraction > 0 && preprocess.train_fraction < 1, ErrorCode::Config,
          "train_fraction must lie in (0, 1)");
  require(preprocess.nleo_multiplier > 0, ErrorCode::Config, "nleo_multiplier must be positive");
  require(bridge.chunk > 0, ErrorCode::Config, "bridge.chunk must be positive");
  (void)bridge.solver_spec(edm);
  require(!stages.empty(), ErrorCode::Config, "no stages selected");
}

bool PipelineConfig::wants(Stage s) const { return std::find(stages.begin(), stages.end(), s) != stages.end(); }

PipelineConfig paper_config() {
  PipelineConfig c;
  c.preset = "paper";
  c.synth_eeg = default_synth_config(Modality::Eeg);
  c.synth_fmeg = default_synth_config(Modality::Fmeg);
  c.train = paper_train_config();
  c.bridge.preset = "paper-heun";
  c.bridge.max_segments = 0;
  c.synth_eeg.rng_seed = c.seed * 2 + 1;
  c.synth_fmeg.rng_seed = c.seed * 2 + 2;
  c.preprocess.seed = c.seed;
  c.train.seed = c.seed;
  return c;
}

PipelineConfig desk_config() {
  PipelineConfig c = paper_config();
  c.preset = "desk";
  c.model.base_width = 16;
  c.model.mults = {1, 2, 4};
  c.model.res_blocks = 1;
  c.model.attention_lengths = {80};
  c.model.groups = 4;
  c.train.iterations = 2000;
  c.train.batch_size = 32;
  c.train.learning_rate = 2e-3;
  c.train.lr_rampup = 200;
  c.train.ema_decay = 0.995;
  c.train.lr_cosine = true;
  c.train.sigma_data_from_data = true;
  c.bridge.max_segments = 128;
  return c;
}

PipelineConfig preset_config(const std::string& name) {
  if (name == "desk") return desk_config();
  if (name == "paper") return paper_config();
  fail(ErrorCode::Config, "unknown preset '" + name + "'");
}

PipelineConfig config_from_string(const std::string& ini, const std::vector<std::string>& overrides) {
  pt::ptree tree = parse_ini(ini);
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    const auto dot = o.find('.');
    require(eq != std::string::npos && dot != std::string::npos && dot < eq, ErrorCode::Config,
            "override '" + o + "' must look like section.key=value");
    tree.put(pt::ptree::path_type(o.substr(0, eq), '.'), o.substr(eq + 1));
  }
  std::string preset = "desk";
  if (auto p = tree.get_optional<std::string>(pt::ptree::path_type("run.preset", '.'))) preset = *p;
  PipelineConfig c = preset_config(preset);
  Reader r(tree);
  r.raw("run.preset");
  apply(c, r);
  r.check_unknown();
  c.validate();
  return c;
}

PipelineConfig load_config(const std::filesystem::path& file, const std::vector<std::string>& overrides) {
  std::ifstream in(file);
  require(in.good(), ErrorCode::Io, "cannot read config " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_string(ss.str(), overrides);
}

namespace {

std::string section_synth(const PipelineConfig& c) {
  const auto& e = c.synth_eeg;
  return fmt::format(
      "[synth]\nrecordings = {}\nduration = {}\nchannels = {}\nartifact_rate = {}\nburst_to_background = {}\n"
      "eeg_amplitude = {}\nfmeg_amplitude = {}\n",
      e.n_recordings, fmt_double(e.duration), e.n_channels, fmt_double(e.artifact_rate),
      fmt_double(e.burst_to_background), fmt_double(c.synth_eeg.amplitude_scale),
      fmt_double(c.synth_fmeg.amplitude_scale));
}

std::string section_preprocess(const PipelineConfig& c) {
  const auto& p = c.preprocess;
  return fmt::format(
      "[preprocess]\nband_lo = {}\nband_hi = {}\nartifact_threshold = {}\nartifact_margin = {}\n"
      "nleo_multiplier = {}\nsmoothing_window = {}\nmin_gap = {}\nsegment_length = {}\nsegment_hop = {}\n"
      "train_fraction = {}\ntrain_only_stats = {}\n",
      fmt_double(p.band_lo), fmt_double(p.band_hi),
      p.artifact_threshold ? fmt_double(*p.artifact_threshold) : std::string("auto"), fmt_double(p.artifact_margin),
      fmt_double(p.nleo_multiplier), p.detection.smoothing_window, fmt_double(p.detection.min_gap),
      fmt_double(p.segmentation.length_s), fmt_double(p.segmentation.hop_s), fmt_double(p.train_fraction),
      p.train_only_stats);
}

std::string section_edm(const PipelineConfig& c) {
  const auto& e = c.edm;
  return fmt::format("[edm]\nsigma_data = {}\nsigma_min = {}\nsigma_max = {}\nrho = {}\np_mean = {}\np_std = {}\n",
                     fmt_double(e.sigma_data), fmt_double(e.sigma_min), fmt_double(e.sigma_max), fmt_double(e.rho),
                     fmt_double(e.p_mean), fmt_double(e.p_std));
}

std::string section_model(const PipelineConfig& c) {
  const auto& m = c.model;
  return fmt::format("[model]\nbase_width = {}\nmults = {}\nres_blocks = {}\nattention_lengths = {}\ngroups = {}\n",
                     m.base_width, join(m.mults), m.res_blocks, join(m.attention_lengths), m.groups);
}

std::string section_train(const PipelineConfig& c, bool with_log) {
  const auto& t = c.train;
  std::string s = fmt::format(
      "[train]\niterations = {}\nbatch = {}\nlearning_rate = {}\nlr_rampup = {}\nlr_cosine = {}\n"
      "ema_decay = {}\nsigma_data_from_data = {}\n",
      t.iterations, t.batch_size, fmt_double(t.learning_rate), t.lr_rampup, t.lr_cosine, fmt_double(t.ema_decay),
      t.sigma_data_from_data);
  if (with_log) s += fmt::format("log_every = {}\n", t.log_every);
  return s;
}

std::string section_bridge(const PipelineConfig& c, bool with_paths) {
  const auto& b = c.bridge;
  std::string s = fmt::format("[bridge]\npreset = {}\nsolver = {}\nsteps = {}\ncycle = {}\nmax_segments = {}\n",
                              b.preset, to_string(b.solver), b.steps, b.cycle, b.max_segments);
  if (with_paths) {
    s += fmt::format("chunk = {}\n", b.chunk);
    s += fmt::format("eeg_checkpoint = {}\n", b.eeg_checkpoint ? b.eeg_checkpoint->string() : "");
    s += fmt::format("fmeg_checkpoint = {}\n", b.fmeg_checkpoint ? b.fmeg_checkpoint->string() : "");
  }
  return s;
}

}  // namespace

std::string to_ini(const PipelineConfig& c) {
  std::vector<std::string> st;
  for (Stage s : c.stages) st.emplace_back(to_string(s));
  std::string out = fmt::format("[run]\npreset = {}\nworkspace = {}\nseed = {}\nstages = {}\n\n", c.preset,
                                c.workspace.string(), c.seed, fmt::format("{}", fmt::join(st, ",")));
  out += section_synth(c) + "\n" + section_preprocess(c) + "\n" + section_edm(c) + "\n" + section_model(c) + "\n" +
         section_train(c, true) + "\n" + section_bridge(c, true);
  return out;
}

std::string stage_fingerprint(const PipelineConfig& c, Stage s) {
  const std::string seed = fmt::format("seed = {}\n", c.seed);
  switch (s) {
    case Stage::Synth: return seed + section_synth(c);
    case Stage::Preprocess: return seed + section_preprocess(c);
    case Stage::TrainEeg:
    case Stage::TrainFmeg: return seed + section_edm(c) + section_model(c) + section_train(c, false);
    case Stage::Translate: return section_bridge(c, false);
    case Stage::Evaluate: return "evaluate v1\n";
  }
  return {};
}

}  // namespace ddib
