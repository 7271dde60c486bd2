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

#include "diffusion/checkpoint.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "common/binary_io.hpp"
#include "common/error.hpp"

namespace ddib {

namespace {

constexpr char kMagic[] = "DDIBCKPT\n";

using nlohmann::json;

json to_json(const EdmConfig& e) {
  return {{"sigma_data", e.sigma_data}, {"sigma_min", e.sigma_min}, {"sigma_max", e.sigma_max},
          {"rho", e.rho},               {"p_mean", e.p_mean},       {"p_std", e.p_std}};
}

EdmConfig edm_from_json(const json& j) {
  EdmConfig e;
  e.sigma_data = j.at("sigma_data").get<double>();
  e.sigma_min = j.at("sigma_min").get<double>();
  e.sigma_max = j.at("sigma_max").get<double>();
  e.rho = j.at("rho").get<double>();
  e.p_mean = j.at("p_mean").get<double>();
  e.p_std = j.at("p_std").get<double>();
  e.validate();
  return e;
}

json to_json(const nn::UNetConfig& a) {
  return {{"base_width", a.base_width}, {"mults", a.mults},   {"res_blocks", a.res_blocks},
          {"attention_lengths", a.attention_lengths},          {"groups", a.groups},
          {"length", a.length},         {"noise_embedding", a.base_width}};
}

nn::UNetConfig arch_from_json(const json& j) {
  nn::UNetConfig a;
  a.base_width = j.at("base_width").get<int>();
  a.mults = j.at("mults").get<std::vector<int>>();
  a.res_blocks = j.at("res_blocks").get<int>();
  a.attention_lengths = j.at("attention_lengths").get<std::vector<int>>();
  a.groups = j.at("groups").get<int>();
  a.length = j.at("length").get<int>();
  a.validate();
  return a;
}

}  // namespace

std::vector<nn::TensorEntry> tensor_index(const nn::UNetConfig& arch) {
  return nn::UNet<float>(arch).params().index();
}

void save_checkpoint(const Checkpoint& c, const std::filesystem::path& file) {
  require(c.params.size() == (c.tensors.empty() ? 0 : c.tensors.back().offset + c.tensors.back().count),
          ErrorCode::InvalidArgument, "checkpoint parameters do not match the tensor index");
  for (float v : c.params) require(std::isfinite(v), ErrorCode::Numeric, "checkpoint holds non-finite parameters");

  json h;
  h["format"] = "ddib-checkpoint";
  h["version"] = c.version;
  h["modality"] = to_string(c.modality);
  h["edm"] = to_json(c.edm);
  if (c.norm_stats)
    h["norm_stats"] = {{"min", c.norm_stats->min}, {"max", c.norm_stats->max},
                       {"modality", to_string(c.norm_stats->modality)}};
  else
    h["norm_stats"] = nullptr;
  h["architecture"] = to_json(c.arch);
  h["training"] = {{"iterations", c.meta.iterations}, {"batch_size", c.meta.batch_size},
                   {"learning_rate", c.meta.learning_rate}, {"ema_decay", c.meta.ema_decay},
                   {"seed", c.meta.seed}, {"final_loss", c.meta.final_loss},
                   {"loss_trace", c.meta.loss_trace}};
  auto idx = json::array();
  for (const auto& t : c.tensors)
    idx.push_back({{"name", t.name}, {"shape", t.shape}, {"offset", t.offset}, {"count", t.count}});
  h["tensors"] = idx;

  const std::string header = h.dump();
  std::string blob = kMagic;
  blob += std::to_string(header.size()) + "\n";
  blob += header;
  io::append_f32_le(blob, c.params);
  io::ensure_dir(file.parent_path().empty() ? std::filesystem::path(".") : file.parent_path());
  const auto tmp = std::filesystem::path(file.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    require(out.good(), ErrorCode::Io, "cannot open " + tmp.string() + " for writing");
    out.write(blob.data(), static_cast<std::streamsize>(blob.size()));
    require(out.good(), ErrorCode::Io, "write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, file);
}

Checkpoint load_checkpoint(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  require(in.good(), ErrorCode::Io, "cannot open checkpoint " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string data = ss.str();
  const std::string magic = kMagic;
  require(data.compare(0, magic.size(), magic) == 0, ErrorCode::Format, file.string() + " is not a checkpoint");
  const auto nl = data.find('\n', magic.size());
  require(nl != std::string::npos, ErrorCode::Format, "truncated checkpoint header");
  std::size_t header_len = 0;
  try {
    header_len = std::stoull(data.substr(magic.size(), nl - magic.size()));
  } catch (const std::exception&) {
    fail(ErrorCode::Format, "bad checkpoint header length");
  }
  const std::size_t body = nl + 1 + header_len;
  require(body <= data.size(), ErrorCode::Format, "truncated checkpoint header");

  Checkpoint c;
  try {
    const json h = json::parse(data.substr(nl + 1, header_len));
    c.version = h.at("version").get<int>();
    require(c.version == kCheckpointVersion, ErrorCode::Format,
            "unsupported checkpoint version " + std::to_string(c.version));
    c.modality = modality_or_throw(h.at("modality").get<std::string>());
    c.edm = edm_from_json(h.at("edm"));
    if (!h.at("norm_stats").is_null()) {
      const auto& n = h.at("norm_stats");
      c.norm_stats = NormStats{n.at("min").get<double>(), n.at("max").get<double>(),
                               modality_or_throw(n.at("modality").get<std::string>())};
    }
    c.arch = arch_from_json(h.at("architecture"));
    const auto& t = h.at("training");
    c.meta.iterations = t.at("iterations").get<std::uint64_t>();
    c.meta.batch_size = t.at("batch_size").get<std::size_t>();
    c.meta.learning_rate = t.at("learning_rate").get<double>();
    c.meta.ema_decay = t.at("ema_decay").get<double>();
    c.meta.seed = t.at("seed").get<std::uint64_t>();
    c.meta.final_loss = t.at("final_loss").get<double>();
    c.meta.loss_trace = t.at("loss_trace").get<std::vector<double>>();
    for (const auto& e : h.at("tensors"))
      c.tensors.push_back({e.at("name").get<std::string>(), e.at("shape").get<std::vector<int>>(),
                           e.at("offset").get<std::size_t>(), e.at("count").get<std::size_t>()});
  } catch (const json::exception& e) {
    fail(ErrorCode::Format, std::string("malformed checkpoint header: ") + e.what());
  }

  const auto expected = tensor_index(c.arch);
  require(expected.size() == c.tensors.size(), ErrorCode::Format, "checkpoint tensor index is incomplete");
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const auto& a = expected[i];
    const auto& b = c.tensors[i];
    require(a.name == b.name && a.shape == b.shape && a.offset == b.offset && a.count == b.count,
            ErrorCode::Format, "checkpoint tensor '" + b.name + "' does not match the architecture");
  }
  const std::size_t total = expected.empty() ? 0 : expected.back().offset + expected.back().count;
  require(data.size() - body == total * 4, ErrorCode::Format, "checkpoint tensor data has the wrong size");
  c.params = io::decode_f32_le(data.data() + body, total);
  return c;
}

std::unique_ptr<NetDenoiser> make_denoiser(const Checkpoint& c) {
  return std::make_unique<NetDenoiser>(c.arch, c.edm, c.modality, c.params);
}

}  // namespace ddib
