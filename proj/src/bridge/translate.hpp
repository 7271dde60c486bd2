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

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "bridge/solver.hpp"
#include "preprocess/segments.hpp"

namespace ddib {

// x^(s) -> x^(l) under the source model -> x^(t) under the target model,
// optionally followed by the way back (x'^(l), x'^(s)).
struct TranslationTrace {
  std::vector<double> source;
  std::vector<double> latent;
  std::vector<double> translated;
  std::optional<std::vector<double>> reconstructed;
  std::optional<std::vector<double>> latent2;
  Provenance provenance;
  std::size_t nfe_forward = 0;
  std::size_t nfe_reverse = 0;
  std::size_t nfe_back_forward = 0;
  std::size_t nfe_back_reverse = 0;
  std::size_t nfe_total = 0;
};

TranslationTrace translate(const Denoiser& src, const Denoiser& tgt, const Segment& x_s, const SolverSpec& spec);
TranslationTrace cycle(const Denoiser& src, const Denoiser& tgt, const Segment& x_s, const SolverSpec& spec);

using BatchProgress = std::function<void(std::size_t done, std::size_t total)>;

// Translates segments in groups of `chunk` rows per denoiser call. Every
// trace reports the passes one segment went through.
std::vector<TranslationTrace> translate_batch(const Denoiser& src, const Denoiser& tgt,
                                              const std::vector<Segment>& segments, const SolverSpec& spec,
                                              bool with_cycle, std::size_t chunk = 64,
                                              const BatchProgress& progress = {});

}  // namespace ddib
