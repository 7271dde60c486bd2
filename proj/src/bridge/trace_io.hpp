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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bridge/translate.hpp"
#include "preprocess/normalize.hpp"

namespace ddib {

struct TraceSet {
  Modality source_modality = Modality::Eeg;
  Modality target_modality = Modality::Fmeg;
  SolverKind solver = SolverKind::Heun;
  std::size_t steps = 0;
  bool cycle = false;
  std::optional<NormStats> source_stats;
  std::optional<NormStats> target_stats;
  std::vector<TranslationTrace> traces;
};

// Directory layout: manifest.json, source.f32, latent.f32, translated.f32,
// and for cycles reconstructed.f32 and latent2.f32 (count x length packed
// float32), plus a human-readable summary.txt.
void save_traces(const TraceSet& set, const std::filesystem::path& dir);
TraceSet load_traces(const std::filesystem::path& dir);

// True when dir holds a manifest written by save_traces.
bool is_trace_dir(const std::filesystem::path& dir);

std::string trace_summary(const TraceSet& set);

}  // namespace ddib
