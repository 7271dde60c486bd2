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

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bridge/trace_io.hpp"
#include "evaluate/metrics.hpp"
#include "evaluate/spectral.hpp"

namespace ddib {

// Published real-data reconstruction results (MAV and MSE in units of 1e-3,
// ratio in percent), kept for side-by-side reading of desk-scale tables.
struct ReferenceRow {
  const char* data;
  const char* method;
  int nfe;
  double mav_mean, mav_std;
  double mse_mean, mse_std;
  double ratio_mean, ratio_std;
};

inline constexpr std::array<ReferenceRow, 6> kReferenceTable{{
    {"eeg", "cyclegan", 1, 129, 122, 6.96, 11.30, 4.34, 4.43},
    {"eeg", "ddib", 500, 129, 122, 0.17, 0.40, 0.14, 0.06},
    {"eeg", "heun-bridge", 118, 129, 122, 0.01, 0.06, 0.01, 0.01},
    {"fmeg", "cyclegan", 1, 143, 133, 9.04, 17.30, 4.84, 5.69},
    {"fmeg", "ddib", 500, 143, 133, 0.80, 1.98, 0.67, 0.57},
    {"fmeg", "heun-bridge", 118, 143, 133, 0.07, 0.61, 0.05, 0.20},
}};

struct SetEvaluation {
  std::string name;
  Modality source = Modality::Eeg;
  Modality target = Modality::Fmeg;
  SolverKind solver = SolverKind::Heun;
  std::size_t steps = 0;
  std::size_t translate_nfe = 0;
  std::size_t cycle_nfe = 0;
  std::optional<MetricRow> reconstruction;  // original vs reconstructed
  MetricRow translation;                    // original vs translated
  SpectralReport original;
  SpectralReport translated;
  std::optional<SpectralReport> reconstructed;
  std::optional<SpectralComparison> reconstruction_spectrum;
};

// Translated spectra of one direction measured against the originals of
// both modalities.
struct CrossCheck {
  std::string name;
  Modality source = Modality::Eeg;
  Modality target = Modality::Fmeg;
  double distance_to_target = 0.0;
  double distance_to_source = 0.0;
  bool closer_to_target = false;
  // mean translation MSE over mean cycle MSE (0 without a cycle).
  double translation_over_cycle = 0.0;
};

struct Evaluation {
  std::vector<SetEvaluation> sets;
  std::vector<CrossCheck> cross;
};

Evaluation evaluate_sets(const std::vector<std::pair<std::string, TraceSet>>& sets);
// dir is a trace directory or a directory of trace directories.
Evaluation evaluate_directory(const std::filesystem::path& dir);

// table1.tsv, bands.tsv, fig_*.tsv plot data, metrics.json, summary.txt.
void write_report(const Evaluation& ev, const std::filesystem::path& out);
std::string evaluation_summary(const Evaluation& ev);

}  // namespace ddib
