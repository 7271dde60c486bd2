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

#include "preprocess/recording.hpp"

namespace ddib {

// Default amplitude thresholds: 500 uV for EEG, 2000 fT for fMEG.
double default_artifact_threshold(Modality m) noexcept;

// Masks every sample where any channel exceeds |threshold|, widened by
// margin seconds on both sides ([t - margin, t + dt + margin)), and merges
// the result with the existing mask.
Recording reject_amplitude_artifacts(const Recording& rec, double threshold, double margin = 0.5);

}  // namespace ddib
