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

#include <optional>
#include <string>
#include <string_view>

#include "common/error.hpp"

namespace ddib {

enum class Modality { Eeg, Fmeg };

inline const char* to_string(Modality m) noexcept {
  return m == Modality::Eeg ? "eeg" : "fmeg";
}

// Physical unit of raw samples for each modality.
inline const char* units_of(Modality m) noexcept {
  return m == Modality::Eeg ? "uV" : "fT";
}

inline std::optional<Modality> parse_modality(std::string_view s) {
  if (s == "eeg" || s == "EEG") return Modality::Eeg;
  if (s == "fmeg" || s == "FMEG" || s == "fMEG") return Modality::Fmeg;
  return std::nullopt;
}

inline Modality modality_or_throw(std::string_view s) {
  auto m = parse_modality(s);
  if (!m) fail(ErrorCode::InvalidArgument, "unknown modality '" + std::string(s) + "'");
  return *m;
}

inline Modality other(Modality m) noexcept {
  return m == Modality::Eeg ? Modality::Fmeg : Modality::Eeg;
}

}  // namespace ddib
