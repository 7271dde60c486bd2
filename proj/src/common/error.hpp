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

#include <stdexcept>
#include <string>

namespace ddib {

enum class ErrorCode {
  InvalidArgument,
  InvalidBand,
  TooShort,
  EmptyRecording,
  Calibration,
  DegenerateStats,
  Schedule,
  Config,
  Numeric,
  SolverDivergence,
  Usage,
  Io,
  Format,
  Dependency,
  Verification,
};

inline const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::InvalidBand: return "invalid-band";
    case ErrorCode::TooShort: return "too-short";
    case ErrorCode::EmptyRecording: return "empty-recording";
    case ErrorCode::Calibration: return "calibration";
    case ErrorCode::DegenerateStats: return "degenerate-stats";
    case ErrorCode::Schedule: return "schedule";
    case ErrorCode::Config: return "config";
    case ErrorCode::Numeric: return "numeric";
    case ErrorCode::SolverDivergence: return "solver-divergence";
    case ErrorCode::Usage: return "usage";
    case ErrorCode::Io: return "io";
    case ErrorCode::Format: return "format";
    case ErrorCode::Dependency: return "dependency";
    case ErrorCode::Verification: return "verification";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) throw Error(code, what);
}

}  // namespace ddib
