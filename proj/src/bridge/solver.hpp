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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "diffusion/denoiser.hpp"
#include "diffusion/edm.hpp"

namespace ddib {

enum class SolverKind { Euler, Heun };

const char* to_string(SolverKind k) noexcept;
std::optional<SolverKind> parse_solver_kind(std::string_view s);

struct SolverSpec {
  SolverKind kind = SolverKind::Heun;
  SigmaSchedule schedule;

  void validate() const;
  std::size_t steps() const noexcept { return schedule.steps(); }
  // Denoiser passes per direction: 2N-1 for Heun, N for Euler.
  std::size_t leg_nfe() const noexcept;
};

SolverSpec make_solver(SolverKind kind, std::size_t steps, const EdmConfig& edm);
// "paper-heun" (Heun, N=30) and "paper-ddib" (Euler, N=250).
SolverSpec solver_preset(std::string_view name, const EdmConfig& edm);

struct SolveResult {
  std::vector<double> x;
  std::size_t nfe = 0;
};

// dx/dsigma = (x - D(x; sigma)) / sigma from sigma_1 down to 0. The last
// interval is a plain Euler step. x holds `batch` rows; each denoiser call
// covers all rows and counts as one evaluation.
SolveResult ode_solve_reverse(const Denoiser& d, std::span<const double> x_T, std::size_t batch,
                              const SolverSpec& spec);

// From clean data up to sigma_1. The first interval 0 -> sigma_N is a single
// Euler step using the slope at sigma_N.
SolveResult ode_solve_forward(const Denoiser& d, std::span<const double> x_0, std::size_t batch,
                              const SolverSpec& spec);

// One interval sigma -> sigma_next (> 0) in place; returns evaluations used.
std::size_t heun_step(const Denoiser& d, std::vector<double>& x, std::size_t batch, double sigma,
                      double sigma_next);
std::size_t euler_step(const Denoiser& d, std::vector<double>& x, std::size_t batch, double sigma,
                       double sigma_next);

}  // namespace ddib
