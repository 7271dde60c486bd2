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

#include "bridge/solver.hpp"

#include <cmath>

#include "common/error.hpp"

namespace ddib {

namespace {

std::vector<double> slope(const Denoiser& d, const std::vector<double>& x, std::size_t batch, double sigma) {
  std::vector<double> den(x.size());
  d.denoise(x, batch, sigma, den);
  for (std::size_t i = 0; i < x.size(); ++i) den[i] = (x[i] - den[i]) / sigma;
  return den;
}

void check_finite(const std::vector<double>& x, std::size_t step, const char* dir) {
  for (double v : x)
    if (!std::isfinite(v))
      fail(ErrorCode::SolverDivergence,
           std::string(dir) + " integration produced a non-finite state at step " + std::to_string(step));
}

void check_input(std::span<const double> x, std::size_t batch) {
  require(batch > 0 && !x.empty() && x.size() % batch == 0, ErrorCode::InvalidArgument,
          "solver input must hold a positive number of equal rows");
  for (double v : x) require(std::isfinite(v), ErrorCode::InvalidArgument, "solver input is not finite");
}

}  // namespace

const char* to_string(SolverKind k) noexcept { return k == SolverKind::Heun ? "heun" : "euler"; }

std::optional<SolverKind> parse_solver_kind(std::string_view s) {
  if (s == "heun" || s == "HEUN") return SolverKind::Heun;
  if (s == "euler" || s == "EULER") return SolverKind::Euler;
  return std::nullopt;
}

void SolverSpec::validate() const {
  require(schedule.steps() >= 1, ErrorCode::Schedule, "solver schedule is empty");
  require(kind != SolverKind::Heun || schedule.steps() >= 2, ErrorCode::Schedule, "Heun needs at least 2 steps");
}

std::size_t SolverSpec::leg_nfe() const noexcept {
  const std::size_t n = schedule.steps();
  return kind == SolverKind::Heun ? 2 * n - 1 : n;
}

SolverSpec make_solver(SolverKind kind, std::size_t steps, const EdmConfig& edm) {
  SolverSpec s{kind, karras_schedule(steps, edm)};
  s.validate();
  return s;
}

SolverSpec solver_preset(std::string_view name, const EdmConfig& edm) {
  if (name == "paper-heun") return make_solver(SolverKind::Heun, 30, edm);
  if (name == "paper-ddib") return make_solver(SolverKind::Euler, 250, edm);
  fail(ErrorCode::Config, "unknown solver preset '" + std::string(name) + "'");
}

std::size_t euler_step(const Denoiser& d, std::vector<double>& x, std::size_t batch, double sigma,
                       double sigma_next) {
  const auto k = slope(d, x, batch, sigma);
  const double h = sigma_next - sigma;
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += h * k[i];
  return 1;
}

std::size_t heun_step(const Denoiser& d, std::vector<double>& x, std::size_t batch, double sigma,
                      double sigma_next) {
  require(sigma_next > 0, ErrorCode::InvalidArgument, "Heun correction needs sigma_next > 0");
  const auto k1 = slope(d, x, batch, sigma);
  const double h = sigma_next - sigma;
  std::vector<double> xe(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) xe[i] = x[i] + h * k1[i];
  const auto k2 = slope(d, xe, batch, sigma_next);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += h * 0.5 * (k1[i] + k2[i]);
  return 2;
}

SolveResult ode_solve_reverse(const Denoiser& d, std::span<const double> x_T, std::size_t batch,
                              const SolverSpec& spec) {
  spec.validate();
  check_input(x_T, batch);
  const auto& sch = spec.schedule;
  SolveResult r{{x_T.begin(), x_T.end()}, 0};
  for (std::size_t i = 0; i < sch.steps(); ++i) {
    const double s = sch[i];
    const double s_next = sch.with_terminal(i + 1);
    if (spec.kind == SolverKind::Heun && s_next > 0)
      r.nfe += heun_step(d, r.x, batch, s, s_next);
    else
      r.nfe += euler_step(d, r.x, batch, s, s_next);
    check_finite(r.x, i, "reverse");
  }
  return r;
}

SolveResult ode_solve_forward(const Denoiser& d, std::span<const double> x_0, std::size_t batch,
                              const SolverSpec& spec) {
  spec.validate();
  check_input(x_0, batch);
  const auto& sch = spec.schedule;
  const std::size_t n = sch.steps();
  SolveResult r{{x_0.begin(), x_0.end()}, 0};

  const double s_first = sch[n - 1];
  const auto k = slope(d, r.x, batch, s_first);
  for (std::size_t i = 0; i < r.x.size(); ++i) r.x[i] += s_first * k[i];
  r.nfe = 1;
  check_finite(r.x, 0, "forward");

  for (std::size_t j = n - 1; j-- > 0;) {
    const double s = sch[j + 1];
    const double s_next = sch[j];
    if (spec.kind == SolverKind::Heun)
      r.nfe += heun_step(d, r.x, batch, s, s_next);
    else
      r.nfe += euler_step(d, r.x, batch, s, s_next);
    check_finite(r.x, n - 1 - j, "forward");
  }
  return r;
}

}  // namespace ddib
