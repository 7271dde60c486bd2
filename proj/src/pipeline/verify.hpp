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

#include <string>
#include <vector>

#include "bridge/solver.hpp"

namespace ddib {

struct PropertyResult {
  std::string name;
  bool passed = false;
  std::string measured;
};

struct VerifyReport {
  std::vector<PropertyResult> properties;
  bool all_passed() const;
  std::string text() const;
};

// Training-free checks of the solvers and oracles: convergence orders on the
// standard Gaussian, Dirac exactness, NFE accounting, preconditioning
// algebra, and oracle scores against finite differences.
VerifyReport verify_oracles();

// Empirical orders log2(err(N) / err(2N)) for N = 10, 20, 40 on the
// standard-Gaussian oracle, whose PF-ODE solution is
// x(sigma) = x(sigma_max) sqrt((1 + sigma^2) / (1 + sigma_max^2)).
struct OrderSweep {
  std::vector<std::size_t> steps;
  std::vector<double> errors;
  std::vector<double> orders;  // one per consecutive pair
};

OrderSweep reverse_order_sweep(SolverKind kind);
OrderSweep forward_order_sweep(SolverKind kind);

}  // namespace ddib
