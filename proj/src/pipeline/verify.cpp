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

#include "pipeline/verify.hpp"

#include <fmt/format.h>

#include <cmath>

#include "bridge/translate.hpp"
#include "common/rng.hpp"
#include "diffusion/oracle.hpp"

namespace ddib {

namespace {

constexpr std::size_t kLen = 8;

class Counting final : public Denoiser {
 public:
  explicit Counting(const Denoiser& inner) : inner_(inner) {}
  std::size_t dim() const noexcept override { return inner_.dim(); }
  void denoise(std::span<const double> x, std::size_t batch, double sigma, std::span<double> out) const override {
    ++calls;
    inner_.denoise(x, batch, sigma, out);
  }
  using Denoiser::denoise;
  mutable std::size_t calls = 0;

 private:
  const Denoiser& inner_;
};

std::vector<double> start_state(std::uint64_t stream) {
  CounterRng rng(20260101, stream);
  std::vector<double> x(kLen);
  for (auto& v : x) v = rng.normal();
  return x;
}

double rel_err(const std::vector<double>& a, const std::vector<double>& b) {
  double num = 0, den = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return std::sqrt(num / den);
}

OrderSweep sweep(SolverKind kind, bool forward) {
  const EdmConfig edm;
  const auto oracle = GaussianMixtureOracle::gaussian(0.0, 1.0);
  OrderSweep s;
  s.steps = {10, 20, 40};
  for (std::size_t n : s.steps) {
    const SolverSpec spec = make_solver(kind, n, edm);
    const double smax = edm.sigma_max;
    if (!forward) {
      const auto x0 = start_state(1);
      const double f = std::sqrt(1.0 / (1.0 + smax * smax));
      std::vector<double> exact(kLen);
      for (std::size_t i = 0; i < kLen; ++i) exact[i] = x0[i] * f;
      s.errors.push_back(rel_err(ode_solve_reverse(oracle, x0, 1, spec).x, exact));
    } else {
      const auto x0 = start_state(2);
      const double f = std::sqrt(1.0 + smax * smax);
      std::vector<double> exact(kLen);
      for (std::size_t i = 0; i < kLen; ++i) exact[i] = x0[i] * f;
      s.errors.push_back(rel_err(ode_solve_forward(oracle, x0, 1, spec).x, exact));
    }
  }
  for (std::size_t i = 0; i + 1 < s.errors.size(); ++i) s.orders.push_back(std::log2(s.errors[i] / s.errors[i + 1]));
  return s;
}

}  // namespace

OrderSweep reverse_order_sweep(SolverKind kind) { return sweep(kind, false); }
OrderSweep forward_order_sweep(SolverKind kind) { return sweep(kind, true); }

bool VerifyReport::all_passed() const {
  for (const auto& p : properties)
    if (!p.passed) return false;
  return true;
}

std::string VerifyReport::text() const {
  std::string out;
  for (const auto& p : properties) out += fmt::format("[{}] {:<44} {}\n", p.passed ? "PASS" : "FAIL", p.name, p.measured);
  return out;
}

VerifyReport verify_oracles() {
  VerifyReport r;
  const EdmConfig edm;
  auto add = [&](std::string name, bool ok, std::string measured) {
    r.properties.push_back({std::move(name), ok, std::move(measured)});
  };

  // Preconditioning algebra.
  {
    CounterRng rng(7, 1);
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
      const double s = std::exp(rng.uniform(-6, 5)), sd = rng.uniform(0.05, 3);
      const auto p = precondition(s, sd);
      worst = std::max(worst, std::fabs(p.c_in * std::sqrt(s * s + sd * sd) - 1));
      worst = std::max(worst, std::fabs(p.c_out - s * sd * p.c_in) / p.c_out);
    }
    add("preconditioning algebra (100 draws)", worst < 1e-12, fmt::format("max deviation {:.2e}", worst));
  }

  // Oracle score vs central differences of log density.
  {
    CounterRng rng(7, 2);
    double worst = 0;
    for (int t = 0; t < 100; ++t) {
      std::vector<MixtureComponent> comps;
      const int k = 1 + static_cast<int>(rng.below(3));
      for (int c = 0; c < k; ++c) comps.push_back({rng.uniform(0.2, 1.0), {rng.uniform(-1, 1)}, rng.uniform(0.05, 1.0)});
      const GaussianMixtureOracle o(comps);
      const double sigma = std::exp(rng.uniform(std::log(0.01), std::log(10.0)));
      std::vector<double> x(4);
      for (auto& v : x) v = rng.uniform(-1.5, 1.5);
      const auto d = o.denoise(x, sigma);
      double num = 0, den = 0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double h = 1e-5 * std::max(1.0, sigma);
        auto xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        const double fd = (o.log_density(xp, sigma) - o.log_density(xm, sigma)) / (2 * h);
        const double an = (d[i] - x[i]) / (sigma * sigma);
        num += (fd - an) * (fd - an);
        den += an * an;
      }
      worst = std::max(worst, std::sqrt(num / std::max(den, 1e-300)));
    }
    add("oracle score vs finite differences", worst <= 1e-3, fmt::format("max relative error {:.2e}", worst));
  }

  // Convergence orders.
  for (SolverKind k : {SolverKind::Heun, SolverKind::Euler}) {
    const bool heun = k == SolverKind::Heun;
    const double lo = heun ? 1.7 : 0.8, hi = heun ? 2.2 : 1.2;
    for (bool fwd : {false, true}) {
      const auto s = sweep(k, fwd);
      const double asym = s.orders.back();
      add(fmt::format("{} {} order (N=20->40)", to_string(k), fwd ? "forward" : "reverse"), asym >= lo && asym <= hi,
          fmt::format("orders {:.3f}, {:.3f}; errors {:.3e} {:.3e} {:.3e}", s.orders[0], s.orders[1], s.errors[0],
                      s.errors[1], s.errors[2]));
    }
  }

  // Dirac exactness.
  for (SolverKind k : {SolverKind::Heun, SolverKind::Euler}) {
    const auto a = GaussianMixtureOracle::dirac(0.3), b = GaussianMixtureOracle::dirac(-0.7);
    Segment seg;
    seg.values.assign(kLen, 0.3);
    const auto tr = cycle(a, b, seg, make_solver(k, 10, edm));
    const std::vector<double> target(kLen, -0.7);
    const double e1 = rel_err(tr.translated, target), e2 = rel_err(*tr.reconstructed, seg.values);
    add(fmt::format("dirac bridge exactness ({}, N=10)", to_string(k)), e1 <= 1e-10 && e2 <= 1e-10,
        fmt::format("translate {:.1e}, cycle {:.1e}", e1, e2));
  }

  // NFE accounting with an independent counter.
  for (const char* preset : {"paper-heun", "paper-ddib"}) {
    const auto g = GaussianMixtureOracle::gaussian(0.0, 1.0);
    Counting cs(g), ct(g);
    Segment seg;
    seg.values = start_state(3);
    const auto spec = solver_preset(preset, edm);
    const auto tr = translate(cs, ct, seg, spec);
    const std::size_t expect = std::string(preset) == "paper-heun" ? 118 : 500;
    const bool ok = tr.nfe_total == expect && cs.calls == tr.nfe_forward && ct.calls == tr.nfe_reverse &&
                    cs.calls + ct.calls == expect;
    add(fmt::format("NFE {}", preset), ok,
        fmt::format("reported {} ({}+{}), counted {}+{}", tr.nfe_total, tr.nfe_forward, tr.nfe_reverse, cs.calls,
                    ct.calls));
  }
  {
    const auto g = GaussianMixtureOracle::gaussian(0.0, 1.0);
    Counting cs(g), ct(g);
    Segment seg;
    seg.values = start_state(4);
    const auto tr = cycle(cs, ct, seg, solver_preset("paper-heun", edm));
    add("NFE paper-heun cycle", tr.nfe_total == 236 && cs.calls + ct.calls == 236,
        fmt::format("reported {}, counted {}", tr.nfe_total, cs.calls + ct.calls));
  }

  // Self-translation identity.
  {
    const auto g = GaussianMixtureOracle::gaussian(0.0, 1.0);
    Segment seg;
    seg.values = start_state(5);
    const auto tr = translate(g, g, seg, make_solver(SolverKind::Heun, 40, edm));
    const double e = rel_err(tr.translated, seg.values);
    add("gaussian self-translation (Heun N=40)", e <= 2e-3, fmt::format("relative error {:.2e}", e));
  }
  return r;
}

}  // namespace ddib
