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

#include "bridge/translate.hpp"

#include <algorithm>

#include "common/error.hpp"

namespace ddib {

namespace {

void check_segment(const Denoiser& src, const Segment& s) {
  const auto m = src.modality();
  if (m && *m != s.modality)
    fail(ErrorCode::Usage, std::string("segment modality ") + to_string(s.modality) +
                               " does not match the source model (" + to_string(*m) + ")");
  require(src.dim() == 0 || src.dim() == s.values.size(), ErrorCode::InvalidArgument,
          "segment length does not match the source model");
}

std::vector<TranslationTrace> run(const Denoiser& src, const Denoiser& tgt, const std::vector<Segment>& segs,
                                  std::size_t lo, std::size_t hi, const SolverSpec& spec, bool with_cycle) {
  const std::size_t batch = hi - lo;
  const std::size_t len = segs[lo].values.size();
  std::vector<double> x(batch * len);
  for (std::size_t b = 0; b < batch; ++b) {
    require(segs[lo + b].values.size() == len, ErrorCode::InvalidArgument, "segments differ in length");
    std::copy(segs[lo + b].values.begin(), segs[lo + b].values.end(), x.begin() + static_cast<std::ptrdiff_t>(b * len));
  }
  const SolveResult lat = ode_solve_forward(src, x, batch, spec);
  const SolveResult out = ode_solve_reverse(tgt, lat.x, batch, spec);
  std::optional<SolveResult> lat2, rec;
  if (with_cycle) {
    lat2 = ode_solve_forward(tgt, out.x, batch, spec);
    rec = ode_solve_reverse(src, lat2->x, batch, spec);
  }

  auto row = [len](const std::vector<double>& v, std::size_t b) {
    return std::vector<double>(v.begin() + static_cast<std::ptrdiff_t>(b * len),
                               v.begin() + static_cast<std::ptrdiff_t>((b + 1) * len));
  };
  std::vector<TranslationTrace> traces(batch);
  for (std::size_t b = 0; b < batch; ++b) {
    auto& t = traces[b];
    t.source = segs[lo + b].values;
    t.provenance = segs[lo + b].provenance;
    t.latent = row(lat.x, b);
    t.translated = row(out.x, b);
    t.nfe_forward = lat.nfe;
    t.nfe_reverse = out.nfe;
    if (with_cycle) {
      t.latent2 = row(lat2->x, b);
      t.reconstructed = row(rec->x, b);
      t.nfe_back_forward = lat2->nfe;
      t.nfe_back_reverse = rec->nfe;
    }
    t.nfe_total = t.nfe_forward + t.nfe_reverse + t.nfe_back_forward + t.nfe_back_reverse;
  }
  return traces;
}

}  // namespace

TranslationTrace translate(const Denoiser& src, const Denoiser& tgt, const Segment& x_s, const SolverSpec& spec) {
  check_segment(src, x_s);
  return run(src, tgt, {x_s}, 0, 1, spec, false).front();
}

TranslationTrace cycle(const Denoiser& src, const Denoiser& tgt, const Segment& x_s, const SolverSpec& spec) {
  check_segment(src, x_s);
  return run(src, tgt, {x_s}, 0, 1, spec, true).front();
}

std::vector<TranslationTrace> translate_batch(const Denoiser& src, const Denoiser& tgt,
                                              const std::vector<Segment>& segments, const SolverSpec& spec,
                                              bool with_cycle, std::size_t chunk, const BatchProgress& progress) {
  require(chunk > 0, ErrorCode::InvalidArgument, "chunk must be positive");
  for (const auto& s : segments) check_segment(src, s);
  std::vector<TranslationTrace> all;
  all.reserve(segments.size());
  for (std::size_t lo = 0; lo < segments.size(); lo += chunk) {
    const std::size_t hi = std::min(segments.size(), lo + chunk);
    auto part = run(src, tgt, segments, lo, hi, spec, with_cycle);
    std::move(part.begin(), part.end(), std::back_inserter(all));
    if (progress) progress(hi, segments.size());
  }
  return all;
}

}  // namespace ddib
