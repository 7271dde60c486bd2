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

#include "evaluate/metrics.hpp"

#include <cmath>

#include "common/error.hpp"

namespace ddib {

double mse(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), ErrorCode::InvalidArgument, "mse needs equal lengths");
  require(!a.empty(), ErrorCode::InvalidArgument, "mse of empty segments");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s / static_cast<double>(a.size());
}

double mav(std::span<const double> a) {
  require(!a.empty(), ErrorCode::InvalidArgument, "mav of an empty segment");
  double s = 0.0;
  for (double v : a) s += std::fabs(v);
  return s / static_cast<double>(a.size());
}

double ratio_pct(std::span<const double> original, std::span<const double> other) {
  const double m = mav(original);
  require(m > 0.0, ErrorCode::Numeric, "ratio undefined for a segment with zero MAV");
  return 100.0 * mse(original, other) / m;
}

MeanStd mean_std(std::span<const double> v) {
  require(!v.empty(), ErrorCode::InvalidArgument, "mean of an empty list");
  double s = 0.0;
  for (double x : v) s += x;
  const double mean = s / static_cast<double>(v.size());
  double q = 0.0;
  for (double x : v) q += (x - mean) * (x - mean);
  return {mean, std::sqrt(q / static_cast<double>(v.size()))};
}

MetricRow aggregate(const std::string& label, const std::vector<SegmentPair>& pairs, std::size_t nfe) {
  require(!pairs.empty(), ErrorCode::InvalidArgument, "aggregate needs at least one pair");
  std::vector<double> mavs, mses, ratios;
  for (const auto& [orig, other] : pairs) {
    mavs.push_back(mav(orig));
    mses.push_back(mse(orig, other));
    ratios.push_back(ratio_pct(orig, other));
  }
  MetricRow r;
  r.label = label;
  const auto a = mean_std(mavs), b = mean_std(mses), c = mean_std(ratios);
  r.mav_mean = a.mean;
  r.mav_std = a.std;
  r.mse_mean = b.mean;
  r.mse_std = b.std;
  r.ratio_mean_pct = c.mean;
  r.ratio_std_pct = c.std;
  r.nfe = nfe;
  r.count = pairs.size();
  return r;
}

}  // namespace ddib
