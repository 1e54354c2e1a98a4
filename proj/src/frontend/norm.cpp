// Copyright 2026 The sdb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "sdb/error.hpp"
#include "sdb/frontend.hpp"

namespace sdb {

namespace {
constexpr double kLow = 0.05;
constexpr double kHigh = 0.95;

std::size_t CommonWidth(std::span<const FeatureMatrix> training) {
  if (training.empty()) Fail(ErrorCode::kInvalidArgument, "no training features");
  const std::size_t d = training.front().cols();
  for (const auto& f : training)
    if (f.cols() != d) Fail(ErrorCode::kInvalidArgument, "feature widths differ");
  return d;
}
}  // namespace

NormStats FitNorm(std::span<const FeatureMatrix> training) {
  const std::size_t d = CommonWidth(training);
  NormStats s;
  s.min.assign(d, std::numeric_limits<double>::infinity());
  s.max.assign(d, -std::numeric_limits<double>::infinity());
  for (const auto& f : training)
    for (std::size_t t = 0; t < f.rows(); ++t)
      for (std::size_t j = 0; j < d; ++j) {
        s.min[j] = std::min(s.min[j], f(t, j));
        s.max[j] = std::max(s.max[j], f(t, j));
      }
  for (std::size_t j = 0; j < d; ++j)
    if (!std::isfinite(s.min[j])) s.min[j] = s.max[j] = 0.0;
  return s;
}

FeatureMatrix ApplyNorm(const FeatureMatrix& f, const NormStats& stats) {
  if (f.cols() != stats.dims())
    Fail(ErrorCode::kInvalidArgument,
         fmt::format("normaliser expects {} dims, got {}", stats.dims(), f.cols()));
  FeatureMatrix out(f.rows(), f.cols(), f.kind(), f.frame_period());
  for (std::size_t j = 0; j < f.cols(); ++j) {
    const double range = stats.max[j] - stats.min[j];
    for (std::size_t t = 0; t < f.rows(); ++t) {
      if (!(range > 0.0)) {
        out(t, j) = 0.5;
        continue;
      }
      const double v = kLow + (kHigh - kLow) * (f(t, j) - stats.min[j]) / range;
      out(t, j) = std::clamp(v, 0.0, 1.0);
    }
  }
  return out;
}

Standardizer FitStandardizer(std::span<const FeatureMatrix> training) {
  const std::size_t d = CommonWidth(training);
  Standardizer s;
  s.mean.assign(d, 0.0);
  s.inv_std.assign(d, 0.0);
  std::vector<double> sq(d, 0.0);
  double n = 0.0;
  for (const auto& f : training) {
    for (std::size_t t = 0; t < f.rows(); ++t)
      for (std::size_t j = 0; j < d; ++j) s.mean[j] += f(t, j);
    n += static_cast<double>(f.rows());
  }
  if (n == 0.0) Fail(ErrorCode::kInvalidArgument, "no training frames");
  for (auto& m : s.mean) m /= n;
  for (const auto& f : training)
    for (std::size_t t = 0; t < f.rows(); ++t)
      for (std::size_t j = 0; j < d; ++j) {
        const double c = f(t, j) - s.mean[j];
        sq[j] += c * c;
      }
  for (std::size_t j = 0; j < d; ++j) {
    const double sd = std::sqrt(sq[j] / n);
    s.inv_std[j] = sd > 1e-10 ? 1.0 / sd : 0.0;
  }
  return s;
}

FeatureMatrix ApplyStandardizer(const FeatureMatrix& f, const Standardizer& s) {
  if (f.cols() != s.dims())
    Fail(ErrorCode::kInvalidArgument,
         fmt::format("standardiser expects {} dims, got {}", s.dims(), f.cols()));
  FeatureMatrix out(f.rows(), f.cols(), f.kind(), f.frame_period());
  for (std::size_t t = 0; t < f.rows(); ++t)
    for (std::size_t j = 0; j < f.cols(); ++j) out(t, j) = (f(t, j) - s.mean[j]) * s.inv_std[j];
  return out;
}

FeatureMatrix SubtractRecordingMean(const FeatureMatrix& f) {
  FeatureMatrix out = f;
  if (f.rows() == 0) return out;
  for (std::size_t j = 0; j < f.cols(); ++j) {
    double sum = 0.0;
    for (std::size_t t = 0; t < f.rows(); ++t) sum += f(t, j);
    const double mean = sum / static_cast<double>(f.rows());
    for (std::size_t t = 0; t < f.rows(); ++t) out(t, j) -= mean;
  }
  return out;
}

}  // namespace sdb
