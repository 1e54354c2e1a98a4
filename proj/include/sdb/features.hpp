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

#ifndef SDB_FEATURES_HPP_
#define SDB_FEATURES_HPP_

#include <cstddef>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

namespace sdb {

enum class FeatureKind : std::uint8_t {
  kRateMap = 0,
  kAcf = 1,
  kMfcc = 2,
  kBottleneck = 3,
  kCombined = 4,
  kPosterior = 5,
};

std::string_view ToString(FeatureKind k);

// Row-major T x D matrix of frame features.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::size_t rows, std::size_t cols, FeatureKind kind, double frame_period = 0.010)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0), frame_period_(frame_period),
        kind_(kind) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double frame_period() const { return frame_period_; }
  FeatureKind kind() const { return kind_; }
  void set_kind(FeatureKind k) { kind_ = k; }

  std::span<double> row(std::size_t t) { return {data_.data() + t * cols_, cols_}; }
  std::span<const double> row(std::size_t t) const { return {data_.data() + t * cols_, cols_}; }
  double& operator()(std::size_t t, std::size_t d) { return data_[t * cols_ + d]; }
  double operator()(std::size_t t, std::size_t d) const { return data_[t * cols_ + d]; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  bool AllFinite() const;

  friend bool operator==(const FeatureMatrix&, const FeatureMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
  double frame_period_ = 0.010;
  FeatureKind kind_ = FeatureKind::kMfcc;
};

// Side-by-side concatenation; row counts must match.
FeatureMatrix ConcatColumns(const FeatureMatrix& a, const FeatureMatrix& b, FeatureKind kind);
// Stacks rows of several matrices with equal width.
FeatureMatrix StackRows(std::span<const FeatureMatrix> parts);
// Keeps every `stride`-th row starting at 0.
FeatureMatrix Subsample(const FeatureMatrix& f, std::size_t stride);

// Binary container: "SDBFEAT1", kind u32, T u64, D u64, frame_period f64,
// row-major float32 data, all little-endian.
void SaveFeatures(const FeatureMatrix& f, const std::filesystem::path& path);
FeatureMatrix LoadFeatures(const std::filesystem::path& path);

}  // namespace sdb

#endif  // SDB_FEATURES_HPP_
