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

#include "sdb/features.hpp"

#include <cmath>

#include <fmt/format.h>

#include "sdb/error.hpp"
#include "util/binary_io.hpp"

namespace sdb {

namespace {
constexpr std::string_view kFeatureMagic = "SDBFEAT1";
}

std::string_view ToString(FeatureKind k) {
  switch (k) {
    case FeatureKind::kRateMap:
      return "rate_map";
    case FeatureKind::kAcf:
      return "acf";
    case FeatureKind::kMfcc:
      return "mfcc";
    case FeatureKind::kBottleneck:
      return "bottleneck";
    case FeatureKind::kCombined:
      return "combined";
    case FeatureKind::kPosterior:
      break;
  }
  return "posterior";
}

bool FeatureMatrix::AllFinite() const {
  for (double v : data_)
    if (!std::isfinite(v)) return false;
  return true;
}

FeatureMatrix ConcatColumns(const FeatureMatrix& a, const FeatureMatrix& b, FeatureKind kind) {
  if (a.rows() != b.rows())
    Fail(ErrorCode::kInvalidArgument,
         fmt::format("cannot concatenate {} rows with {} rows", a.rows(), b.rows()));
  FeatureMatrix out(a.rows(), a.cols() + b.cols(), kind, a.frame_period());
  for (std::size_t t = 0; t < a.rows(); ++t) {
    auto dst = out.row(t);
    std::copy(a.row(t).begin(), a.row(t).end(), dst.begin());
    std::copy(b.row(t).begin(), b.row(t).end(), dst.begin() + static_cast<long>(a.cols()));
  }
  return out;
}

FeatureMatrix StackRows(std::span<const FeatureMatrix> parts) {
  if (parts.empty()) return {};
  std::size_t rows = 0;
  for (const auto& p : parts) {
    if (p.cols() != parts.front().cols())
      Fail(ErrorCode::kInvalidArgument, "cannot stack matrices of different widths");
    rows += p.rows();
  }
  FeatureMatrix out(rows, parts.front().cols(), parts.front().kind(),
                    parts.front().frame_period());
  std::size_t at = 0;
  for (const auto& p : parts) {
    std::copy(p.data().begin(), p.data().end(),
              out.data().begin() + static_cast<long>(at * out.cols()));
    at += p.rows();
  }
  return out;
}

FeatureMatrix Subsample(const FeatureMatrix& f, std::size_t stride) {
  if (stride <= 1) return f;
  FeatureMatrix out((f.rows() + stride - 1) / stride, f.cols(), f.kind(), f.frame_period());
  for (std::size_t t = 0, r = 0; t < f.rows(); t += stride, ++r)
    std::copy(f.row(t).begin(), f.row(t).end(), out.row(r).begin());
  return out;
}

void SaveFeatures(const FeatureMatrix& f, const std::filesystem::path& path) {
  io::ByteWriter w;
  w.PutBytes(kFeatureMagic);
  w.Put<std::uint32_t>(static_cast<std::uint32_t>(f.kind()));
  w.Put<std::uint64_t>(f.rows());
  w.Put<std::uint64_t>(f.cols());
  w.Put<double>(f.frame_period());
  for (double v : f.data()) w.Put<float>(static_cast<float>(v));
  io::WriteFile(path, w.bytes());
}

FeatureMatrix LoadFeatures(const std::filesystem::path& path) {
  const std::string bytes = io::ReadFile(path);
  io::ByteReader r(bytes, path.string());
  if (r.GetBytes(kFeatureMagic.size()) != kFeatureMagic)
    Fail(ErrorCode::kFormat, path.string() + ": not a feature file");
  const auto kind = r.Get<std::uint32_t>();
  if (kind > static_cast<std::uint32_t>(FeatureKind::kPosterior))
    Fail(ErrorCode::kFormat, fmt::format("{}: unknown feature kind {}", path.string(), kind));
  const auto rows = r.Get<std::uint64_t>();
  const auto cols = r.Get<std::uint64_t>();
  const auto period = r.Get<double>();
  if (cols != 0 && rows > r.remaining() / (4 * cols))
    Fail(ErrorCode::kCorrupt, path.string() + ": truncated feature data");
  FeatureMatrix f(rows, cols, static_cast<FeatureKind>(kind), period);
  for (double& v : f.data()) v = r.Get<float>();
  return f;
}

}  // namespace sdb
