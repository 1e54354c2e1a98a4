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

#include <fmt/format.h>

#include "sdb/error.hpp"
#include "sdb/neural.hpp"
#include "util/binary_io.hpp"

namespace sdb {

namespace {
constexpr std::string_view kModelMagic = "SDBMLP01";
}

std::string SerializeModel(const MlpModel& model) {
  model.Validate();
  io::ByteWriter w;
  w.PutBytes(kModelMagic);
  w.Put<std::uint32_t>(kModelFormatVersion);
  w.Put<std::uint64_t>(model.seed);
  w.Put<std::uint32_t>(static_cast<std::uint32_t>(model.layers.size()));
  for (const auto& l : model.layers) {
    w.Put<std::uint32_t>(static_cast<std::uint32_t>(l.weight.rows()));
    w.Put<std::uint32_t>(static_cast<std::uint32_t>(l.weight.cols()));
    w.Put<std::uint8_t>(static_cast<std::uint8_t>(l.activation));
    for (Eigen::Index r = 0; r < l.weight.rows(); ++r)
      for (Eigen::Index c = 0; c < l.weight.cols(); ++c) w.Put<double>(l.weight(r, c));
    for (Eigen::Index r = 0; r < l.bias.size(); ++r) w.Put<double>(l.bias(r));
  }
  io::SealWithChecksum(w.bytes());
  return w.bytes();
}

MlpModel DeserializeModel(std::string_view bytes, const std::string& context) {
  {
    io::ByteReader header(bytes, context);
    if (header.GetBytes(8) != kModelMagic)
      Fail(ErrorCode::kFormat, context + ": not a model file");
    const auto version = header.Get<std::uint32_t>();
    if (version != kModelFormatVersion)
      Fail(ErrorCode::kVersion, fmt::format("{}: model format version {} is not supported (expected {})",
                                            context, version, kModelFormatVersion));
  }
  const auto body = io::CheckAndStripChecksum(bytes, context);
  io::ByteReader r(body, context);
  r.GetBytes(8);
  r.Get<std::uint32_t>();
  MlpModel model;
  model.seed = r.Get<std::uint64_t>();
  const auto n_layers = r.Get<std::uint32_t>();
  for (std::uint32_t i = 0; i < n_layers; ++i) {
    const auto rows = r.Get<std::uint32_t>();
    const auto cols = r.Get<std::uint32_t>();
    const auto act = r.Get<std::uint8_t>();
    if (act > static_cast<std::uint8_t>(Activation::kLinear))
      Fail(ErrorCode::kCorrupt, fmt::format("{}: unknown activation tag {}", context, act));
    if (std::uint64_t{rows} * (std::uint64_t{cols} + 1) * 8 > r.remaining())
      Fail(ErrorCode::kCorrupt, context + ": layer data truncated");
    DenseLayer l;
    l.activation = static_cast<Activation>(act);
    l.weight.resize(rows, cols);
    l.bias.resize(rows);
    for (Eigen::Index rr = 0; rr < l.weight.rows(); ++rr)
      for (Eigen::Index c = 0; c < l.weight.cols(); ++c) l.weight(rr, c) = r.Get<double>();
    for (Eigen::Index rr = 0; rr < l.bias.size(); ++rr) l.bias(rr) = r.Get<double>();
    model.layers.push_back(std::move(l));
  }
  if (r.remaining() != 0) Fail(ErrorCode::kCorrupt, context + ": trailing bytes");
  model.Validate();
  return model;
}

void SaveModel(const MlpModel& model, const std::filesystem::path& path) {
  io::WriteFile(path, SerializeModel(model));
}

MlpModel LoadModel(const std::filesystem::path& path) {
  return DeserializeModel(io::ReadFile(path), path.string());
}

}  // namespace sdb
