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

#include "sdb/bundle.hpp"

#include <fmt/format.h>

#include "sdb/error.hpp"
#include "sdb/screen.hpp"
#include "util/binary_io.hpp"

namespace sdb {

namespace {

constexpr std::string_view kBundleMagic = "SDBBNDL1";
constexpr std::string_view kNormMagic = "SDBNORM1";
constexpr std::string_view kLmMagic = "SDBBIGR1";
constexpr std::string_view kScreenerMagic = "SDBSCRN1";

void PutMatrix(io::ByteWriter& w, const Eigen::MatrixXd& m) {
  w.Put<std::uint32_t>(static_cast<std::uint32_t>(m.rows()));
  w.Put<std::uint32_t>(static_cast<std::uint32_t>(m.cols()));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) w.Put<double>(m(r, c));
}

Eigen::MatrixXd GetMatrix(io::ByteReader& r, const std::string& context) {
  const auto rows = r.Get<std::uint32_t>();
  const auto cols = r.Get<std::uint32_t>();
  if (std::uint64_t{rows} * cols * 8 > r.remaining()) Fail(ErrorCode::kCorrupt, context + ": matrix truncated");
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = r.Get<double>();
  return m;
}

void PutVector(io::ByteWriter& w, std::span<const double> v) {
  w.Put<std::uint32_t>(static_cast<std::uint32_t>(v.size()));
  for (double x : v) w.Put<double>(x);
}

std::vector<double> GetVector(io::ByteReader& r, const std::string& context) {
  const auto n = r.Get<std::uint32_t>();
  if (std::uint64_t{n} * 8 > r.remaining()) Fail(ErrorCode::kCorrupt, context + ": vector truncated");
  std::vector<double> v(n);
  for (double& x : v) x = r.Get<double>();
  return v;
}

void PutGmm(io::ByteWriter& w, const Gmm& g) {
  PutMatrix(w, g.weights);
  PutMatrix(w, g.means);
  PutMatrix(w, g.variances);
}

Gmm GetGmm(io::ByteReader& r, const std::string& context) {
  Gmm g;
  g.weights = GetMatrix(r, context);
  g.means = GetMatrix(r, context);
  g.variances = GetMatrix(r, context);
  if (g.weights.cols() != 1 || g.means.rows() != g.weights.rows() ||
      g.variances.rows() != g.means.rows() || g.variances.cols() != g.means.cols())
    Fail(ErrorCode::kCorrupt, context + ": bad GMM shape");
  g.Prepare();
  return g;
}

void PutLm(io::ByteWriter& w, const BigramLm& lm) {
  PutMatrix(w, lm.transition);
  PutMatrix(w, lm.initial);
  PutMatrix(w, lm.final);
  w.Put<double>(lm.alpha);
}

BigramLm GetLm(io::ByteReader& r, const std::string& context) {
  BigramLm lm;
  const auto t = GetMatrix(r, context);
  const auto i = GetMatrix(r, context);
  const auto f = GetMatrix(r, context);
  if (t.rows() != 4 || t.cols() != 4 || i.size() != 4 || f.size() != 4)
    Fail(ErrorCode::kCorrupt, context + ": bad LM shape");
  lm.transition = t;
  lm.initial = Eigen::Map<const Eigen::Vector4d>(i.data());
  lm.final = Eigen::Map<const Eigen::Vector4d>(f.data());
  lm.alpha = r.Get<double>();
  return lm;
}

// magic, version, payload, crc32
std::string Seal(std::string_view magic, io::ByteWriter& body) {
  io::ByteWriter w;
  w.PutBytes(magic);
  w.Put<std::uint32_t>(kBundleFormatVersion);
  w.PutBytes(body.bytes());
  io::SealWithChecksum(w.bytes());
  return w.bytes();
}

io::ByteReader Open(std::string_view bytes, std::string_view magic, const std::string& context) {
  io::ByteReader header(bytes, context);
  if (header.GetBytes(magic.size()) != magic) Fail(ErrorCode::kFormat, context + ": wrong file type");
  const auto version = header.Get<std::uint32_t>();
  if (version != kBundleFormatVersion)
    Fail(ErrorCode::kVersion, fmt::format("{}: format version {} is not supported", context, version));
  const auto body = io::CheckAndStripChecksum(bytes, context);
  io::ByteReader r(body, context);
  r.GetBytes(magic.size() + 4);
  return r;
}

}  // namespace

DecodeGraph ModelBundle::Graph() const {
  return system == SystemKind::kTandem ? TandemGraph(hmms, lm) : HybridGraph(priors, lm);
}

std::string SerializeBundle(const ModelBundle& b) {
  io::ByteWriter w;
  w.Put<std::uint8_t>(static_cast<std::uint8_t>(b.system));
  w.PutString(b.features);
  w.Put<std::uint32_t>(static_cast<std::uint32_t>(b.norm_refs.size()));
  for (const auto& n : b.norm_refs) w.PutString(n);
  PutLm(w, b.lm);
  PutVector(w, b.priors.prior);
  PutVector(w, b.priors.mean_duration);
  PutVector(w, b.standardizer.mean);
  PutVector(w, b.standardizer.inv_std);
  if (b.system == SystemKind::kTandem) {
    for (const auto& m : b.hmms) {
      w.Put<std::uint8_t>(static_cast<std::uint8_t>(m.label));
      PutVector(w, m.self);
      PutVector(w, m.next);
      w.Put<std::uint32_t>(static_cast<std::uint32_t>(m.states.size()));
      for (const auto& g : m.states) PutGmm(w, g);
    }
  } else {
    w.PutString(SerializeModel(b.classifier));
  }
  return Seal(kBundleMagic, w);
}

ModelBundle DeserializeBundle(std::string_view bytes, const std::string& context) {
  io::ByteReader r = Open(bytes, kBundleMagic, context);
  ModelBundle b;
  const auto sys = r.Get<std::uint8_t>();
  if (sys > 1) Fail(ErrorCode::kCorrupt, context + ": unknown system tag");
  b.system = static_cast<SystemKind>(sys);
  b.features = r.GetString();
  const auto n_refs = r.Get<std::uint32_t>();
  for (std::uint32_t i = 0; i < n_refs; ++i) b.norm_refs.push_back(r.GetString());
  b.lm = GetLm(r, context);
  const auto prior = GetVector(r, context);
  const auto dur = GetVector(r, context);
  if (prior.size() != kNumClasses || dur.size() != kNumClasses) Fail(ErrorCode::kCorrupt, context + ": bad priors");
  std::copy(prior.begin(), prior.end(), b.priors.prior.begin());
  std::copy(dur.begin(), dur.end(), b.priors.mean_duration.begin());
  b.standardizer.mean = GetVector(r, context);
  b.standardizer.inv_std = GetVector(r, context);
  if (b.system == SystemKind::kTandem) {
    for (auto& m : b.hmms) {
      const auto label = r.Get<std::uint8_t>();
      if (label >= kNumClasses) Fail(ErrorCode::kCorrupt, context + ": bad class label");
      m.label = ClassAt(label);
      m.self = GetVector(r, context);
      m.next = GetVector(r, context);
      const auto n = r.Get<std::uint32_t>();
      if (n != m.self.size() || n != m.next.size()) Fail(ErrorCode::kCorrupt, context + ": bad HMM");
      for (std::uint32_t j = 0; j < n; ++j) m.states.push_back(GetGmm(r, context));
    }
  } else {
    b.classifier = DeserializeModel(r.GetString(), context + " (classifier)");
  }
  if (r.remaining() != 0) Fail(ErrorCode::kCorrupt, context + ": trailing bytes");
  return b;
}

void SaveBundle(const ModelBundle& b, const std::filesystem::path& path) {
  io::WriteFile(path, SerializeBundle(b));
}

ModelBundle LoadBundle(const std::filesystem::path& path) {
  return DeserializeBundle(io::ReadFile(path), path.string());
}

void SaveNormStats(const NormStats& s, const std::filesystem::path& path) {
  io::ByteWriter w;
  PutVector(w, s.min);
  PutVector(w, s.max);
  io::WriteFile(path, Seal(kNormMagic, w));
}

NormStats LoadNormStats(const std::filesystem::path& path) {
  const std::string bytes = io::ReadFile(path);
  io::ByteReader r = Open(bytes, kNormMagic, path.string());
  NormStats s;
  s.min = GetVector(r, path.string());
  s.max = GetVector(r, path.string());
  if (s.min.size() != s.max.size()) Fail(ErrorCode::kCorrupt, path.string() + ": bad normaliser");
  return s;
}

void SaveBigram(const BigramLm& lm, const std::filesystem::path& path) {
  io::ByteWriter w;
  PutLm(w, lm);
  io::WriteFile(path, Seal(kLmMagic, w));
}

BigramLm LoadBigram(const std::filesystem::path& path) {
  const std::string bytes = io::ReadFile(path);
  io::ByteReader r = Open(bytes, kLmMagic, path.string());
  return GetLm(r, path.string());
}

void SaveScreener(const Screener& s, const std::filesystem::path& path) {
  io::ByteWriter w;
  PutGmm(w, s.snore);
  PutGmm(w, s.non_snore);
  io::WriteFile(path, Seal(kScreenerMagic, w));
}

Screener LoadScreener(const std::filesystem::path& path) {
  const std::string bytes = io::ReadFile(path);
  io::ByteReader r = Open(bytes, kScreenerMagic, path.string());
  Screener s;
  s.snore = GetGmm(r, path.string());
  s.non_snore = GetGmm(r, path.string());
  return s;
}

}  // namespace sdb
