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

#include "sdb/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "sdb/error.hpp"
#include "util/log.hpp"

namespace sdb {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double SquaredDistance(const double* a, const double* b, std::size_t d) {
  double s = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double t = a[i] - b[i];
    s += t * t;
  }
  return s;
}

// Distinct rows (lexicographic order) with merged weights.
WeightedFrames Distinct(const WeightedFrames& data) {
  std::vector<std::size_t> idx;
  idx.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i)
    if (data.weights[i] > 0.0) idx.push_back(i);
  const std::size_t d = data.dims;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(data.rows[a], data.rows[a] + d, data.rows[b],
                                        data.rows[b] + d);
  });
  WeightedFrames out;
  out.dims = d;
  for (std::size_t i : idx) {
    if (!out.rows.empty() && std::equal(data.rows[i], data.rows[i] + d, out.rows.back())) {
      out.weights.back() += data.weights[i];
      continue;
    }
    out.rows.push_back(data.rows[i]);
    out.weights.push_back(data.weights[i]);
  }
  return out;
}

void CheckData(const WeightedFrames& data, const GmmFitOptions& opts) {
  if (opts.components < 1) Fail(ErrorCode::kInvalidArgument, "GMM needs at least one component");
  if (data.size() == 0 || data.dims == 0) Fail(ErrorCode::kInvalidArgument, "no frames to fit");
  if (opts.require_min_frames &&
      data.size() < 10 * static_cast<std::size_t>(opts.components))
    Fail(ErrorCode::kInvalidArgument,
         fmt::format("{} frames are too few for {} components (need {})", data.size(),
                     opts.components, 10 * opts.components));
  for (double w : data.weights)
    if (!(w >= 0.0) || !std::isfinite(w))
      Fail(ErrorCode::kInvalidArgument, "frame weights must be finite and non-negative");
}

}  // namespace

void Gmm::Prepare() {
  const Eigen::Index k = components();
  const Eigen::Index d = dims();
  if (means.rows() != k || variances.rows() != k || variances.cols() != d)
    Fail(ErrorCode::kInvalidArgument, "inconsistent GMM parameter shapes");
  inv_var = variances.cwiseInverse();
  log_const.resize(k);
  const double log2pi = std::log(2.0 * std::numbers::pi);
  for (Eigen::Index i = 0; i < k; ++i) {
    const double lw = weights(i) > 0.0 ? std::log(weights(i)) : kNegInf;
    log_const(i) = lw - 0.5 * (static_cast<double>(d) * log2pi + variances.row(i).array().log().sum());
  }
}

double Gmm::ComponentLogLikelihoods(std::span<const double> x, Eigen::VectorXd& out) const {
  const Eigen::Index k = components();
  const auto d = static_cast<std::size_t>(dims());
  if (x.size() != d)
    Fail(ErrorCode::kInvalidArgument, fmt::format("GMM has {} dims, frame has {}", d, x.size()));
  out.resize(k);
  double best = kNegInf;
  for (Eigen::Index i = 0; i < k; ++i) {
    if (log_const(i) == kNegInf) {
      out(i) = kNegInf;
      continue;
    }
    double q = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      const double t = x[j] - means(i, static_cast<Eigen::Index>(j));
      q += t * t * inv_var(i, static_cast<Eigen::Index>(j));
    }
    out(i) = log_const(i) - 0.5 * q;
    best = std::max(best, out(i));
  }
  if (best == kNegInf) return kNegInf;
  double s = 0.0;
  for (Eigen::Index i = 0; i < k; ++i) s += std::exp(out(i) - best);
  return best + std::log(s);
}

double Gmm::LogLikelihood(std::span<const double> x) const {
  Eigen::VectorXd tmp;
  return ComponentLogLikelihoods(x, tmp);
}

double GmmLogLikelihood(const Gmm& g, std::span<const double> x) { return g.LogLikelihood(x); }

void WeightedFrames::Add(std::span<const double> row, double weight) {
  if (rows.empty())
    dims = row.size();
  else if (row.size() != dims)
    Fail(ErrorCode::kInvalidArgument, "frames of different widths");
  rows.push_back(row.data());
  weights.push_back(weight);
}

void WeightedFrames::AddAll(const FeatureMatrix& f, double weight) {
  for (std::size_t t = 0; t < f.rows(); ++t) Add(f.row(t), weight);
}

double WeightedFrames::TotalWeight() const {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

void GmmAccumulator::Reset(Eigen::Index k, Eigen::Index d) {
  occ = Eigen::VectorXd::Zero(k);
  sum = Eigen::MatrixXd::Zero(k, d);
  sum2 = Eigen::MatrixXd::Zero(k, d);
}

void GmmAccumulator::Add(std::span<const double> x, const Eigen::VectorXd& posterior,
                         double weight) {
  const Eigen::Index d = sum.cols();
  for (Eigen::Index k = 0; k < occ.size(); ++k) {
    const double g = posterior(k) * weight;
    if (g == 0.0) continue;
    occ(k) += g;
    for (Eigen::Index j = 0; j < d; ++j) {
      const double v = x[static_cast<std::size_t>(j)];
      sum(k, j) += g * v;
      sum2(k, j) += g * v * v;
    }
  }
}

void GmmAccumulator::Update(Gmm& g, double variance_floor) const {
  const double total = occ.sum();
  if (!(total > 0.0)) return;
  for (Eigen::Index k = 0; k < occ.size(); ++k) {
    g.weights(k) = occ(k) / total;
    if (!(occ(k) > 0.0)) continue;
    for (Eigen::Index j = 0; j < sum.cols(); ++j) {
      const double mean = sum(k, j) / occ(k);
      const double var = sum2(k, j) / occ(k) - mean * mean;
      g.means(k, j) = mean;
      g.variances(k, j) = std::max(var, variance_floor);
    }
  }
  g.weights /= g.weights.sum();
  g.Prepare();
}

Gmm InitGmm(const WeightedFrames& data, const GmmFitOptions& opts) {
  CheckData(data, opts);
  const WeightedFrames pts = Distinct(data);
  if (pts.size() == 0) Fail(ErrorCode::kInvalidArgument, "all frame weights are zero");
  const std::size_t d = pts.dims;
  const auto k = static_cast<std::size_t>(opts.components);
  const std::size_t n = pts.size();
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const auto draw = [&](const std::vector<double>& mass) {
    const double total = std::accumulate(mass.begin(), mass.end(), 0.0);
    const double u = unit(rng) * total;
    double c = 0.0;
    for (std::size_t i = 0; i < mass.size(); ++i) {
      c += mass[i];
      if (u < c) return i;
    }
    return mass.size() - 1;
  };

  // k-means++ seeding over distinct points.
  std::vector<std::size_t> centres;
  centres.push_back(draw(pts.weights));
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  while (centres.size() < k) {
    const double* c = pts.rows[centres.back()];
    std::vector<double> mass(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      dist[i] = std::min(dist[i], SquaredDistance(pts.rows[i], c, d));
      mass[i] = pts.weights[i] * dist[i];
      total += mass[i];
    }
    if (!(total > 0.0)) {
      // fewer distinct points than components
      centres.push_back(centres[centres.size() % std::max<std::size_t>(1, centres.size())]);
      continue;
    }
    centres.push_back(draw(mass));
  }

  Eigen::MatrixXd means(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(d));
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t j = 0; j < d; ++j)
      means(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(j)) = pts.rows[centres[c]][j];

  std::vector<std::size_t> assign(n, 0);
  const auto assign_all = [&] {
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        double s = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
          const double t = pts.rows[i][j] - means(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(j));
          s += t * t;
        }
        if (s < best) {
          best = s;
          assign[i] = c;
        }
      }
    }
  };

  for (int it = 0; it < opts.kmeans_iterations; ++it) {
    assign_all();
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(d));
    Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = static_cast<Eigen::Index>(assign[i]);
      w(c) += pts.weights[i];
      for (std::size_t j = 0; j < d; ++j) acc(c, static_cast<Eigen::Index>(j)) += pts.weights[i] * pts.rows[i][j];
    }
    for (Eigen::Index c = 0; c < static_cast<Eigen::Index>(k); ++c)
      if (w(c) > 0.0) means.row(c) = acc.row(c) / w(c);
  }
  assign_all();

  // Global statistics stand in for clusters with fewer than two points.
  const double total_w = pts.TotalWeight();
  Eigen::VectorXd gmean = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
  Eigen::VectorXd gvar = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) gmean(static_cast<Eigen::Index>(j)) += pts.weights[i] * pts.rows[i][j];
  gmean /= total_w;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const double t = pts.rows[i][j] - gmean(static_cast<Eigen::Index>(j));
      gvar(static_cast<Eigen::Index>(j)) += pts.weights[i] * t * t;
    }
  gvar /= total_w;

  Gmm g;
  g.weights = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k));
  g.means = means;
  g.variances.resize(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(d));
  std::vector<std::size_t> members(k, 0);
  Eigen::MatrixXd var = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = static_cast<Eigen::Index>(assign[i]);
    ++members[assign[i]];
    g.weights(c) += pts.weights[i];
    for (std::size_t j = 0; j < d; ++j) {
      const double t = pts.rows[i][j] - means(c, static_cast<Eigen::Index>(j));
      var(c, static_cast<Eigen::Index>(j)) += pts.weights[i] * t * t;
    }
  }
  for (std::size_t c = 0; c < k; ++c) {
    const auto ci = static_cast<Eigen::Index>(c);
    for (std::size_t j = 0; j < d; ++j) {
      const auto ji = static_cast<Eigen::Index>(j);
      const double v = members[c] >= 2 ? var(ci, ji) / g.weights(ci) : gvar(ji);
      g.variances(ci, ji) = std::max(v, opts.variance_floor);
    }
  }
  // Empty clusters keep a small share so EM can still move them.
  for (Eigen::Index c = 0; c < g.weights.size(); ++c)
    g.weights(c) = std::max(g.weights(c) / total_w, 1e-3);
  g.weights /= g.weights.sum();
  g.Prepare();
  return g;
}

GmmFitResult FitGmm(const WeightedFrames& data, const GmmFitOptions& opts) {
  GmmFitResult result;
  result.gmm = InitGmm(data, opts);
  const WeightedFrames pts = Distinct(data);
  result.degenerate = pts.size() == 1;
  if (result.degenerate)
    log::Warn("all {} frames are identical; GMM variances sit at the floor", data.size());
  const double total_w = pts.TotalWeight();
  GmmAccumulator acc;
  Eigen::VectorXd comp;
  for (int it = 0; it < opts.max_iterations; ++it) {
    acc.Reset(result.gmm.components(), result.gmm.dims());
    double ll = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      std::span<const double> x(pts.rows[i], pts.dims);
      const double l = result.gmm.ComponentLogLikelihoods(x, comp);
      ll += pts.weights[i] * l;
      comp = (comp.array() - l).exp().matrix();
      acc.Add(x, comp, pts.weights[i]);
    }
    result.log_likelihood.push_back(ll);
    acc.Update(result.gmm, opts.variance_floor);
    const auto& h = result.log_likelihood;
    if (h.size() >= 2 && (h.back() - h[h.size() - 2]) / total_w < opts.tolerance) break;
  }
  return result;
}

GmmFitResult FitGmm(const FeatureMatrix& data, const GmmFitOptions& opts) {
  WeightedFrames w;
  w.AddAll(data);
  return FitGmm(w, opts);
}

}  // namespace sdb
