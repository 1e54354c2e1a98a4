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

#ifndef SDB_GMM_HPP_
#define SDB_GMM_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "sdb/features.hpp"

namespace sdb {

inline constexpr double kVarianceFloor = 1e-6;

// Diagonal-covariance Gaussian mixture. Call Prepare() after editing the
// parameters directly; the fitting routines do it themselves.
struct Gmm {
  Eigen::VectorXd weights;    // K
  Eigen::MatrixXd means;      // K x D
  Eigen::MatrixXd variances;  // K x D

  Eigen::Index components() const { return weights.size(); }
  Eigen::Index dims() const { return means.cols(); }

  void Prepare();
  // log sum_k w_k N(x; mu_k, diag var_k)
  double LogLikelihood(std::span<const double> x) const;
  // Per-component log(w_k N_k(x)); returns the mixture log-likelihood.
  double ComponentLogLikelihoods(std::span<const double> x, Eigen::VectorXd& out) const;

  // Derived by Prepare().
  Eigen::VectorXd log_const;   // log w_k - 0.5 * sum_d log(2 pi var_kd)
  Eigen::MatrixXd inv_var;     // K x D
};

double GmmLogLikelihood(const Gmm& g, std::span<const double> x);

// Frames with non-negative weights. Rows point into caller-owned storage.
struct WeightedFrames {
  std::vector<const double*> rows;
  std::vector<double> weights;
  std::size_t dims = 0;

  void Add(std::span<const double> row, double weight = 1.0);
  void AddAll(const FeatureMatrix& f, double weight = 1.0);
  std::size_t size() const { return rows.size(); }
  double TotalWeight() const;
};

struct GmmFitOptions {
  int components = 7;
  int max_iterations = 50;
  double tolerance = 1e-6;  // per-frame log-likelihood gain
  double variance_floor = kVarianceFloor;
  int kmeans_iterations = 5;
  std::uint64_t seed = 1;
  // fit_gmm proper insists on 10 frames per component; state initialisation
  // inside HMM training relaxes this.
  bool require_min_frames = true;
};

struct GmmFitResult {
  Gmm gmm;
  std::vector<double> log_likelihood;  // total data log-likelihood before each M-step
  bool degenerate = false;             // every frame identical
};

// k-means++ seeding over distinct frames, a few weighted Lloyd passes, then EM.
GmmFitResult FitGmm(const WeightedFrames& data, const GmmFitOptions& opts);
GmmFitResult FitGmm(const FeatureMatrix& data, const GmmFitOptions& opts);

// k-means++/Lloyd initialisation only.
Gmm InitGmm(const WeightedFrames& data, const GmmFitOptions& opts);

// Weighted sufficient statistics for one mixture.
struct GmmAccumulator {
  Eigen::VectorXd occ;   // K
  Eigen::MatrixXd sum;   // K x D
  Eigen::MatrixXd sum2;  // K x D

  void Reset(Eigen::Index k, Eigen::Index d);
  void Add(std::span<const double> x, const Eigen::VectorXd& posterior, double weight);
  // M-step into g; components with no occupancy keep their mean and variance.
  void Update(Gmm& g, double variance_floor) const;
};

}  // namespace sdb

#endif  // SDB_GMM_HPP_
