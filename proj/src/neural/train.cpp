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
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "sdb/error.hpp"
#include "sdb/neural.hpp"

namespace sdb {

void TrainConfig::Validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate))
    Fail(ErrorCode::kConfig, "learning_rate must be positive");
  if (epochs < 1) Fail(ErrorCode::kConfig, "epochs must be at least 1");
  if (batch_size < 1) Fail(ErrorCode::kConfig, "batch_size must be at least 1");
  if (momentum < 0.0 || momentum >= 1.0) Fail(ErrorCode::kConfig, "momentum must be in [0, 1)");
  if (weight_decay < 0.0) Fail(ErrorCode::kConfig, "weight_decay must be non-negative");
}

namespace {

// Optimiser state mirrors the parameter shapes.
class Updater {
 public:
  Updater(const MlpModel& model, const TrainConfig& cfg) : cfg_(cfg) {
    for (const auto& l : model.layers) {
      m_w_.push_back(Eigen::MatrixXd::Zero(l.weight.rows(), l.weight.cols()));
      m_b_.push_back(Eigen::VectorXd::Zero(l.bias.size()));
      if (cfg.optimizer == Optimizer::kAdam) {
        v_w_.push_back(Eigen::MatrixXd::Zero(l.weight.rows(), l.weight.cols()));
        v_b_.push_back(Eigen::VectorXd::Zero(l.bias.size()));
      }
    }
  }

  void Apply(MlpModel& model, Gradients& g) {
    ++step_;
    for (std::size_t i = 0; i < model.layers.size(); ++i) {
      auto& l = model.layers[i];
      if (cfg_.weight_decay > 0.0) g.weight[i] += cfg_.weight_decay * l.weight;
      if (cfg_.optimizer == Optimizer::kAdam) {
        AdamStep(l.weight, g.weight[i], m_w_[i], v_w_[i]);
        AdamStep(l.bias, g.bias[i], m_b_[i], v_b_[i]);
      } else if (cfg_.momentum > 0.0) {
        m_w_[i] = cfg_.momentum * m_w_[i] - cfg_.learning_rate * g.weight[i];
        m_b_[i] = cfg_.momentum * m_b_[i] - cfg_.learning_rate * g.bias[i];
        l.weight += m_w_[i];
        l.bias += m_b_[i];
      } else {
        l.weight -= cfg_.learning_rate * g.weight[i];
        l.bias -= cfg_.learning_rate * g.bias[i];
      }
    }
  }

 private:
  template <typename P, typename G, typename S>
  void AdamStep(P& param, const G& grad, S& m, S& v) {
    constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;
    m = kBeta1 * m + (1.0 - kBeta1) * grad;
    v = kBeta2 * v + (1.0 - kBeta2) * grad.cwiseProduct(grad);
    const double c1 = 1.0 - std::pow(kBeta1, static_cast<double>(step_));
    const double c2 = 1.0 - std::pow(kBeta2, static_cast<double>(step_));
    param.array() -= cfg_.learning_rate * (m.array() / c1) / ((v.array() / c2).sqrt() + kEps);
  }

  const TrainConfig& cfg_;
  long step_ = 0;
  std::vector<Eigen::MatrixXd> m_w_, v_w_;
  std::vector<Eigen::VectorXd> m_b_, v_b_;
};

// Shared minibatch loop. `targets` is null for reconstruction.
TrainHistory RunTraining(MlpModel& model, const FeatureMatrix& data,
                         std::span<const EventClass> labels, const TrainConfig& cfg,
                         const EpochCallback& on_epoch) {
  cfg.Validate();
  model.Validate();
  const auto n = static_cast<Eigen::Index>(data.rows());
  const auto d = static_cast<Eigen::Index>(data.cols());
  if (n == 0) Fail(ErrorCode::kInvalidArgument, "no training frames");
  Eigen::Map<const Eigen::MatrixXd> all(data.data().data(), d, n);
  if (!all.allFinite()) Fail(ErrorCode::kNumeric, "non-finite training data");
  const bool classify = cfg.objective == Objective::kCrossEntropy;
  std::vector<std::size_t> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(cfg.shuffle_seed);
  Updater updater(model, cfg);
  Gradients grads;
  TrainHistory history;
  Eigen::MatrixXd x, y;
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0.0;
    std::size_t correct = 0;
    int batch_index = 0;
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(cfg.batch_size), ++batch_index) {
      const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
      const auto b = static_cast<Eigen::Index>(end - start);
      x.resize(d, b);
      for (Eigen::Index j = 0; j < b; ++j) x.col(j) = all.col(static_cast<Eigen::Index>(order[start + static_cast<std::size_t>(j)]));
      if (classify) {
        y = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(kNumClasses), b);
        for (Eigen::Index j = 0; j < b; ++j)
          y(static_cast<Eigen::Index>(Index(labels[order[start + static_cast<std::size_t>(j)]])), j) = 1.0;
      }
      const double loss = Backprop(model, x, classify ? y : x, cfg.objective, grads);
      if (!std::isfinite(loss))
        Fail(ErrorCode::kNumeric,
             fmt::format("loss became non-finite at epoch {}, batch {}", epoch, batch_index));
      loss_sum += loss * static_cast<double>(b);
      updater.Apply(model, grads);
    }
    const double epoch_loss = loss_sum / static_cast<double>(n);
    double accuracy = 0.0;
    if (classify) {
      const Eigen::MatrixXd p = Predict(model, Eigen::MatrixXd(all));
      for (Eigen::Index j = 0; j < n; ++j) {
        Eigen::Index arg = 0;
        p.col(j).maxCoeff(&arg);
        if (static_cast<std::size_t>(arg) == Index(labels[static_cast<std::size_t>(j)])) ++correct;
      }
      accuracy = static_cast<double>(correct) / static_cast<double>(n);
      history.accuracy.push_back(accuracy);
    }
    history.loss.push_back(epoch_loss);
    if (on_epoch) on_epoch(epoch, epoch_loss, accuracy);
  }
  return history;
}

}  // namespace

TrainHistory TrainAutoencoder(MlpModel& model, const FeatureMatrix& data, const TrainConfig& cfg,
                              const EpochCallback& on_epoch) {
  if (cfg.objective != Objective::kMse)
    Fail(ErrorCode::kConfig, "autoencoder training uses the mse objective");
  if (model.input_dim() != data.cols() || model.output_dim() != data.cols())
    Fail(ErrorCode::kInvalidArgument,
         fmt::format("autoencoder shape {}->{} does not fit {}-dim data", model.input_dim(),
                     model.output_dim(), data.cols()));
  for (double v : data.data())
    if (v < 0.0 || v > 1.0)
      Fail(ErrorCode::kInvalidArgument, "autoencoder data must be normalised to [0, 1]");
  return RunTraining(model, data, {}, cfg, on_epoch);
}

TrainHistory TrainClassifier(MlpModel& model, const FeatureMatrix& features,
                             std::span<const EventClass> labels, const TrainConfig& cfg,
                             const EpochCallback& on_epoch) {
  if (cfg.objective != Objective::kCrossEntropy)
    Fail(ErrorCode::kConfig, "classifier training uses the cross_entropy objective");
  if (labels.size() != features.rows())
    Fail(ErrorCode::kInvalidArgument,
         fmt::format("{} labels for {} feature frames", labels.size(), features.rows()));
  if (model.output_dim() != kNumClasses || model.layers.back().activation != Activation::kSoftmax)
    Fail(ErrorCode::kInvalidArgument, "classifier needs a 4-way softmax output");
  if (model.input_dim() != features.cols())
    Fail(ErrorCode::kInvalidArgument,
         fmt::format("classifier expects {} features, got {}", model.input_dim(), features.cols()));
  for (EventClass c : labels)
    if (Index(c) >= kNumClasses) Fail(ErrorCode::kInvalidArgument, "label out of range");
  return RunTraining(model, features, labels, cfg, on_epoch);
}

}  // namespace sdb
