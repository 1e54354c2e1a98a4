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
#include <random>

#include <fmt/format.h>

#include "sdb/error.hpp"
#include "sdb/neural.hpp"

namespace sdb {

std::string_view ToString(Activation a) {
  switch (a) {
    case Activation::kSigmoid:
      return "sigmoid";
    case Activation::kSoftmax:
      return "softmax";
    case Activation::kLinear:
      break;
  }
  return "linear";
}

std::size_t MlpModel::ParameterCount() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += static_cast<std::size_t>(l.weight.size() + l.bias.size());
  return n;
}

void MlpModel::Validate() const {
  if (layers.empty()) Fail(ErrorCode::kInvalidArgument, "model has no layers");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& l = layers[i];
    if (l.weight.rows() == 0 || l.weight.cols() == 0)
      Fail(ErrorCode::kInvalidArgument, fmt::format("layer {} has an empty weight matrix", i));
    if (l.bias.size() != l.weight.rows())
      Fail(ErrorCode::kInvalidArgument, fmt::format("layer {} bias size mismatch", i));
    if (i > 0 && l.weight.cols() != layers[i - 1].weight.rows())
      Fail(ErrorCode::kInvalidArgument,
           fmt::format("layer {} expects {} inputs but layer {} has {} outputs", i,
                       l.weight.cols(), i - 1, layers[i - 1].weight.rows()));
    if (l.activation == Activation::kSoftmax && i + 1 != layers.size())
      Fail(ErrorCode::kInvalidArgument, "softmax is only allowed on the final layer");
    if (!l.weight.allFinite() || !l.bias.allFinite())
      Fail(ErrorCode::kNumeric, fmt::format("layer {} has non-finite parameters", i));
  }
}

MlpModel InitMlp(std::span<const int> dims, std::span<const Activation> activations,
                 std::uint64_t seed) {
  if (dims.size() < 2) Fail(ErrorCode::kInvalidArgument, "need at least an input and one layer");
  if (activations.size() != dims.size() - 1)
    Fail(ErrorCode::kInvalidArgument,
         fmt::format("{} activations given for {} layers", activations.size(), dims.size() - 1));
  for (int d : dims)
    if (d <= 0) Fail(ErrorCode::kInvalidArgument, "layer widths must be positive");
  MlpModel model;
  model.seed = seed;
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
    const int fan_in = dims[i];
    const int fan_out = dims[i + 1];
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    std::uniform_real_distribution<double> dist(-limit, limit);
    DenseLayer layer;
    layer.weight.resize(fan_out, fan_in);
    for (int r = 0; r < fan_out; ++r)
      for (int c = 0; c < fan_in; ++c) layer.weight(r, c) = dist(rng);
    layer.bias = Eigen::VectorXd::Zero(fan_out);
    layer.activation = activations[i];
    model.layers.push_back(std::move(layer));
  }
  model.Validate();
  return model;
}

std::vector<int> RateMapAutoencoderDims() { return {64, 64, 32, 16, 16, 32, 64}; }

std::vector<int> AcfAutoencoderDims() { return {320, 320, 128, 64, 32, 16, 16, 32, 64, 128, 320}; }

MlpModel InitAutoencoder(std::span<const int> dims, std::uint64_t seed) {
  if (dims.size() < 2 || dims.front() != dims.back())
    Fail(ErrorCode::kInvalidArgument, "autoencoder output width must equal its input width");
  std::vector<Activation> acts(dims.size() - 1, Activation::kSigmoid);
  return InitMlp(dims, acts, seed);
}

int ClassifierHiddenWidth(std::size_t input_dim) { return input_dim >= 96 ? 192 : 96; }

MlpModel InitClassifier(std::size_t input_dim, std::uint64_t seed) {
  const int h = ClassifierHiddenWidth(input_dim);
  const std::vector<int> dims = {static_cast<int>(input_dim), h, h, h, static_cast<int>(kNumClasses)};
  const std::vector<Activation> acts = {Activation::kSigmoid, Activation::kSigmoid,
                                        Activation::kSigmoid, Activation::kSoftmax};
  return InitMlp(dims, acts, seed);
}

namespace {

void Activate(Eigen::MatrixXd& z, Activation a) {
  switch (a) {
    case Activation::kSigmoid:
      z = (1.0 + (-z.array()).exp()).inverse().matrix();
      break;
    case Activation::kSoftmax:
      for (Eigen::Index c = 0; c < z.cols(); ++c) {
        auto col = z.col(c);
        col.array() -= col.maxCoeff();
        col = col.array().exp().matrix();
        col /= col.sum();
      }
      break;
    case Activation::kLinear:
      break;
  }
}

}  // namespace

std::vector<Eigen::MatrixXd> Forward(const MlpModel& model, const Eigen::MatrixXd& inputs) {
  if (static_cast<std::size_t>(inputs.rows()) != model.input_dim())
    Fail(ErrorCode::kInvalidArgument,
         fmt::format("model expects {} inputs, batch has {}", model.input_dim(), inputs.rows()));
  if (!inputs.allFinite()) Fail(ErrorCode::kNumeric, "non-finite network input");
  std::vector<Eigen::MatrixXd> acts;
  acts.reserve(model.layers.size() + 1);
  acts.push_back(inputs);
  for (const auto& l : model.layers) {
    Eigen::MatrixXd z = l.weight * acts.back();
    z.colwise() += l.bias;
    Activate(z, l.activation);
    acts.push_back(std::move(z));
  }
  return acts;
}

Eigen::MatrixXd Predict(const MlpModel& model, const Eigen::MatrixXd& inputs) {
  if (static_cast<std::size_t>(inputs.rows()) != model.input_dim())
    Fail(ErrorCode::kInvalidArgument,
         fmt::format("model expects {} inputs, batch has {}", model.input_dim(), inputs.rows()));
  Eigen::MatrixXd a = inputs;
  for (const auto& l : model.layers) {
    Eigen::MatrixXd z = l.weight * a;
    z.colwise() += l.bias;
    Activate(z, l.activation);
    a = std::move(z);
  }
  return a;
}

FeatureMatrix Predict(const MlpModel& model, const FeatureMatrix& f, FeatureKind out_kind) {
  if (f.cols() != model.input_dim())
    Fail(ErrorCode::kInvalidArgument,
         fmt::format("model expects {} features, got {}", model.input_dim(), f.cols()));
  FeatureMatrix out(f.rows(), model.output_dim(), out_kind, f.frame_period());
  if (f.rows() == 0) return out;
  Eigen::Map<const Eigen::MatrixXd> in(f.data().data(), static_cast<Eigen::Index>(f.cols()),
                                       static_cast<Eigen::Index>(f.rows()));
  if (!in.allFinite()) Fail(ErrorCode::kNumeric, "non-finite network input");
  Eigen::Map<Eigen::MatrixXd>(out.data().data(), static_cast<Eigen::Index>(out.cols()),
                              static_cast<Eigen::Index>(out.rows())) = Predict(model, Eigen::MatrixXd(in));
  return out;
}

namespace {

double BatchLoss(const Eigen::MatrixXd& out, const Eigen::MatrixXd& targets, Objective objective) {
  const double b = static_cast<double>(out.cols());
  if (objective == Objective::kMse) return 0.5 * (out - targets).squaredNorm() / b;
  return -(targets.array() * out.array().max(1e-300).log()).sum() / b;
}

void CheckTargets(const MlpModel& model, const Eigen::MatrixXd& inputs,
                  const Eigen::MatrixXd& targets, Objective objective) {
  if (targets.cols() != inputs.cols() ||
      static_cast<std::size_t>(targets.rows()) != model.output_dim())
    Fail(ErrorCode::kInvalidArgument, "target shape does not match the model output");
  const Activation last = model.layers.back().activation;
  if (objective == Objective::kCrossEntropy && last != Activation::kSoftmax)
    Fail(ErrorCode::kInvalidArgument, "cross-entropy requires a softmax output layer");
  if (objective == Objective::kMse && last == Activation::kSoftmax)
    Fail(ErrorCode::kInvalidArgument, "mse is not supported with a softmax output layer");
}

}  // namespace

double Loss(const MlpModel& model, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets,
            Objective objective) {
  CheckTargets(model, inputs, targets, objective);
  return BatchLoss(Predict(model, inputs), targets, objective);
}

double Backprop(const MlpModel& model, const Eigen::MatrixXd& inputs,
                const Eigen::MatrixXd& targets, Objective objective, Gradients& grads) {
  CheckTargets(model, inputs, targets, objective);
  const auto acts = Forward(model, inputs);
  const std::size_t n = model.layers.size();
  const double b = static_cast<double>(inputs.cols());
  grads.weight.resize(n);
  grads.bias.resize(n);

  // delta holds dLoss/dz for the current layer.
  Eigen::MatrixXd delta = (acts[n] - targets) / b;
  if (objective == Objective::kMse && model.layers[n - 1].activation == Activation::kSigmoid)
    delta.array() *= acts[n].array() * (1.0 - acts[n].array());
  for (std::size_t i = n; i-- > 0;) {
    grads.weight[i].noalias() = delta * acts[i].transpose();
    grads.bias[i] = delta.rowwise().sum();
    if (i == 0) break;
    Eigen::MatrixXd up = model.layers[i].weight.transpose() * delta;
    if (model.layers[i - 1].activation == Activation::kSigmoid)
      up.array() *= acts[i].array() * (1.0 - acts[i].array());
    delta = std::move(up);
  }
  return BatchLoss(acts[n], targets, objective);
}

Eigen::MatrixXd OneHot(std::span<const EventClass> labels) {
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(kNumClasses),
                                            static_cast<Eigen::Index>(labels.size()));
  for (std::size_t i = 0; i < labels.size(); ++i)
    t(static_cast<Eigen::Index>(Index(labels[i])), static_cast<Eigen::Index>(i)) = 1.0;
  return t;
}

BottleneckExtractor BottleneckExtractor::FromAutoencoder(const MlpModel& autoencoder) {
  autoencoder.Validate();
  std::size_t narrowest = 0;
  for (std::size_t i = 1; i < autoencoder.layers.size(); ++i)
    if (autoencoder.layers[i].weight.rows() < autoencoder.layers[narrowest].weight.rows())
      narrowest = i;
  BottleneckExtractor ex;
  ex.encoder.seed = autoencoder.seed;
  ex.encoder.layers.assign(autoencoder.layers.begin(),
                           autoencoder.layers.begin() + static_cast<long>(narrowest) + 1);
  return ex;
}

FeatureMatrix EncodeBottleneck(const BottleneckExtractor& extractor, const FeatureMatrix& f) {
  return Predict(extractor.encoder, f, FeatureKind::kBottleneck);
}

FeatureMatrix Posteriors(const MlpModel& classifier, const FeatureMatrix& f) {
  if (classifier.output_dim() != kNumClasses ||
      classifier.layers.back().activation != Activation::kSoftmax)
    Fail(ErrorCode::kInvalidArgument, "posteriors need a 4-way softmax classifier");
  return Predict(classifier, f, FeatureKind::kPosterior);
}

namespace {

// Finite differences of a double loss lose most of their digits to
// cancellation when a gradient is ~1e-8, so the probe runs in long double.
using WideMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using WideVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

struct WideLayer {
  WideMatrix weight;
  WideVector bias;
  Activation activation;
};

void WideActivate(Activation activation, WideMatrix& z) {
  switch (activation) {
    case Activation::kSigmoid:
      z = (1.0L + (-z.array()).exp()).inverse().matrix();
      break;
    case Activation::kSoftmax:
      for (Eigen::Index c = 0; c < z.cols(); ++c) {
        auto col = z.col(c);
        col.array() -= col.maxCoeff();
        col = col.array().exp().matrix();
        col /= col.sum();
      }
      break;
    case Activation::kLinear:
      break;
  }
}

WideMatrix WidePreActivation(const WideLayer& l, const WideMatrix& a) {
  WideMatrix z = l.weight * a;
  z.colwise() += l.bias;
  return z;
}

WideMatrix WideStep(const WideLayer& l, const WideMatrix& a) {
  WideMatrix z = WidePreActivation(l, a);
  WideActivate(l.activation, z);
  return z;
}

long double WideLoss(const std::vector<WideLayer>& layers, std::size_t from, WideMatrix a,
                     const WideMatrix& targets, Objective objective) {
  for (std::size_t i = from; i < layers.size(); ++i) a = WideStep(layers[i], a);
  const auto b = static_cast<long double>(a.cols());
  if (objective == Objective::kMse) return 0.5L * (a - targets).squaredNorm() / b;
  return -(targets.array() * a.array().max(1e-300L).log()).sum() / b;
}

}  // namespace

GradientCheckResult GradientCheck(const MlpModel& model, const Eigen::MatrixXd& inputs,
                                  const Eigen::MatrixXd& targets, Objective objective,
                                  std::size_t max_params) {
  constexpr long double kStep = 1e-4L;
  Gradients grads;
  Backprop(model, inputs, targets, objective, grads);
  std::vector<WideLayer> wide;
  for (const auto& l : model.layers)
    wide.push_back({l.weight.cast<long double>(), l.bias.cast<long double>(), l.activation});
  const WideMatrix wide_targets = targets.cast<long double>();

  GradientCheckResult result;
  WideMatrix layer_input = inputs.cast<long double>();
  for (std::size_t i = 0; i < wide.size(); ++i) {
    const auto& layer = wide[i];
    const WideMatrix z = WidePreActivation(layer, layer_input);
    WideMatrix out = z;
    WideActivate(layer.activation, out);
    const bool has_next = i + 1 < wide.size();
    const WideMatrix z_next = has_next ? WidePreActivation(wide[i + 1], out) : WideMatrix();
    // A weight or bias of output unit r only moves row r of the pre-activation,
    // and that row reaches the next layer through column r of its weights.
    const auto loss_with = [&](Eigen::Index r, const WideMatrix& shift) {
      if (layer.activation == Activation::kSoftmax) {
        WideMatrix moved = z;
        moved.row(r) += shift;
        WideActivate(layer.activation, moved);
        return WideLoss(wide, i + 1, std::move(moved), wide_targets, objective);
      }
      WideMatrix row = z.row(r) + shift;
      WideActivate(layer.activation, row);
      if (!has_next) {
        WideMatrix moved = out;
        moved.row(r) = row;
        return WideLoss(wide, i + 1, std::move(moved), wide_targets, objective);
      }
      WideMatrix next = z_next + wide[i + 1].weight.col(r) * (row - out.row(r));
      WideActivate(wide[i + 1].activation, next);
      return WideLoss(wide, i + 2, std::move(next), wide_targets, objective);
    };
    const auto check = [&](Eigen::Index r, const WideMatrix& unit_shift, double analytic) {
      const long double up = loss_with(r, kStep * unit_shift);
      const long double down = loss_with(r, -kStep * unit_shift);
      const auto numeric = static_cast<double>((up - down) / (2.0L * kStep));
      const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
      result.max_relative_error = std::max(result.max_relative_error, std::abs(analytic - numeric) / denom);
      ++result.checked;
    };
    const WideMatrix ones = WideMatrix::Ones(1, layer_input.cols());
    const auto total = static_cast<std::size_t>(layer.weight.size() + layer.bias.size());
    const std::size_t stride = max_params == 0 || total <= max_params
                                   ? 1
                                   : (total + max_params - 1) / max_params;
    for (std::size_t k = 0; k < total; k += stride) {
      if (k < static_cast<std::size_t>(layer.weight.size())) {
        const auto idx = static_cast<Eigen::Index>(k);
        const Eigen::Index r = idx % layer.weight.rows(), c = idx / layer.weight.rows();
        check(r, layer_input.row(c), grads.weight[i].data()[k]);
      } else {
        const auto j = static_cast<Eigen::Index>(k - static_cast<std::size_t>(layer.weight.size()));
        check(j, ones, grads.bias[i](j));
      }
    }
    layer_input = std::move(out);
  }
  return result;
}

}  // namespace sdb
