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

#ifndef SDB_NEURAL_HPP_
#define SDB_NEURAL_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "sdb/features.hpp"
#include "sdb/types.hpp"

namespace sdb {

enum class Activation : std::uint8_t { kSigmoid = 0, kSoftmax = 1, kLinear = 2 };
enum class Objective : std::uint8_t { kMse = 0, kCrossEntropy = 1 };
enum class Optimizer : std::uint8_t { kSgd = 0, kAdam = 1 };

std::string_view ToString(Activation a);

struct DenseLayer {
  Eigen::MatrixXd weight;  // out x in
  Eigen::VectorXd bias;    // out
  Activation activation = Activation::kSigmoid;
};

// Fully connected feed-forward network. Batches are column-major with one
// column per example, so a row-major T x D FeatureMatrix maps onto a D x T
// batch without copying.
struct MlpModel {
  std::vector<DenseLayer> layers;
  std::uint64_t seed = 0;

  std::size_t input_dim() const { return layers.empty() ? 0 : static_cast<std::size_t>(layers.front().weight.cols()); }
  std::size_t output_dim() const { return layers.empty() ? 0 : static_cast<std::size_t>(layers.back().weight.rows()); }
  std::size_t ParameterCount() const;
  // Dimension chaining, softmax placement and finiteness. Throws kInvalidArgument.
  void Validate() const;
};

// `dims` lists the input width followed by each layer's width, so
// {48, 96, 96, 96, 4} is three hidden layers and a 4-way output.
// Glorot-uniform weights, zero biases.
MlpModel InitMlp(std::span<const int> dims, std::span<const Activation> activations,
                 std::uint64_t seed);

// Autoencoder topologies: {64, 64, 32, 16, 16, 32, 64} and
// {320, 320, 128, 64, 32, 16, 16, 32, 64, 128, 320}, all sigmoid.
std::vector<int> RateMapAutoencoderDims();
std::vector<int> AcfAutoencoderDims();
MlpModel InitAutoencoder(std::span<const int> dims, std::uint64_t seed);

// Hidden width for the frame classifier: 192 for the combined 96-dim input,
// otherwise 96.
int ClassifierHiddenWidth(std::size_t input_dim);
MlpModel InitClassifier(std::size_t input_dim, std::uint64_t seed);

// Activations of every layer (element 0 is the input).
std::vector<Eigen::MatrixXd> Forward(const MlpModel& model, const Eigen::MatrixXd& inputs);
Eigen::MatrixXd Predict(const MlpModel& model, const Eigen::MatrixXd& inputs);
// Row-wise application to a feature matrix.
FeatureMatrix Predict(const MlpModel& model, const FeatureMatrix& f, FeatureKind out_kind);

// Mean per-example loss. MSE is 0.5 * squared error summed over outputs.
double Loss(const MlpModel& model, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets,
            Objective objective);

// Parameter gradients in layer order, shaped like the parameters.
struct Gradients {
  std::vector<Eigen::MatrixXd> weight;
  std::vector<Eigen::VectorXd> bias;
};

// Returns the loss and fills `grads`.
double Backprop(const MlpModel& model, const Eigen::MatrixXd& inputs,
                const Eigen::MatrixXd& targets, Objective objective, Gradients& grads);

struct TrainConfig {
  double learning_rate = 0.001;
  int epochs = 60;
  int batch_size = 256;
  Objective objective = Objective::kMse;
  std::uint64_t shuffle_seed = 1;
  Optimizer optimizer = Optimizer::kSgd;
  double momentum = 0.0;
  double weight_decay = 0.0;

  void Validate() const;
};

struct TrainHistory {
  std::vector<double> loss;      // per epoch
  std::vector<double> accuracy;  // per epoch, classifier only
};

using EpochCallback = std::function<void(int epoch, double loss, double accuracy)>;

// Minibatch training on [0, 1]-scaled data, reconstructing the input.
TrainHistory TrainAutoencoder(MlpModel& model, const FeatureMatrix& data, const TrainConfig& cfg,
                              const EpochCallback& on_epoch = {});

// Frame classifier on (features, labels) pairs with a softmax output.
TrainHistory TrainClassifier(MlpModel& model, const FeatureMatrix& features,
                             std::span<const EventClass> labels, const TrainConfig& cfg,
                             const EpochCallback& on_epoch = {});

// Encoder half of an autoencoder: layers up to and including the first
// narrowest layer.
struct BottleneckExtractor {
  MlpModel encoder;

  static BottleneckExtractor FromAutoencoder(const MlpModel& autoencoder);
  std::size_t input_dim() const { return encoder.input_dim(); }
  std::size_t output_dim() const { return encoder.output_dim(); }
};

FeatureMatrix EncodeBottleneck(const BottleneckExtractor& extractor, const FeatureMatrix& f);

// T x 4 class posteriors in class order.
FeatureMatrix Posteriors(const MlpModel& classifier, const FeatureMatrix& f);

// Max relative error between backprop and central finite differences
// (step 1e-5). `max_params` > 0 checks an evenly strided subset of each layer.
struct GradientCheckResult {
  double max_relative_error = 0.0;
  std::size_t checked = 0;
};
GradientCheckResult GradientCheck(const MlpModel& model, const Eigen::MatrixXd& inputs,
                                  const Eigen::MatrixXd& targets, Objective objective,
                                  std::size_t max_params = 0);

// One-hot targets for class indices.
Eigen::MatrixXd OneHot(std::span<const EventClass> labels);

inline constexpr std::uint32_t kModelFormatVersion = 1;
std::string SerializeModel(const MlpModel& model);
MlpModel DeserializeModel(std::string_view bytes, const std::string& context = "model");
void SaveModel(const MlpModel& model, const std::filesystem::path& path);
MlpModel LoadModel(const std::filesystem::path& path);

}  // namespace sdb

#endif  // SDB_NEURAL_HPP_
