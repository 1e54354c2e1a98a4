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

#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles/fixtures.hpp"
#include "oracles/oracles.hpp"
#include "sdb/bundle.hpp"
#include "sdb/decoder.hpp"
#include "sdb/error.hpp"
#include "sdb/gmm.hpp"
#include "sdb/hmm.hpp"
#include "sdb/lm.hpp"
#include "sdb/tune.hpp"

using namespace sdb;
using E = EventClass;

namespace {

FeatureMatrix Gaussians(std::size_t n, std::size_t d, unsigned seed, double shift = 0.0) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  FeatureMatrix f(n, d, FeatureKind::kBottleneck);
  for (std::size_t t = 0; t < n; ++t)
    for (std::size_t k = 0; k < d; ++k) f(t, k) = g(gen) + shift + ((t % 3) == 0 ? 2.0 : 0.0);
  return f;
}


}  // namespace

TEST_CASE("gmm log-likelihood closed forms") {
  Gmm g;
  g.weights = Eigen::VectorXd::Ones(1);
  g.means = Eigen::MatrixXd::Zero(1, 1);
  g.variances = Eigen::MatrixXd::Ones(1, 1);
  g.Prepare();
  const double x = 0.0;
  CHECK(g.LogLikelihood({&x, 1}) == doctest::Approx(-0.5 * std::log(2 * std::numbers::pi)));
  CHECK(g.LogLikelihood({&x, 1}) == doctest::Approx(-0.9189).epsilon(1e-4));

  Gmm two;
  two.weights = Eigen::Vector2d(1.0, 0.0);
  two.means = Eigen::MatrixXd::Zero(2, 1);
  two.means(1, 0) = 3.0;
  two.variances = Eigen::MatrixXd::Ones(2, 1);
  two.Prepare();
  const double y = 1.3;
  CHECK(two.LogLikelihood({&y, 1}) == doctest::Approx(g.LogLikelihood({&y, 1})));
  const double far = 1e6;
  CHECK(std::isfinite(two.LogLikelihood({&far, 1})));
  std::vector<double> wrong(2, 0.0);
  CHECK_THROWS_AS(two.LogLikelihood(wrong), Error);
}

TEST_CASE("fit_gmm: K=1 closed form, EM monotone, separated clusters") {
  auto f = Gaussians(200, 3, 1);
  GmmFitOptions one;
  one.components = 1;
  auto r1 = FitGmm(f, one);
  for (std::size_t d = 0; d < 3; ++d) {
    double m = 0, v = 0;
    for (std::size_t t = 0; t < 200; ++t) m += f(t, d);
    m /= 200;
    for (std::size_t t = 0; t < 200; ++t) v += (f(t, d) - m) * (f(t, d) - m);
    v /= 200;
    CHECK(r1.gmm.means(0, d) == doctest::Approx(m));
    CHECK(r1.gmm.variances(0, d) == doctest::Approx(v));
  }

  GmmFitOptions opts;
  opts.components = 4;
  auto r = FitGmm(Gaussians(300, 2, 5), opts);
  for (std::size_t i = 1; i < r.log_likelihood.size(); ++i)
    CHECK(r.log_likelihood[i] - r.log_likelihood[i - 1] >= -1e-8);
  CHECK(std::abs(r.gmm.weights.sum() - 1.0) < 1e-9);
  CHECK((r.gmm.variances.array() >= kVarianceFloor).all());

  std::mt19937 gen(3);
  std::normal_distribution<double> g(0.0, 0.3);
  FeatureMatrix c(200, 2, FeatureKind::kMfcc);
  for (std::size_t t = 0; t < 200; ++t) {
    const double centre = t < 100 ? -5.0 : 5.0;
    c(t, 0) = centre + g(gen);
    c(t, 1) = -centre + g(gen);
  }
  GmmFitOptions k2;
  k2.components = 2;
  auto rc = FitGmm(c, k2);
  int lo = rc.gmm.means(0, 0) < rc.gmm.means(1, 0) ? 0 : 1;
  CHECK(std::abs(rc.gmm.means(lo, 0) + 5.0) < 0.1);
  CHECK(std::abs(rc.gmm.means(lo, 1) - 5.0) < 0.1);
  CHECK(std::abs(rc.gmm.means(1 - lo, 0) - 5.0) < 0.1);

  CHECK_THROWS_AS(FitGmm(Gaussians(20, 2, 1), opts), Error);
  FeatureMatrix same(100, 2, FeatureKind::kMfcc);
  auto deg = FitGmm(same, k2);
  CHECK(deg.degenerate);
  CHECK((deg.gmm.variances.array() >= kVarianceFloor).all());
}

TEST_CASE("hmm training: state counts, monotone likelihood, normalised transitions") {
  CHECK(TandemStateCount(E::kSnore) == 7);
  CHECK(TandemStateCount(E::kBreath) == 5);
  CHECK(TandemStateCount(E::kOther) == 3);
  CHECK(TandemStateCount(E::kSilence) == 3);

  std::vector<FeatureMatrix> feats;
  for (unsigned s = 0; s < 6; ++s) feats.push_back(Gaussians(60, 2, s));
  std::vector<Segment> segs;
  for (auto& f : feats) segs.push_back({&f, 0, f.rows(), 1.0});
  HmmTrainOptions opts;
  opts.gmm_components = 2;
  auto r = TrainClassHmm(E::kBreath, segs, opts);
  CHECK(r.model.n_states() == 5);
  for (std::size_t i = 1; i < r.log_likelihood.size(); ++i)
    CHECK(r.log_likelihood[i] - r.log_likelihood[i - 1] >= -1e-8);
  for (int j = 0; j < 5; ++j) CHECK(std::abs(r.model.self[j] + r.model.next[j] - 1.0) < 1e-9);
  for (const auto& g : r.model.states) CHECK(std::abs(g.weights.sum() - 1.0) < 1e-9);

  std::vector<Segment> with_short = segs;
  with_short.push_back({&feats[0], 0, 3, 1.0});
  auto rs = TrainClassHmm(E::kBreath, with_short, opts);
  CHECK(rs.skipped_segments == 1);
}

TEST_CASE("repeating a segment equals weighting it") {
  auto f = Gaussians(80, 2, 9);
  std::vector<Segment> repeated(10, Segment{&f, 0, 80, 1.0});
  std::vector<Segment> weighted{Segment{&f, 0, 80, 10.0}};
  HmmTrainOptions opts;
  opts.gmm_components = 2;
  auto a = TrainClassHmm(E::kOther, repeated, opts);
  auto b = TrainClassHmm(E::kOther, weighted, opts);
  for (int j = 0; j < 3; ++j) {
    CHECK(a.model.self[j] == doctest::Approx(b.model.self[j]).epsilon(1e-9));
    CHECK((a.model.states[j].means - b.model.states[j].means).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((a.model.states[j].variances - b.model.states[j].variances).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("bigram counts with add-one smoothing") {
  std::vector<std::vector<E>> seqs{{E::kSnore, E::kSilence, E::kSnore, E::kSilence}};
  auto lm = TrainBigram(seqs);
  CHECK(lm.transition(0, 3) == doctest::Approx(0.5));
  CHECK(lm.transition(0, 1) == doctest::Approx(1.0 / 6.0));
  for (int i = 0; i < 4; ++i) CHECK(lm.transition.row(i).sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(lm.initial.sum() == doctest::Approx(1.0));
  CHECK(lm.final.sum() == doctest::Approx(1.0));
  CHECK((lm.transition.array() > 0).all());
  CHECK_THROWS_AS(TrainBigram(std::span<const std::vector<E>>{}), Error);
}

TEST_CASE("viterbi equals exhaustive enumeration") {
  std::mt19937 gen(17);
  std::normal_distribution<double> em(0.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    auto graph = testgraph::RandomGraph(gen, 5, trial % 2 == 0);
    const int S = graph.total_states();
    const int T = std::uniform_int_distribution<int>(1, 8)(gen);
    Eigen::MatrixXd e(T, S);
    for (Eigen::Index i = 0; i < e.size(); ++i) e.data()[i] = em(gen);
    DecodeConfig cfg;
    cfg.lm_scale = std::uniform_real_distribution<double>(0.0, 3.0)(gen);
    cfg.insertion_penalty = std::uniform_real_distribution<double>(-3.0, 3.0)(gen);
    double best = 0;
    auto want = oracle::BestPath(S, T, [&](std::span<const int> p) { return PathScore(e, graph, cfg, p); }, &best);
    if (!std::isfinite(best)) {
      CHECK_THROWS_AS(Viterbi(e, graph, cfg), Error);
      continue;
    }
    auto got = Viterbi(e, graph, cfg);
    CHECK(got.states == want);
    CHECK(got.score == doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("decoder limits and invariances") {
  std::mt19937 gen(2);
  std::normal_distribution<double> em(0.0, 1.0);
  ClassPriors pri;
  pri.mean_duration = {5, 5, 5, 5};
  BigramLm lm;
  lm.transition << 0.1, 0.2, 0.3, 0.4, 0.4, 0.1, 0.2, 0.3, 0.3, 0.4, 0.1, 0.2, 0.2, 0.3, 0.4, 0.1;
  auto graph = HybridGraph(pri, lm);
  Eigen::MatrixXd e(60, 4);
  for (Eigen::Index i = 0; i < e.size(); ++i) e.data()[i] = em(gen);

  DecodeConfig neutral;
  neutral.lm_scale = 0;
  neutral.insertion_penalty = 0;
  DecodeConfig no_lm;
  no_lm.use_lm = false;
  CHECK(Viterbi(e, graph, neutral).states == Viterbi(e, graph, no_lm).states);

  DecodeConfig huge;
  huge.insertion_penalty = -1e9;
  CHECK(ToEvents(Viterbi(e, graph, huge)).size() == 1);

  DecodeConfig cfg;
  auto base = Viterbi(e, graph, cfg);
  Eigen::MatrixXd shifted = e.array() + 3.5;
  auto moved = Viterbi(shifted, graph, cfg);
  CHECK(moved.states == base.states);
  CHECK(moved.score == doctest::Approx(base.score + 60 * 3.5));

  FeatureMatrix post(60, 4, FeatureKind::kPosterior);
  for (std::size_t t = 0; t < 60; ++t) {
    double s = 0;
    for (std::size_t c = 0; c < 4; ++c) s += post(t, c) = std::exp(e(t, c));
    for (std::size_t c = 0; c < 4; ++c) post(t, c) /= s;
  }
  ClassPriors p1;
  p1.prior = {0.1, 0.2, 0.3, 0.4};
  p1.mean_duration = pri.mean_duration;
  ClassPriors p2 = p1;
  for (double& v : p2.prior) v *= 7.0;
  auto g1 = HybridGraph(p1, lm);
  CHECK(Viterbi(HybridEmissions(post, p1), g1, cfg).states == Viterbi(HybridEmissions(post, p2), g1, cfg).states);

  CHECK_THROWS_AS(Viterbi(Eigen::MatrixXd(0, 4), graph, cfg), Error);
}

TEST_CASE("class priors are positive and normalised") {
  FrameLabels fl;
  fl.labels = {E::kSnore, E::kSnore, E::kSilence, E::kSilence, E::kSilence, E::kSnore};
  std::vector<FrameLabels> v{fl};
  auto p = EstimatePriors(v);
  double s = 0;
  for (double x : p.prior) {
    CHECK(x > 0);
    s += x;
  }
  CHECK(s == doctest::Approx(1.0));
  CHECK(p.mean_duration[0] == doctest::Approx(1.5));
}

TEST_CASE("tune_decode") {
  std::mt19937 gen(4);
  std::normal_distribution<double> em(0.0, 1.0);
  ClassPriors pri;
  pri.mean_duration = {8, 8, 8, 8};
  auto graph = HybridGraph(pri, BigramLm{});
  std::vector<DevRecording> dev(2);
  for (auto& d : dev) {
    d.reference.labels.resize(80);
    d.emissions = Eigen::MatrixXd(80, 4);
    for (int t = 0; t < 80; ++t) {
      d.reference.labels[t] = ClassAt((t / 20) % 4);
      for (int c = 0; c < 4; ++c) d.emissions(t, c) = em(gen) + (c == (t / 20) % 4 ? 1.0 : 0.0);
    }
  }
  DecodeConfig base;
  TuneGrid single{{1.0}, {0.0}};
  auto r1 = TuneDecode(dev, graph, single, base);
  CHECK(r1.best.lm_scale == 1.0);
  CHECK(r1.best.insertion_penalty == 0.0);

  TuneGrid grid{{0.0, 1.0, 2.0}, {-8.0, -4.0, 0.0, 2.0}};
  auto r = TuneDecode(dev, graph, grid, base);
  CHECK(r.evaluated.size() == 12);
  CHECK(r.best.events.eer <= r1.best.events.eer);
  TuneGrid bigger = grid;
  bigger.insertion_penalties.push_back(-12.0);
  CHECK(TuneDecode(dev, graph, bigger, base).best.events.eer <= r.best.events.eer);
  CHECK_THROWS_AS(TuneDecode(dev, graph, TuneGrid{}, base), Error);
}

TEST_CASE("bundle round-trip") {
  ModelBundle b;
  b.system = SystemKind::kHybrid;
  b.features = "rm+acf";
  b.classifier = InitClassifier(96, 3);
  b.standardizer.mean = {1, 2};
  b.standardizer.inv_std = {0.5, 0.25};
  b.norm_refs = {"norm_rm.bin", "norm_acf.bin"};
  auto path = std::filesystem::temp_directory_path() / "sdb_bundle_rt.bin";
  SaveBundle(b, path);
  auto r = LoadBundle(path);
  CHECK(r.features == "rm+acf");
  CHECK(r.norm_refs == b.norm_refs);
  CHECK(r.standardizer == b.standardizer);
  CHECK(SerializeBundle(r) == SerializeBundle(b));
  std::filesystem::remove(path);
}
