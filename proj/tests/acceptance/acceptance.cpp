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
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "oracles/fixtures.hpp"
#include "oracles/oracles.hpp"
#include "oracles/signals.hpp"
#include "sdb/corpus.hpp"
#include "sdb/decoder.hpp"
#include "sdb/error.hpp"
#include "sdb/frontend.hpp"
#include "sdb/gmm.hpp"
#include "sdb/hmm.hpp"
#include "sdb/metrics.hpp"
#include "sdb/neural.hpp"
#include "sdb/pipeline.hpp"

namespace fs = std::filesystem;
using namespace sdb;

namespace {

// Tolerances and limits.
constexpr double kAcfRelTol = 1e-9;
constexpr double kErbTol = 1e-9;
constexpr double kGradTol = 1e-4;
constexpr double kMonotoneSlack = 1e-8;
constexpr double kFTol = 1e-4;
constexpr double kBenchmarkMinF = 0.90;
constexpr double kBenchmarkMaxEer = 0.20;
constexpr double kBaselineMargin = 0.05;

constexpr double kAcfSeconds = 1.0;
constexpr double kFilterbankSeconds = 1.0;
constexpr double kGradSeconds = 30.0;
constexpr double kEmSeconds = 120.0;
constexpr double kViterbiSeconds = 10.0;
constexpr double kMetricSeconds = 10.0;
constexpr double kNeutralSeconds = 60.0;
constexpr double kBenchmarkSeconds = 15.0 * 60.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Clock {
 public:
  double Seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// A negative limit leaves the runtime out of the detail.
Outcome Timed(double limit, const std::function<Outcome()>& body) {
  Clock clock;
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, fmt::format("exception: {}", e.what())};
  }
  const double s = clock.Seconds();
  if (limit > 0.0 && s >= limit) {
    o.pass = false;
    o.detail += fmt::format("; runtime {:.1f}s exceeds {:.0f}s", s, limit);
  } else if (limit >= 0.0) {
    o.detail += fmt::format("; {:.2f}s", s);
  }
  return o;
}

Outcome AcfOracle() {
  std::mt19937_64 gen(101);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto y = testsig::Noise(kFrameLength, 1.0, static_cast<unsigned>(gen()));
    const FeatureMatrix f = AcfFrames(AudioClip(y));
    const auto want = oracle::Acf(y, kAcfLags);
    if (f.rows() != 1 || f.cols() != static_cast<std::size_t>(kAcfLags)) return {false, "unexpected ACF shape"};
    for (int k = 0; k < kAcfLags; ++k)
      worst = std::max(worst, std::abs(f(0, k) - want[k]) / std::max(std::abs(want[k]), 1e-300));
  }
  return {worst <= kAcfRelTol, fmt::format("100 frames, max relative error {:.2e}", worst)};
}

Outcome Filterbank() {
  const FilterbankSpec bank = DesignGammatoneBank();
  const auto& cf = bank.center_freqs;
  if (cf.size() != 64) return {false, fmt::format("{} channels", cf.size())};
  const double lo = oracle::GlasbergMooreErbRate(80.0), hi = oracle::GlasbergMooreErbRate(7500.0);
  const double step = (hi - lo) / 63.0;
  double pin = std::max(std::abs(cf.front() - 80.0) / 80.0, std::abs(cf.back() - 7500.0) / 7500.0);
  double spacing = 0.0, formula = 0.0;
  for (std::size_t i = 0; i < cf.size(); ++i) {
    formula = std::max(formula, std::abs(ErbRate(cf[i]) - oracle::GlasbergMooreErbRate(cf[i])));
    if (i > 0) spacing = std::max(spacing, std::abs(ErbRate(cf[i]) - ErbRate(cf[i - 1]) - step));
  }
  const bool ok = pin <= kErbTol && spacing <= kErbTol && formula <= kErbTol;
  return {ok, fmt::format("E(80)={:.9f} E(7500)={:.9f} step={:.9f}; endpoint error {:.1e}, spacing error {:.1e}, "
                          "formula error {:.1e}",
                          lo, hi, step, pin, spacing, formula)};
}

Outcome GradCheck() {
  struct Case {
    std::vector<int> dims;
    Objective objective;
    std::size_t max_params;
  };
  const std::vector<Case> cases = {
      {{64, 32, 16, 16, 32, 64}, Objective::kMse, 0},
      {{320, 128, 64, 32, 16, 16, 32, 64, 128, 320}, Objective::kMse, 300},
      {AcfAutoencoderDims(), Objective::kMse, 300},
      {{48, 96, 96, 96, 4}, Objective::kCrossEntropy, 0},
  };
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  bool ok = true;
  std::string detail;
  for (const auto& c : cases) {
    const MlpModel m = c.objective == Objective::kMse ? InitAutoencoder(c.dims, 11)
                                                      : InitClassifier(static_cast<std::size_t>(c.dims[0]), 11);
    Eigen::MatrixXd x(c.dims.front(), 4);
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = u(gen);
    Eigen::MatrixXd t = x;
    if (c.objective == Objective::kCrossEntropy)
      t = OneHot(std::vector<EventClass>{EventClass::kSnore, EventClass::kBreath, EventClass::kOther,
                                         EventClass::kSilence});
    const auto r = GradientCheck(m, x, t, c.objective, c.max_params);
    ok = ok && r.max_relative_error < kGradTol;
    std::string topo;
    for (int d : c.dims) topo += (topo.empty() ? "" : "-") + std::to_string(d);
    detail += fmt::format("{}{} {:.1e} ({} of {} params)", detail.empty() ? "" : ", ", topo, r.max_relative_error,
                          r.checked, m.ParameterCount());
  }
  return {ok, detail};
}

FeatureMatrix Blobs(std::mt19937_64& gen, std::size_t n, std::size_t d, int clusters) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_int_distribution<int> pick(0, clusters - 1);
  FeatureMatrix f(n, d, FeatureKind::kBottleneck);
  for (std::size_t t = 0; t < n; ++t) {
    const int c = pick(gen);
    for (std::size_t k = 0; k < d; ++k) f(t, k) = 3.0 * c + (0.5 + 0.3 * k) * g(gen);
  }
  return f;
}

double WorstDrop(const std::vector<double>& ll) {
  double worst = 0.0;
  for (std::size_t i = 1; i < ll.size(); ++i) worst = std::max(worst, ll[i - 1] - ll[i]);
  return worst;
}

Outcome EmMonotone() {
  double worst_gmm = 0.0, worst_hmm = 0.0;
  std::size_t gmm_steps = 0, hmm_steps = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    std::mt19937_64 gen(seed);
    GmmFitOptions g;
    g.components = 3;
    g.max_iterations = 20;
    g.tolerance = 0.0;
    g.seed = seed;
    const auto gr = FitGmm(Blobs(gen, 300, 3, 3), g);
    worst_gmm = std::max(worst_gmm, WorstDrop(gr.log_likelihood));
    gmm_steps += gr.log_likelihood.size();

    std::vector<FeatureMatrix> feats;
    for (int i = 0; i < 6; ++i) feats.push_back(Blobs(gen, 40 + 10 * i, 2, 2));
    std::vector<Segment> segs;
    for (const auto& f : feats) segs.push_back({&f, 0, f.rows(), 1.0});
    HmmTrainOptions h;
    h.gmm_components = 2;
    h.max_iterations = 20;
    h.tolerance = 0.0;
    h.seed = seed;
    const auto hr = TrainClassHmm(EventClass::kBreath, segs, h);
    worst_hmm = std::max(worst_hmm, WorstDrop(hr.log_likelihood));
    hmm_steps += hr.log_likelihood.size();
  }
  const bool ok = worst_gmm <= kMonotoneSlack && worst_hmm <= kMonotoneSlack;
  return {ok, fmt::format("50 seeds; EM {} steps, worst drop {:.1e}; Baum-Welch {} steps, worst drop {:.1e}",
                          gmm_steps, worst_gmm, hmm_steps, worst_hmm)};
}

Outcome ViterbiOracle() {
  std::mt19937 gen(2024);
  std::normal_distribution<double> em(0.0, 2.0);
  int matched = 0, compared = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const DecodeGraph graph = testgraph::RandomGraph(gen, 5, trial % 2 == 0);
    const int states = graph.total_states();
    const int frames = std::uniform_int_distribution<int>(1, 8)(gen);
    Eigen::MatrixXd e(frames, states);
    for (Eigen::Index i = 0; i < e.size(); ++i) e.data()[i] = em(gen);
    DecodeConfig cfg;
    cfg.lm_scale = std::uniform_real_distribution<double>(0.0, 3.0)(gen);
    cfg.insertion_penalty = std::uniform_real_distribution<double>(-3.0, 3.0)(gen);
    double best = 0.0;
    const auto want = oracle::BestPath(
        states, frames, [&](std::span<const int> p) { return PathScore(e, graph, cfg, p); }, &best);
    ++compared;
    if (!std::isfinite(best)) {
      try {
        Viterbi(e, graph, cfg);
      } catch (const Error&) {
        ++matched;
      }
      continue;
    }
    const DecodeResult got = Viterbi(e, graph, cfg);
    std::vector<int> want_labels, got_labels;
    for (int s : want) want_labels.push_back(graph.class_of(s));
    for (int s : got.states) got_labels.push_back(graph.class_of(s));
    if (got.states == want && got_labels == want_labels) ++matched;
  }
  return {matched == compared, fmt::format("{}/{} problems match exhaustive enumeration", matched, compared)};
}

Outcome MetricOracles() {
  std::mt19937 gen(99);
  int agree = 0;
  for (int i = 0; i < 500; ++i) {
    std::uniform_int_distribution<int> len(0, 8), cls(0, 3);
    std::vector<int> a(len(gen)), b(len(gen));
    for (int& v : a) v = cls(gen);
    for (int& v : b) v = cls(gen);
    if (a.empty()) a.push_back(cls(gen));
    std::vector<EventClass> ea, eb;
    for (int v : a) ea.push_back(ClassAt(static_cast<std::size_t>(v)));
    for (int v : b) eb.push_back(ClassAt(static_cast<std::size_t>(v)));
    const auto r = EventErrorRate(ea, eb);
    const int d = oracle::EditDistance(a, b);
    if (r.errors() == d && r.n == static_cast<int>(a.size()) &&
        std::abs(r.eer - static_cast<double>(d) / a.size()) < 1e-15)
      ++agree;
  }
  bool f_ok = true;
  for (double x : {0.1, 0.5, 0.73, 1.0}) f_ok = f_ok && std::abs(FMeasure(x, x) - x) < 1e-12;
  const double f98 = FMeasure(0.9, 0.8);
  f_ok = f_ok && std::abs(f98 - 0.8471) <= kFTol;

  std::vector<int> ka{0, 1, 2, 3, 4, 5, 0, 1, 2, 3, 4, 5}, kb;
  for (int v : ka) kb.push_back((v + 1) % 6);
  const double kappa = CohensKappa(ka, kb).kappa;
  const bool kappa_ok = std::abs(kappa + 0.2) < 1e-12;
  return {agree == 500 && f_ok && kappa_ok,
          fmt::format("edit distance {}/500; F(0.9,0.8)={:.6f}; permutation kappa={:.15f}", agree, f98, kappa)};
}

Outcome Dimensions() {
  std::vector<std::string> bad;
  const auto rm_ae = BottleneckExtractor::FromAutoencoder(InitAutoencoder(RateMapAutoencoderDims(), 1));
  const auto acf_ae = BottleneckExtractor::FromAutoencoder(InitAutoencoder(AcfAutoencoderDims(), 1));
  const AudioClip clip(testsig::Sawtooth(120.0, kSampleRate));
  const FeatureMatrix rm = RateMap(clip, DesignGammatoneBank());
  const FeatureMatrix acf = AcfFrames(clip);
  const FeatureMatrix mfcc = Mfcc(clip);
  const FeatureMatrix rm_bn = EncodeBottleneck(rm_ae, ApplyNorm(rm, FitNorm(std::vector<FeatureMatrix>{rm})));
  const FeatureMatrix acf_bn = EncodeBottleneck(acf_ae, ApplyNorm(acf, FitNorm(std::vector<FeatureMatrix>{acf})));
  const auto expect = [&](const char* what, std::size_t got, std::size_t want) {
    if (got != want) bad.push_back(fmt::format("{} {} != {}", what, got, want));
  };
  expect("rm", rm.cols(), 64);
  expect("acf", acf.cols(), 320);
  expect("mfcc", mfcc.cols(), 12);
  expect("rm bottleneck", rm_bn.cols(), 16);
  expect("acf bottleneck", acf_bn.cols(), 16);
  expect("rm bottleneck+deltas", AddDeltas(rm_bn).cols(), 48);
  expect("acf bottleneck+deltas", AddDeltas(acf_bn).cols(), 48);
  expect("mfcc+deltas", AddDeltas(mfcc).cols(), 36);
  expect("frames rm/acf", rm.rows(), acf.rows());
  expect("frames rm/mfcc", rm.rows(), mfcc.rows());
  std::string detail = "rm 64->16->48, acf 320->16->48, mfcc 12->36";
  for (const auto& b : bad) detail += "; " + b;
  return {bad.empty(), detail};
}

std::string Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::map<std::string, std::string> ReadTree(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file()) continue;
    out[fs::relative(e.path(), root).generic_string()] = Slurp(e.path());
  }
  return out;
}

PipelineConfig Redirect(PipelineConfig cfg, const fs::path& dir) {
  cfg.corpus_dir = dir / "corpus";
  cfg.manifest.clear();
  cfg.work_dir = dir / "work";
  return cfg;
}

struct Benchmark {
  bool ran = false;
  std::string error;
  EvaluationSummary system;
  EvaluationSummary baseline;
  double seconds = 0.0;
  PipelineConfig cfg;
};

EvaluationSummary TrainAndScore(Pipeline& p, const std::string& features) {
  p.mutable_config().features = features;
  p.mutable_config().system = SystemKind::kTandem;
  p.mutable_config().split = Split::kTest;
  if (features != "mfcc") p.TrainAutoencoders();
  p.TrainTandem();
  p.Tune();
  p.Decode();
  return p.Evaluate();
}

Benchmark RunBenchmark(const fs::path& config, const fs::path& dir) {
  Benchmark b;
  Clock clock;
  try {
    fs::remove_all(dir);
    b.cfg = Redirect(LoadPipelineConfig(config), dir);
    Pipeline p(b.cfg);
    p.Synth();
    p.mutable_config().features = "rm+acf";
    p.Extract();
    p.mutable_config().features = "mfcc";
    p.Extract();
    b.system = TrainAndScore(p, "rm+acf");
    b.baseline = TrainAndScore(p, "mfcc");
    b.ran = true;
  } catch (const std::exception& e) {
    b.error = e.what();
  }
  b.seconds = clock.Seconds();
  return b;
}

Outcome NeutralLm(const Benchmark& b) {
  if (!b.ran) return {false, "benchmark did not run: " + b.error};
  PipelineConfig cfg = b.cfg;
  cfg.features = "rm+acf";
  cfg.system = SystemKind::kTandem;
  cfg.split = Split::kTest;
  cfg.lm_scale_override = 0.0;
  cfg.insertion_penalty_override = 0.0;
  Pipeline neutral(cfg);
  const auto files = neutral.Decode();
  std::map<std::string, std::string> a;
  for (const auto& f : files) a[f.filename().string()] = Slurp(f);
  cfg.lm_scale_override.reset();
  cfg.insertion_penalty_override.reset();
  cfg.no_lm = true;
  Pipeline plain(cfg);
  int same = 0;
  for (const auto& f : plain.Decode())
    if (a[f.filename().string()] == Slurp(f)) ++same;
  // Leave the tuned decodes in place for anyone inspecting the work directory.
  cfg.no_lm = false;
  Pipeline(cfg).Decode();
  return {same == static_cast<int>(files.size()) && !files.empty(),
          fmt::format("{}/{} test recordings identical", same, files.size())};
}

Outcome EndToEnd(const Benchmark& b) {
  if (!b.ran) return {false, "benchmark did not run: " + b.error};
  const double f = b.system.frames.f_measure, eer = b.system.events.eer, base = b.baseline.events.eer;
  const bool ok = f >= kBenchmarkMinF && eer <= kBenchmarkMaxEer && eer - base <= kBaselineMargin &&
                  b.seconds < kBenchmarkSeconds;
  return {ok, fmt::format("rm+acf tandem F={:.4f} EER={:.4f}; mfcc tandem EER={:.4f}; gap {:+.4f}; {:.0f}s", f, eer,
                          base, eer - base, b.seconds)};
}

Outcome Determinism(const fs::path& config, const fs::path& dir) {
  const auto run = [&](const fs::path& out) {
    fs::remove_all(out);
    PipelineConfig cfg = Redirect(LoadPipelineConfig(config), out);
    Pipeline p(cfg);
    p.Synth();
    for (const char* features : {"rm+acf", "mfcc"}) {
      p.mutable_config().features = features;
      p.Extract();
    }
    p.mutable_config().features = "rm+acf";
    p.TrainAutoencoders();
    p.TrainLm();
    p.TrainScreener();
    p.Screen();
    for (SystemKind system : {SystemKind::kTandem, SystemKind::kHybrid}) {
      p.mutable_config().system = system;
      if (system == SystemKind::kTandem)
        p.TrainTandem();
      else
        p.TrainHybrid();
      p.Tune();
      p.Decode();
      p.Evaluate();
    }
    return ReadTree(out);
  };
  const auto a = run(dir / "a");
  const auto b = run(dir / "b");
  std::size_t differing = 0;
  std::string first;
  for (const auto& [name, bytes] : a) {
    auto it = b.find(name);
    if (it == b.end() || it->second != bytes) {
      ++differing;
      if (first.empty()) first = name;
    }
  }
  const bool ok = differing == 0 && a.size() == b.size() && !a.empty();
  std::string detail = fmt::format("{} files compared, {} differ", a.size(), differing);
  if (!first.empty()) detail += fmt::format(" (first: {})", first);
  return {ok, detail};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 4) {
    std::fprintf(stderr, "usage: %s <benchmark config> <small config> <scratch dir>\n", argv[0]);
    return 2;
  }
  const fs::path benchmark_config = argv[1], small_config = argv[2], scratch = argv[3];

  std::vector<Outcome> results(11);
  results[1] = Timed(kAcfSeconds, AcfOracle);
  results[2] = Timed(kFilterbankSeconds, Filterbank);
  results[3] = Timed(kGradSeconds, GradCheck);
  results[4] = Timed(kEmSeconds, EmMonotone);
  results[5] = Timed(kViterbiSeconds, ViterbiOracle);
  results[6] = Timed(kMetricSeconds, MetricOracles);
  results[8] = Timed(0.0, Dimensions);
  const Benchmark bench = RunBenchmark(benchmark_config, scratch / "benchmark");
  results[7] = Timed(kNeutralSeconds, [&] { return NeutralLm(bench); });
  results[9] = Timed(-1.0, [&] { return EndToEnd(bench); });
  results[10] = Timed(0.0, [&] { return Determinism(small_config, scratch / "determinism"); });

  const char* names[] = {"",
                         "ACF oracle",
                         "filterbank ERB spacing",
                         "gradient check",
                         "EM and Baum-Welch monotonicity",
                         "Viterbi oracle",
                         "metric oracles",
                         "neutral LM equivalence",
                         "feature dimensions",
                         "synthetic end-to-end benchmark",
                         "determinism"};
  int failed = 0;
  for (int i = 1; i <= 10; ++i) {
    std::printf("criterion %2d %s: %s (%s)\n", i, results[i].pass ? "PASS" : "FAIL", names[i],
                results[i].detail.c_str());
    if (!results[i].pass) ++failed;
  }
  std::printf("%d of 10 criteria passed\n", 10 - failed);
  return failed == 0 ? 0 : 1;
}
