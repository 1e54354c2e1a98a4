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

#include "sdb/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "sdb/error.hpp"

namespace sdb {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kPosteriorFloor = 1e-10;

double SafeLog(double p) { return p > 0.0 ? std::log(p) : kNegInf; }

double LmInitial(const DecodeGraph& g, const DecodeConfig& cfg, int c) {
  if (!cfg.use_lm || g.log_initial.size() == 0) return 0.0;
  return cfg.lm_scale * g.log_initial(c);
}

double LmFinal(const DecodeGraph& g, const DecodeConfig& cfg, int c) {
  if (!cfg.use_lm || g.log_final.size() == 0) return 0.0;
  return cfg.lm_scale * g.log_final(c);
}

double Boundary(const DecodeGraph& g, const DecodeConfig& cfg, int from, int to) {
  double s = cfg.insertion_penalty;
  if (cfg.use_lm && g.log_transition.size() != 0) s += cfg.lm_scale * g.log_transition(from, to);
  return s;
}

void CheckGraph(const DecodeGraph& g, const DecodeConfig& cfg) {
  const auto n = static_cast<Eigen::Index>(g.classes.size());
  if (n == 0) Fail(ErrorCode::kInvalidArgument, "decode graph has no classes");
  for (const auto& c : g.classes)
    if (c.n_states() == 0 || c.log_next.size() != c.log_self.size())
      Fail(ErrorCode::kInvalidArgument, "malformed class chain");
  if (g.log_transition.size() != 0 &&
      (g.log_transition.rows() != n || g.log_transition.cols() != n || g.log_initial.size() != n ||
       g.log_final.size() != n))
    Fail(ErrorCode::kInvalidArgument, "LM tables do not match the class count");
  if (!std::isfinite(cfg.lm_scale)) Fail(ErrorCode::kInvalidArgument, "lm_scale must be finite");
  if (std::isnan(cfg.insertion_penalty)) Fail(ErrorCode::kInvalidArgument, "insertion penalty is NaN");
}

}  // namespace

std::string_view ToString(SystemKind s) { return s == SystemKind::kTandem ? "tandem" : "hybrid"; }

int DecodeGraph::total_states() const {
  int n = 0;
  for (const auto& c : classes) n += c.n_states();
  return n;
}

int DecodeGraph::first_state(int c) const {
  int n = 0;
  for (int i = 0; i < c; ++i) n += classes[static_cast<std::size_t>(i)].n_states();
  return n;
}

int DecodeGraph::last_state(int c) const {
  return first_state(c) + classes[static_cast<std::size_t>(c)].n_states() - 1;
}

int DecodeGraph::class_of(int state) const {
  for (int c = 0; c < static_cast<int>(classes.size()); ++c) {
    state -= classes[static_cast<std::size_t>(c)].n_states();
    if (state < 0) return c;
  }
  Fail(ErrorCode::kInvalidArgument, "state index out of range");
}

DecodeResult Viterbi(const Eigen::MatrixXd& emissions, const DecodeGraph& graph,
                     const DecodeConfig& cfg) {
  CheckGraph(graph, cfg);
  const Eigen::Index t_len = emissions.rows();
  const int n_states = graph.total_states();
  if (t_len == 0) Fail(ErrorCode::kInvalidArgument, "empty observation sequence");
  if (emissions.cols() != n_states)
    Fail(ErrorCode::kInvalidArgument,
         fmt::format("emissions have {} columns, graph has {} states", emissions.cols(), n_states));
  for (Eigen::Index i = 0; i < emissions.size(); ++i)
    if (std::isnan(emissions.data()[i]) || emissions.data()[i] == std::numeric_limits<double>::infinity())
      Fail(ErrorCode::kNumeric, "emission scores must be finite or -inf");

  const int n_classes = static_cast<int>(graph.classes.size());
  std::vector<int> cls(static_cast<std::size_t>(n_states)), pos(static_cast<std::size_t>(n_states));
  std::vector<double> log_self(static_cast<std::size_t>(n_states)), log_next(static_cast<std::size_t>(n_states));
  std::vector<int> last(static_cast<std::size_t>(n_classes));
  for (int c = 0, s = 0; c < n_classes; ++c) {
    const auto& chain = graph.classes[static_cast<std::size_t>(c)];
    for (int j = 0; j < chain.n_states(); ++j, ++s) {
      cls[static_cast<std::size_t>(s)] = c;
      pos[static_cast<std::size_t>(s)] = j;
      log_self[static_cast<std::size_t>(s)] = chain.log_self[static_cast<std::size_t>(j)];
      log_next[static_cast<std::size_t>(s)] = chain.log_next[static_cast<std::size_t>(j)];
    }
    last[static_cast<std::size_t>(c)] = graph.last_state(c);
  }
  Eigen::MatrixXd boundary(n_classes, n_classes);
  for (int a = 0; a < n_classes; ++a)
    for (int b = 0; b < n_classes; ++b) boundary(a, b) = Boundary(graph, cfg, a, b);

  std::vector<double> prev(static_cast<std::size_t>(n_states), kNegInf), cur(static_cast<std::size_t>(n_states));
  std::vector<int> back(static_cast<std::size_t>(t_len) * static_cast<std::size_t>(n_states), -1);
  for (int c = 0; c < n_classes; ++c) {
    const int s = graph.first_state(c);
    prev[static_cast<std::size_t>(s)] = LmInitial(graph, cfg, c) + emissions(0, s);
  }
  std::vector<double> exit_score(static_cast<std::size_t>(n_classes));
  for (Eigen::Index t = 1; t < t_len; ++t) {
    for (int c = 0; c < n_classes; ++c) {
      const int l = last[static_cast<std::size_t>(c)];
      exit_score[static_cast<std::size_t>(c)] = prev[static_cast<std::size_t>(l)] + log_next[static_cast<std::size_t>(l)];
    }
    int* bp = back.data() + static_cast<std::size_t>(t) * static_cast<std::size_t>(n_states);
    for (int s = 0; s < n_states; ++s) {
      const auto su = static_cast<std::size_t>(s);
      double best = prev[su] + log_self[su];
      int arg = s;
      if (pos[su] > 0) {
        const double v = prev[su - 1] + log_next[su - 1];
        if (v > best) {
          best = v;
          arg = s - 1;
        }
      } else {
        const int c = cls[su];
        for (int from = 0; from < n_classes; ++from) {
          if (from == c) continue;
          const double v = exit_score[static_cast<std::size_t>(from)] + boundary(from, c);
          if (v > best) {
            best = v;
            arg = last[static_cast<std::size_t>(from)];
          }
        }
      }
      cur[su] = best + emissions(t, s);
      bp[s] = best == kNegInf ? -1 : arg;
    }
    std::swap(prev, cur);
  }

  double best = kNegInf;
  int best_state = -1;
  for (int c = 0; c < n_classes; ++c) {
    const int l = last[static_cast<std::size_t>(c)];
    const double v = prev[static_cast<std::size_t>(l)] + log_next[static_cast<std::size_t>(l)] + LmFinal(graph, cfg, c);
    if (v > best) {
      best = v;
      best_state = l;
    }
  }
  if (best_state < 0 || !std::isfinite(best))
    Fail(ErrorCode::kNumeric, "no finite-scoring path through the decode graph");

  DecodeResult r;
  r.score = best;
  r.states.resize(static_cast<std::size_t>(t_len));
  int s = best_state;
  for (Eigen::Index t = t_len - 1; t >= 0; --t) {
    r.states[static_cast<std::size_t>(t)] = s;
    if (t > 0) s = back[static_cast<std::size_t>(t) * static_cast<std::size_t>(n_states) + static_cast<std::size_t>(s)];
  }
  r.labels.reserve(r.states.size());
  for (int st : r.states) r.labels.push_back(cls[static_cast<std::size_t>(st)]);
  return r;
}

double PathScore(const Eigen::MatrixXd& emissions, const DecodeGraph& graph,
                 const DecodeConfig& cfg, std::span<const int> states) {
  CheckGraph(graph, cfg);
  if (states.empty() || static_cast<Eigen::Index>(states.size()) != emissions.rows()) return kNegInf;
  const auto chain_pos = [&](int s) { return s - graph.first_state(graph.class_of(s)); };
  int s0 = states[0];
  int c0 = graph.class_of(s0);
  if (chain_pos(s0) != 0) return kNegInf;
  double score = LmInitial(graph, cfg, c0) + emissions(0, s0);
  for (std::size_t t = 1; t < states.size(); ++t) {
    const int a = states[t - 1], b = states[t];
    const int ca = graph.class_of(a), cb = graph.class_of(b);
    const auto& chain = graph.classes[static_cast<std::size_t>(ca)];
    const int pa = chain_pos(a), pb = chain_pos(b);
    if (ca == cb && pa == pb)
      score += chain.log_self[static_cast<std::size_t>(pa)];
    else if (ca == cb && pb == pa + 1)
      score += chain.log_next[static_cast<std::size_t>(pa)];
    else if (ca != cb && pa == chain.n_states() - 1 && pb == 0)
      score += chain.log_next[static_cast<std::size_t>(pa)] + Boundary(graph, cfg, ca, cb);
    else
      return kNegInf;
    score += emissions(static_cast<Eigen::Index>(t), b);
  }
  const int sl = states.back();
  const int cl = graph.class_of(sl);
  const auto& chain = graph.classes[static_cast<std::size_t>(cl)];
  if (chain_pos(sl) != chain.n_states() - 1) return kNegInf;
  return score + chain.log_next.back() + LmFinal(graph, cfg, cl);
}

ClassPriors EstimatePriors(std::span<const FrameLabels> labels) {
  std::array<double, kNumClasses> frames{}, events{};
  for (const auto& fl : labels) {
    for (EventClass c : fl.labels) frames[Index(c)] += 1.0;
    for (const auto& e : FramesToEvents(fl)) events[Index(e.label)] += 1.0;
  }
  double total = 0.0;
  for (double f : frames) total += f;
  if (total == 0.0) Fail(ErrorCode::kInvalidArgument, "no labelled frames for class priors");
  ClassPriors p;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    // add-one keeps every prior positive
    p.prior[c] = (frames[c] + 1.0) / (total + static_cast<double>(kNumClasses));
    p.mean_duration[c] = events[c] > 0.0 ? std::max(frames[c] / events[c], 1.0) : 1.0;
  }
  return p;
}

namespace {

void AttachLm(DecodeGraph& g, const BigramLm& lm) {
  g.log_transition = lm.transition.array().log().matrix();
  g.log_initial = lm.initial.array().log().matrix();
  g.log_final = lm.final.array().log().matrix();
}

}  // namespace

DecodeGraph TandemGraph(const std::array<HmmClassModel, kNumClasses>& models, const BigramLm& lm) {
  DecodeGraph g;
  for (const auto& m : models) {
    ClassChain chain;
    for (int j = 0; j < m.n_states(); ++j) {
      chain.log_self.push_back(SafeLog(m.self[static_cast<std::size_t>(j)]));
      chain.log_next.push_back(SafeLog(m.next[static_cast<std::size_t>(j)]));
    }
    g.classes.push_back(std::move(chain));
  }
  AttachLm(g, lm);
  return g;
}

DecodeGraph HybridGraph(const ClassPriors& priors, const BigramLm& lm) {
  DecodeGraph g;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    const double d = std::max(priors.mean_duration[c], 1.0);
    ClassChain chain;
    chain.log_self.push_back(d > 1.0 ? std::log(1.0 - 1.0 / d) : kNegInf);
    chain.log_next.push_back(std::log(1.0 / d));
    g.classes.push_back(std::move(chain));
  }
  AttachLm(g, lm);
  return g;
}

Eigen::MatrixXd TandemEmissions(const std::array<HmmClassModel, kNumClasses>& models,
                                const FeatureMatrix& features) {
  int n_states = 0;
  for (const auto& m : models) n_states += m.n_states();
  Eigen::MatrixXd e(static_cast<Eigen::Index>(features.rows()), n_states);
  Eigen::VectorXd tmp;
  for (std::size_t t = 0; t < features.rows(); ++t) {
    int s = 0;
    for (const auto& m : models)
      for (const auto& g : m.states) e(static_cast<Eigen::Index>(t), s++) = g.ComponentLogLikelihoods(features.row(t), tmp);
  }
  return e;
}

Eigen::MatrixXd HybridEmissions(const FeatureMatrix& posteriors, const ClassPriors& priors) {
  if (posteriors.cols() != kNumClasses)
    Fail(ErrorCode::kInvalidArgument, "hybrid emissions need T x 4 posteriors");
  Eigen::MatrixXd e(static_cast<Eigen::Index>(posteriors.rows()), static_cast<Eigen::Index>(kNumClasses));
  for (std::size_t t = 0; t < posteriors.rows(); ++t)
    for (std::size_t c = 0; c < kNumClasses; ++c)
      e(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(c)) =
          std::log(std::max(posteriors(t, c), kPosteriorFloor)) - std::log(priors.prior[c]);
  return e;
}

EventSequence ToEvents(const DecodeResult& r) {
  FrameLabels fl;
  fl.labels.reserve(r.labels.size());
  for (int c : r.labels) fl.labels.push_back(ClassAt(static_cast<std::size_t>(c)));
  return FramesToEvents(fl);
}

}  // namespace sdb
