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

#include "sdb/hmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "sdb/error.hpp"
#include "util/log.hpp"

namespace sdb {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double LogAdd(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

double SafeLog(double p) { return p > 0.0 ? std::log(p) : kNegInf; }

// Emission scores for one segment: per frame, per state, per component.
struct SegmentScores {
  Eigen::MatrixXd state;                       // T x N
  std::vector<std::vector<Eigen::VectorXd>> component;  // [t][j]
};

SegmentScores Score(const HmmClassModel& m, const Segment& s, bool with_components) {
  const auto t_len = static_cast<Eigen::Index>(s.length());
  const int n = m.n_states();
  SegmentScores sc;
  sc.state.resize(t_len, n);
  if (with_components)
    sc.component.assign(static_cast<std::size_t>(t_len), std::vector<Eigen::VectorXd>(static_cast<std::size_t>(n)));
  Eigen::VectorXd tmp;
  for (Eigen::Index t = 0; t < t_len; ++t) {
    const auto x = s.features->row(s.begin + static_cast<std::size_t>(t));
    for (int j = 0; j < n; ++j) {
      auto& out = with_components ? sc.component[static_cast<std::size_t>(t)][static_cast<std::size_t>(j)] : tmp;
      sc.state(t, j) = m.states[static_cast<std::size_t>(j)].ComponentLogLikelihoods(x, out);
    }
  }
  return sc;
}

// Log-domain forward pass; returns log P(O) including the exit.
double ForwardPass(const HmmClassModel& m, const Eigen::MatrixXd& b, Eigen::MatrixXd* alpha_out) {
  const Eigen::Index t_len = b.rows();
  const int n = m.n_states();
  Eigen::MatrixXd alpha = Eigen::MatrixXd::Constant(t_len, n, kNegInf);
  alpha(0, 0) = b(0, 0);
  for (Eigen::Index t = 1; t < t_len; ++t)
    for (int j = 0; j < n; ++j) {
      double v = alpha(t - 1, j) + SafeLog(m.self[static_cast<std::size_t>(j)]);
      if (j > 0) v = LogAdd(v, alpha(t - 1, j - 1) + SafeLog(m.next[static_cast<std::size_t>(j - 1)]));
      alpha(t, j) = v + b(t, j);
    }
  const double ll = alpha(t_len - 1, n - 1) + SafeLog(m.next.back());
  if (alpha_out) *alpha_out = std::move(alpha);
  return ll;
}

void CheckModel(const HmmClassModel& m) {
  const auto n = static_cast<std::size_t>(m.n_states());
  if (n == 0 || m.self.size() != n || m.next.size() != n)
    Fail(ErrorCode::kInvalidArgument, "inconsistent HMM transition tables");
}

}  // namespace

int TandemStateCount(EventClass c) {
  switch (c) {
    case EventClass::kSnore:
      return 7;
    case EventClass::kBreath:
      return 5;
    case EventClass::kOther:
    case EventClass::kSilence:
      break;
  }
  return 3;
}

HmmClassModel InitHmm(EventClass label, int n_states, std::span<const Segment> segments,
                      const HmmTrainOptions& opts) {
  if (n_states < 1) Fail(ErrorCode::kInvalidArgument, "HMM needs at least one state");
  std::vector<WeightedFrames> per_state(static_cast<std::size_t>(n_states));
  std::vector<double> occupancy(static_cast<std::size_t>(n_states), 0.0);
  double entries = 0.0;
  for (const auto& s : segments) {
    const std::size_t len = s.length();
    if (len < static_cast<std::size_t>(n_states) || s.weight <= 0.0) continue;
    entries += s.weight;
    for (int j = 0; j < n_states; ++j) {
      const std::size_t a = s.begin + len * static_cast<std::size_t>(j) / static_cast<std::size_t>(n_states);
      const std::size_t b = s.begin + len * static_cast<std::size_t>(j + 1) / static_cast<std::size_t>(n_states);
      for (std::size_t t = a; t < b; ++t) per_state[static_cast<std::size_t>(j)].Add(s.features->row(t), s.weight);
      occupancy[static_cast<std::size_t>(j)] += s.weight * static_cast<double>(b - a);
    }
  }
  if (entries == 0.0)
    Fail(ErrorCode::kInvalidArgument,
         fmt::format("class '{}' has no segment of at least {} frames", ToString(label), n_states));
  HmmClassModel m;
  m.label = label;
  for (int j = 0; j < n_states; ++j) {
    GmmFitOptions go;
    go.components = opts.gmm_components;
    go.variance_floor = opts.variance_floor;
    go.seed = opts.seed * 1000003u + static_cast<std::uint64_t>(j);
    go.require_min_frames = false;
    go.max_iterations = 10;
    m.states.push_back(FitGmm(per_state[static_cast<std::size_t>(j)], go).gmm);
    const double leave = entries / occupancy[static_cast<std::size_t>(j)];
    m.next.push_back(leave);
    m.self.push_back(1.0 - leave);
  }
  return m;
}

double SegmentLogLikelihood(const HmmClassModel& model, std::span<const Segment> segments) {
  CheckModel(model);
  double total = 0.0;
  for (const auto& s : segments) {
    if (s.length() < static_cast<std::size_t>(model.n_states())) continue;
    const auto sc = Score(model, s, false);
    total += s.weight * ForwardPass(model, sc.state, nullptr);
  }
  return total;
}

HmmTrainResult BaumWelch(const HmmClassModel& init, std::span<const Segment> segments,
                         const HmmTrainOptions& opts) {
  CheckModel(init);
  HmmTrainResult result;
  result.model = init;
  HmmClassModel& m = result.model;
  const int n = m.n_states();
  std::vector<const Segment*> usable;
  for (const auto& s : segments) {
    if (s.length() < static_cast<std::size_t>(n)) {
      ++result.skipped_segments;
      continue;
    }
    if (s.weight > 0.0) {
      usable.push_back(&s);
      result.frames += s.weight * static_cast<double>(s.length());
    }
  }
  if (result.skipped_segments > 0)
    log::Warn("class '{}': skipped {} segment(s) shorter than {} frames", ToString(m.label),
              result.skipped_segments, n);
  if (usable.empty())
    Fail(ErrorCode::kInvalidArgument,
         fmt::format("class '{}' has no usable training segment", ToString(m.label)));

  std::vector<GmmAccumulator> acc(static_cast<std::size_t>(n));
  std::vector<double> self_count(static_cast<std::size_t>(n));
  std::vector<double> next_count(static_cast<std::size_t>(n));
  for (int it = 0; it < opts.max_iterations; ++it) {
    for (int j = 0; j < n; ++j) {
      const auto& g = m.states[static_cast<std::size_t>(j)];
      acc[static_cast<std::size_t>(j)].Reset(g.components(), g.dims());
    }
    std::fill(self_count.begin(), self_count.end(), 0.0);
    std::fill(next_count.begin(), next_count.end(), 0.0);
    double total_ll = 0.0;

    for (const Segment* s : usable) {
      const auto sc = Score(m, *s, true);
      const Eigen::MatrixXd& b = sc.state;
      const Eigen::Index t_len = b.rows();
      Eigen::MatrixXd alpha;
      const double ll = ForwardPass(m, b, &alpha);
      if (!std::isfinite(ll))
        Fail(ErrorCode::kNumeric, fmt::format("class '{}': segment has zero likelihood", ToString(m.label)));
      total_ll += s->weight * ll;

      Eigen::MatrixXd beta = Eigen::MatrixXd::Constant(t_len, n, kNegInf);
      beta(t_len - 1, n - 1) = SafeLog(m.next.back());
      for (Eigen::Index t = t_len - 1; t-- > 0;)
        for (int j = 0; j < n; ++j) {
          double v = SafeLog(m.self[static_cast<std::size_t>(j)]) + b(t + 1, j) + beta(t + 1, j);
          if (j + 1 < n)
            v = LogAdd(v, SafeLog(m.next[static_cast<std::size_t>(j)]) + b(t + 1, j + 1) + beta(t + 1, j + 1));
          beta(t, j) = v;
        }

      for (Eigen::Index t = 0; t < t_len; ++t) {
        const auto x = s->features->row(s->begin + static_cast<std::size_t>(t));
        for (int j = 0; j < n; ++j) {
          const double lg = alpha(t, j) + beta(t, j) - ll;
          if (lg == kNegInf) continue;
          const double gamma = std::exp(lg);
          const auto& comp = sc.component[static_cast<std::size_t>(t)][static_cast<std::size_t>(j)];
          const Eigen::VectorXd post = (comp.array() - b(t, j)).exp().matrix() * gamma;
          acc[static_cast<std::size_t>(j)].Add(x, post, s->weight);
          if (t + 1 < t_len) {
            self_count[static_cast<std::size_t>(j)] += s->weight * std::exp(alpha(t, j) + SafeLog(m.self[static_cast<std::size_t>(j)]) +
                                                                            b(t + 1, j) + beta(t + 1, j) - ll);
            if (j + 1 < n)
              next_count[static_cast<std::size_t>(j)] +=
                  s->weight * std::exp(alpha(t, j) + SafeLog(m.next[static_cast<std::size_t>(j)]) + b(t + 1, j + 1) +
                                       beta(t + 1, j + 1) - ll);
          }
        }
      }
      next_count[static_cast<std::size_t>(n - 1)] += s->weight;  // exit
    }
    result.log_likelihood.push_back(total_ll);

    for (int j = 0; j < n; ++j) {
      const auto ju = static_cast<std::size_t>(j);
      acc[ju].Update(m.states[ju], opts.variance_floor);
      const double out = self_count[ju] + next_count[ju];
      if (out > 0.0) {
        m.self[ju] = self_count[ju] / out;
        m.next[ju] = next_count[ju] / out;
      }
    }
    const auto& h = result.log_likelihood;
    if (h.size() >= 2 && (h.back() - h[h.size() - 2]) / result.frames < opts.tolerance) break;
  }
  return result;
}

HmmTrainResult TrainClassHmm(EventClass label, std::span<const Segment> segments,
                             const HmmTrainOptions& opts) {
  const int n = TandemStateCount(label);
  const HmmClassModel init = InitHmm(label, n, segments, opts);
  return BaumWelch(init, segments, opts);
}

std::array<HmmTrainResult, kNumClasses> TrainTandem(
    const std::array<std::vector<Segment>, kNumClasses>& per_class, const HmmTrainOptions& opts) {
  std::array<HmmTrainResult, kNumClasses> out;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    if (per_class[c].empty())
      Fail(ErrorCode::kInvalidArgument,
           fmt::format("no training data for class '{}'", ToString(ClassAt(c))));
    HmmTrainOptions o = opts;
    o.seed = opts.seed + c;
    out[c] = TrainClassHmm(ClassAt(c), per_class[c], o);
  }
  return out;
}

}  // namespace sdb
