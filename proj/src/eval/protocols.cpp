// Copyright 2026 The skillmix Authors
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

#include "skillmix/eval/protocols.hpp"

#include <cmath>

namespace skillmix::eval {

void Trajectory::validate() const {
  require(frames.size() >= 3, "invalid_trajectory", "trajectory needs at least two steps");
  require(!commanded.empty() && commanded.front().start_step == 0, "invalid_trajectory",
          "commanded schedule must start at step 0");
  for (size_t i = 1; i < commanded.size(); ++i) {
    require(commanded[i].start_step > commanded[i - 1].start_step, "invalid_trajectory",
            "commanded segments must be ordered and non-overlapping");
  }
}

Mat Trajectory::step_frames() const {
  const int L = length();
  Mat out(frames.front().size(), L);
  for (int t = 0; t < L; ++t) out.col(t) = frames[static_cast<size_t>(t + 1)];
  return out;
}

std::optional<Trajectory> rollout_trajectory(const policy::ActorCritic& ac, const sim::SimParams& params,
                                             const std::vector<Segment>& schedule, int steps, Rng& rng,
                                             bool deterministic) {
  require(!schedule.empty() && schedule.front().start_step == 0, "invalid_argument",
          "schedule must start at step 0");
  Trajectory traj;
  traj.commanded = schedule;
  traj.frames.reserve(static_cast<size_t>(steps + 1));
  sim::AgentState state = sim::AgentState::zero(params.joints);
  traj.frames.push_back(sim::observe_disc(state));
  size_t seg = 0;
  Vec z = ac.encode(schedule[0].skill_id);
  for (int t = 0; t < steps; ++t) {
    if (seg + 1 < schedule.size() && schedule[seg + 1].start_step <= t) {
      ++seg;
      z = ac.encode(schedule[seg].skill_id);
    }
    const Vec mean = ac.policy.forward(sim::observe_policy(state, z));
    const Vec action = deterministic ? mean : nn::gaussian_sample(mean, ac.log_std, rng).action;
    try {
      state = sim::step(params, state, action);
    } catch (const sim::SimulationDiverged&) {
      return std::nullopt;
    }
    traj.frames.push_back(sim::observe_disc(state));
  }
  return traj;
}

namespace {

// Draws schedules until a rollout survives, each attempt from its own stream.
template <typename MakeSchedule>
Trajectory sample_trajectory(const policy::ActorCritic& ac, const sim::SimParams& params, int steps,
                             const ProtocolSettings& s, uint64_t seed, MakeSchedule make_schedule, int& discarded) {
  for (int attempt = 0; attempt < s.max_attempts; ++attempt) {
    Rng rng(derive_seed(seed, static_cast<uint64_t>(attempt)));
    const std::vector<Segment> schedule = make_schedule(rng);
    if (auto traj = rollout_trajectory(ac, params, schedule, steps, rng, s.deterministic)) return std::move(*traj);
    ++discarded;
  }
  throw Error("evaluation_diverged", "rollout diverged on every attempt");
}

MotionMatcher make_matcher(const sim::ReferenceDataset& dataset, const ProtocolSettings& s) {
  return s.standardize ? MotionMatcher(dataset, standardization(dataset)) : MotionMatcher(dataset);
}

void check_compatible(const policy::ActorCritic& ac, const sim::ReferenceDataset& dataset) {
  require(ac.num_skills == dataset.num_skills(), "incompatible_checkpoint",
          "policy skill count does not match the dataset");
}

}  // namespace

double coverage_entropy(const Vec& p) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) h -= p[i] * std::log(p[i]);
  }
  return h;
}

CoverageReport coverage_protocol(const policy::ActorCritic& ac, const sim::SimParams& params,
                                 const sim::ReferenceDataset& dataset, const ProtocolSettings& s) {
  check_compatible(ac, dataset);
  require(s.trajectories > 0 && s.length >= 2, "invalid_argument", "coverage needs trajectories of length >= 2");
  const MotionMatcher matcher = make_matcher(dataset, s);
  const int K = dataset.num_skills();
  CoverageReport report;
  report.skills = dataset.skills();
  report.seed = s.seed;
  report.trajectories = s.trajectories;
  Vec counts = Vec::Zero(K);
  for (int i = 0; i < s.trajectories; ++i) {
    const Trajectory traj = sample_trajectory(
        ac, params, s.length, s, derive_seed(s.seed, static_cast<uint64_t>(i)),
        [K](Rng& rng) { return std::vector<Segment>{{0, uniform_index(rng, K)}}; }, report.discarded);
    counts[classify_frames(traj.frames, matcher).skill] += 1.0;
  }
  report.frequencies = counts / counts.sum();
  return report;
}

std::vector<int> TransitionMatrix::empty_rows() const {
  std::vector<int> out;
  for (size_t k = 0; k < row_counts.size(); ++k) {
    if (row_counts[k] == 0) out.push_back(static_cast<int>(k));
  }
  return out;
}

TransitionMatrix transition_protocol(const policy::ActorCritic& ac, const sim::SimParams& params,
                                     const sim::ReferenceDataset& dataset, const ProtocolSettings& s) {
  check_compatible(ac, dataset);
  require(s.trajectories > 0 && s.length >= 2, "invalid_argument", "transitions need halves of length >= 2");
  const MotionMatcher matcher = make_matcher(dataset, s);
  const int K = dataset.num_skills();
  const int half = s.length;
  TransitionMatrix out;
  out.skills = dataset.skills();
  out.trajectories = s.trajectories;
  Mat counts = Mat::Zero(K, K);
  for (int i = 0; i < s.trajectories; ++i) {
    const Trajectory traj = sample_trajectory(
        ac, params, 2 * half, s, derive_seed(s.seed, static_cast<uint64_t>(i)),
        [K, half](Rng& rng) {
          const int first = uniform_index(rng, K);
          const int second = uniform_index(rng, K);
          return std::vector<Segment>{{0, first}, {half, second}};
        },
        out.discarded);
    const int src = classify_frames(traj.frames, matcher, 0, half).skill;
    const int dst = classify_frames(traj.frames, matcher, half, 2 * half).skill;
    counts(src, dst) += 1.0;
  }
  out.probabilities = Mat::Zero(K, K);
  out.row_counts.assign(static_cast<size_t>(K), 0);
  for (int r = 0; r < K; ++r) {
    const double n = counts.row(r).sum();
    out.row_counts[static_cast<size_t>(r)] = static_cast<int>(n);
    if (n > 0.0) out.probabilities.row(r) = counts.row(r) / n;
  }
  return out;
}

namespace {

void check_apd_input(const std::vector<Mat>& trajs) {
  require(trajs.size() >= 2, "invalid_argument", "APD needs at least two trajectories");
  for (const Mat& m : trajs) {
    require(m.rows() == trajs[0].rows() && m.cols() == trajs[0].cols(), "length_mismatch",
            "APD trajectories must share feature size and length");
  }
}

}  // namespace

double apd(const std::vector<Mat>& trajs) {
  check_apd_input(trajs);
  const size_t N = trajs.size();
  double total = 0.0;
  for (size_t i = 0; i < N; ++i) {
    for (size_t j = 0; j < N; ++j) {
      if (i == j) continue;
      double sq = 0.0;
      for (Eigen::Index t = 0; t < trajs[i].cols(); ++t) sq += (trajs[i].col(t) - trajs[j].col(t)).squaredNorm();
      total += std::sqrt(sq);
    }
  }
  return total / static_cast<double>(N * (N - 1));
}

double apd_vectorized(const std::vector<Mat>& trajs) {
  check_apd_input(trajs);
  const Eigen::Index N = static_cast<Eigen::Index>(trajs.size());
  const Eigen::Index D = trajs[0].size();
  Mat flat(D, N);
  for (Eigen::Index i = 0; i < N; ++i) flat.col(i) = trajs[static_cast<size_t>(i)].reshaped();
  double total = 0.0;
  for (Eigen::Index i = 0; i + 1 < N; ++i) {
    const auto rest = flat.rightCols(N - i - 1);
    total += 2.0 * (rest.colwise() - flat.col(i)).colwise().norm().sum();
  }
  return total / static_cast<double>(N * (N - 1));
}

ApdReport apd_protocol(const policy::ActorCritic& ac, const sim::SimParams& params, const ProtocolSettings& s) {
  require(s.trajectories >= 2 && s.length >= 1 && s.repeats >= 1, "invalid_argument",
          "APD protocol needs >= 2 trajectories and >= 1 repeat");
  const int K = ac.num_skills;
  ApdReport report;
  report.trajectories = s.trajectories;
  report.length = s.length;
  for (int r = 0; r < s.repeats; ++r) {
    const uint64_t repeat_seed = derive_seed(s.seed, s.freeze_seed ? 0 : static_cast<uint64_t>(r));
    std::vector<Mat> trajs;
    trajs.reserve(static_cast<size_t>(s.trajectories));
    for (int i = 0; i < s.trajectories; ++i) {
      const Trajectory traj = sample_trajectory(
          ac, params, s.length, s, derive_seed(repeat_seed, static_cast<uint64_t>(i)),
          [K](Rng& rng) { return std::vector<Segment>{{0, uniform_index(rng, K)}}; }, report.discarded);
      trajs.push_back(traj.step_frames());
    }
    report.per_repeat.push_back(apd_vectorized(trajs));
  }
  double sum = 0.0;
  for (double v : report.per_repeat) sum += v;
  report.mean = sum / static_cast<double>(report.per_repeat.size());
  return report;
}

}  // namespace skillmix::eval
