// Copyright 2026 The etlqg Authors
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

#ifndef ETLQG_SCHEDULER_HPP_
#define ETLQG_SCHEDULER_HPP_

#include <cstdint>
#include <optional>

#include <Eigen/Core>

#include "etlqg/covariance.hpp"

namespace etlqg {

enum class Decision { Attempt, Skip, Ambiguous };

/// Result of the one-step send/skip test on the scheduler-side error:
///   attempt_stat = p e' Gamma_k e,  skip_stat = p e' W_k e.
/// attempt_stat <= skip_stat always (W_k - Gamma_k is PSD).
struct CertificateOutcome {
  Decision decision = Decision::Ambiguous;
  double attempt_stat = 0.0;
  double skip_stat = 0.0;
  double lambda = 0.0;
};

/// Attempt if p e'Gamma e >= lambda; else Skip if p e'W e <= lambda; else
/// Ambiguous. Boundary ties resolve to the certified action (weak optimality).
CertificateOutcome certify(const Eigen::VectorXd& e_s, const Eigen::MatrixXd& Gamma_k,
                           const Eigen::MatrixXd& W_k, double p, double lambda);

enum class Proof { Optimal, Enumerated };

struct SolveResult {
  Schedule schedule;
  double cost = 0.0;
  std::uint64_t nodes_explored = 0;
  Proof proof = Proof::Optimal;
};

/// Global minimum of schedule_cost over all 2^H schedules. Ties break toward
/// fewer attempts, then the lexicographically smallest theta (theta_k most
/// significant). Refuses H > 22.
SolveResult solve_enumerate(const GramianTable& table, double p, int H);

/// Exact depth-first branch-and-bound over theta in chronological order,
/// theta = 1 branch first. The lower bound at a node fixes the prefix and
/// sets every remaining slot to 1 (each covariance term is non-increasing in
/// every theta); the penalty term counts prefix attempts only. The incumbent
/// starts from incumbent_hint, a certificate-driven greedy rollout and the
/// trivial all-zeros/all-ones schedules, whichever is cheapest.
SolveResult solve_bnb(const GramianTable& table, double p, int H,
                      const std::optional<Schedule>& incumbent_hint = std::nullopt);

/// Performance envelope of the lossy optimum relative to the lossless one.
/// lower <= ratio <= upper, lower >= 1; C_max is the largest interval attempt
/// count of the p-optimal schedule.
struct RatioBounds {
  double lower = 1.0;
  double upper = 1.0;
  double ratio = 1.0;
  int C_max = 0;
};

/// theta_star_1 must minimize the p = 1 cost and theta_star_p the p cost over
/// the same window. If the lossless optimum is exactly zero the ratio is
/// reported as 1.
RatioBounds ratio_bounds(const Schedule& theta_star_1, const Schedule& theta_star_p,
                         const GramianTable& table, double p);

}  // namespace etlqg

#endif  // ETLQG_SCHEDULER_HPP_
