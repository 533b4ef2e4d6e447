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

#ifndef ETLQG_SIM_HPP_
#define ETLQG_SIM_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "etlqg/riccati.hpp"
#include "etlqg/scheduler.hpp"

namespace etlqg {

enum class Policy { Mpc, OneShot };

std::string policy_name(Policy policy);

/// How the action at one step was resolved: a certificate short-circuit
/// (Skip/Attempt) or the exact window solve (Milp). One-shot runs attribute
/// every step to the single solve performed at time 0.
enum class StepResolution : std::uint8_t { Skip = 0, Attempt = 1, Milp = 2 };

struct SimOptions {
  // When false the MPC policy solves the window program at every step instead
  // of short-circuiting through the certificates.
  bool use_certificates = true;
};

/// One simulated closed-loop trajectory.
struct RunRecord {
  std::uint64_t seed = 0;
  Policy policy = Policy::Mpc;
  std::vector<Eigen::VectorXd> x;          // T+1 states
  std::vector<Eigen::VectorXd> u;          // T inputs
  std::vector<std::uint8_t> theta;         // T attempts
  std::vector<std::uint8_t> delta;         // T deliveries, 0 when no attempt
  std::vector<Eigen::VectorXd> e_s;        // T scheduler-side errors
  std::vector<Eigen::VectorXd> err;        // T controller errors x_k - xhat_k
  std::vector<StepResolution> resolution;  // T
  std::vector<double> stage_cost;          // T, |x|^2_Q + |u|^2_R

  double lqg_cost = 0.0;   // sum stage_cost + terminal |x_T|^2_{Q_T}
  double comm_cost = 0.0;  // lambda * attempts, or the split-penalty ledger
  double total = 0.0;
  int successes = 0;
  int attempts = 0;
  int skip_count = 0;
  int attempt_count = 0;
  int milp_count = 0;
};

/// Executes the receding-horizon loop for one seed.
///
/// Randomness: x0 ~ N(x0_mean, Sigma_0) from the initial-state stream; w_k ~
/// N(0, Sigma_w) from the process-noise stream; the channel stream draws one
/// uniform per step, so the Bernoulli(p) success process is a fixed
/// realization shared by every policy on the same seed. delta_k is recorded
/// as 0 when theta_k = 0.
///
/// MPC: at each k the scheduler forms e_k^s = x_k - A xhat_{k-1} - B u_{k-1}
/// (e_0^s = x_0 - x0_mean), applies the one-step certificates, and on
/// Ambiguous solves the window program exactly, applying the first action.
/// OneShot: solves once at k = 0 from e_0^s and follows that schedule
/// open-loop. The scheduler observes ACK/NACK, so its estimate tracks the
/// controller's exactly; on delivery the estimate resets to the true state.
RunRecord simulate_run(const Problem& prob, const RiccatiSolution& sol, Policy policy,
                       std::uint64_t seed, const SimOptions& options = {});

/// Seed-indexed aggregates. std columns are population standard deviations
/// (n_seeds = 1 gives 0 rather than NaN).
struct AggregateStats {
  int n_seeds = 0;
  double mean_successes = 0.0, std_successes = 0.0;
  double mean_attempts = 0.0, std_attempts = 0.0;
  double mean_comm = 0.0, std_comm = 0.0;
  double mean_lqg = 0.0, std_lqg = 0.0;
  double mean_total = 0.0, std_total = 0.0;
  std::vector<double> attempt_frequency;  // length T: fraction of seeds with theta_k = 1
};

AggregateStats aggregate(const std::vector<RunRecord>& runs);

/// Runs seeds seed0 .. seed0 + n_seeds - 1. Runs may execute on `jobs`
/// worker threads; the reduction always happens in seed order, so the
/// aggregate is identical for any job count.
AggregateStats monte_carlo(const Problem& prob, const RiccatiSolution& sol, Policy policy,
                           int n_seeds, std::uint64_t seed0, int jobs = 1);

/// As monte_carlo but also returns the per-seed records (seed order).
std::vector<RunRecord> monte_carlo_runs(const Problem& prob, const RiccatiSolution& sol,
                                        Policy policy, int n_seeds, std::uint64_t seed0,
                                        int jobs = 1);

struct SweepRow {
  Policy policy = Policy::Mpc;
  double p = 0.0;
  AggregateStats stats;
};

/// Monte Carlo for both policies at every p in the grid (paired seeds).
/// Split penalties are re-collapsed per grid point.
std::vector<SweepRow> sweep_p(const Problem& prob, const std::vector<double>& p_grid,
                              int n_seeds, std::uint64_t seed0, int jobs = 1);

}  // namespace etlqg

#endif  // ETLQG_SIM_HPP_
