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

#include "etlqg/sim.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "etlqg/rng.hpp"

namespace etlqg {
namespace {

double quad_form(const Eigen::VectorXd& v, const Eigen::MatrixXd& M) {
  return v.dot(M * v);
}

}  // namespace

std::string policy_name(Policy policy) {
  return policy == Policy::Mpc ? "mpc" : "oneshot";
}

RunRecord simulate_run(const Problem& prob, const RiccatiSolution& sol, Policy policy,
                       std::uint64_t seed, const SimOptions& options) {
  const int T = prob.T;
  const int n = prob.state_dim();

  RunRecord run;
  run.seed = seed;
  run.policy = policy;
  run.x.resize(T + 1);
  run.u.resize(T);
  run.theta.assign(T, 0);
  run.delta.assign(T, 0);
  run.e_s.resize(T);
  run.err.resize(T);
  run.resolution.assign(T, StepResolution::Milp);
  run.stage_cost.assign(T, 0.0);

  // Draw order is part of the record's contract: the full initial-state,
  // noise and channel realizations are functions of the seed alone, so runs
  // with different policies or penalty splits stay paired.
  RngStream x0_stream(seed, kStreamInitialState);
  RngStream noise_stream(seed, kStreamProcessNoise);
  RngStream channel_stream(seed, kStreamChannel);

  const Eigen::MatrixXd sqrt_sigma0 = covariance_sqrt(prob.Sigma_0);
  const Eigen::MatrixXd sqrt_sigmaw = covariance_sqrt(prob.Sigma_w);

  run.x[0] = prob.x0_mean + sqrt_sigma0 * x0_stream.gaussian_vec(n);
  std::vector<Eigen::VectorXd> w(T);
  for (int k = 0; k < T; ++k) w[k] = sqrt_sigmaw * noise_stream.gaussian_vec(n);
  std::vector<std::uint8_t> channel(T);
  for (int k = 0; k < T; ++k) channel[k] = channel_stream.uniform01() < prob.p ? 1 : 0;

  // One-shot: plan the whole horizon from e_0^s and never re-solve.
  Schedule oneshot_plan;
  std::optional<Schedule> warm_start;
  int warm_start_k = -1;

  Eigen::VectorXd xhat_prev;  // estimate after step k-1
  Eigen::VectorXd u_prev;

  for (int k = 0; k < T; ++k) {
    const Eigen::VectorXd pred =
        (k == 0) ? prob.x0_mean : Eigen::VectorXd(prob.A * xhat_prev + prob.B * u_prev);
    run.e_s[k] = run.x[k] - pred;

    std::uint8_t theta_k = 0;
    if (policy == Policy::OneShot) {
      if (k == 0) {
        const GramianTable table = build_tables(prob, sol, 0, run.e_s[0]);
        oneshot_plan = solve_bnb(table, prob.p, T).schedule;
      }
      theta_k = oneshot_plan.theta[static_cast<std::size_t>(k)];
      run.resolution[k] = StepResolution::Milp;
      ++run.milp_count;
    } else {
      Decision decision = Decision::Ambiguous;
      if (options.use_certificates) {
        decision = certify(run.e_s[k], sol.Gamma[k], sol.W[k], prob.p, prob.lambda).decision;
      }
      if (decision == Decision::Attempt) {
        theta_k = 1;
        run.resolution[k] = StepResolution::Attempt;
        ++run.attempt_count;
      } else if (decision == Decision::Skip) {
        theta_k = 0;
        run.resolution[k] = StepResolution::Skip;
        ++run.skip_count;
      } else {
        const GramianTable table = build_tables(prob, sol, k, run.e_s[k]);
        // Warm start: the unapplied tail of the last window solve is a valid
        // schedule for the current window.
        std::optional<Schedule> hint;
        if (warm_start && warm_start_k >= 0 && warm_start_k < k) {
          const int drop = k - warm_start_k;
          if (drop < warm_start->horizon()) {
            hint = Schedule(std::vector<std::uint8_t>(warm_start->theta.begin() + drop,
                                                      warm_start->theta.end()));
          }
        }
        const SolveResult res = solve_bnb(table, prob.p, T - k, hint);
        warm_start = res.schedule;
        warm_start_k = k;
        theta_k = res.schedule.theta[0];
        run.resolution[k] = StepResolution::Milp;
        ++run.milp_count;
      }
    }

    run.theta[k] = theta_k;
    run.delta[k] = theta_k ? channel[k] : 0;

    const Eigen::VectorXd xhat = run.delta[k] ? run.x[k] : pred;
    run.err[k] = run.x[k] - xhat;
    run.u[k] = -sol.L[k] * xhat;
    run.x[k + 1] = prob.A * run.x[k] + prob.B * run.u[k] + w[k];

    run.stage_cost[k] = quad_form(run.x[k], prob.Q) + quad_form(run.u[k], prob.R);
    xhat_prev = xhat;
    u_prev = run.u[k];
  }

  for (int k = 0; k < T; ++k) {
    run.lqg_cost += run.stage_cost[k];
    run.attempts += run.theta[k];
    run.successes += run.theta[k] & run.delta[k];
  }
  run.lqg_cost += quad_form(run.x[T], prob.Q_T);
  if (prob.penalty_split) {
    run.comm_cost = prob.penalty_split->fail * (run.attempts - run.successes) +
                    prob.penalty_split->success * run.successes;
  } else {
    run.comm_cost = prob.lambda * run.attempts;
  }
  run.total = run.lqg_cost + run.comm_cost;
  return run;
}

AggregateStats aggregate(const std::vector<RunRecord>& runs) {
  AggregateStats stats;
  stats.n_seeds = static_cast<int>(runs.size());
  if (runs.empty()) return stats;
  const int T = static_cast<int>(runs.front().theta.size());
  stats.attempt_frequency.assign(T, 0.0);

  const auto accumulate = [&](auto getter, double& mean, double& stddev) {
    double sum = 0.0;
    for (const auto& run : runs) sum += getter(run);
    mean = sum / stats.n_seeds;
    double sq = 0.0;
    for (const auto& run : runs) {
      const double d = getter(run) - mean;
      sq += d * d;
    }
    stddev = std::sqrt(sq / stats.n_seeds);  // population std: one seed -> 0
  };

  accumulate([](const RunRecord& r) { return double(r.successes); }, stats.mean_successes,
             stats.std_successes);
  accumulate([](const RunRecord& r) { return double(r.attempts); }, stats.mean_attempts,
             stats.std_attempts);
  accumulate([](const RunRecord& r) { return r.comm_cost; }, stats.mean_comm, stats.std_comm);
  accumulate([](const RunRecord& r) { return r.lqg_cost; }, stats.mean_lqg, stats.std_lqg);
  accumulate([](const RunRecord& r) { return r.total; }, stats.mean_total, stats.std_total);

  for (const auto& run : runs) {
    for (int k = 0; k < T; ++k) stats.attempt_frequency[k] += run.theta[k];
  }
  for (int k = 0; k < T; ++k) stats.attempt_frequency[k] /= stats.n_seeds;
  return stats;
}

std::vector<RunRecord> monte_carlo_runs(const Problem& prob, const RiccatiSolution& sol,
                                        Policy policy, int n_seeds, std::uint64_t seed0,
                                        int jobs) {
  if (n_seeds < 1) throw std::invalid_argument("monte_carlo: n_seeds must be at least 1");
  jobs = std::max(1, jobs);

  std::vector<RunRecord> runs(static_cast<std::size_t>(n_seeds));
  if (jobs == 1) {
    for (int i = 0; i < n_seeds; ++i) runs[i] = simulate_run(prob, sol, policy, seed0 + i);
    return runs;
  }

  std::atomic<int> next{0};
  const auto worker = [&] {
    for (int i = next.fetch_add(1); i < n_seeds; i = next.fetch_add(1)) {
      runs[i] = simulate_run(prob, sol, policy, seed0 + i);
    }
  };
  std::vector<std::thread> pool;
  for (int j = 0; j < std::min(jobs, n_seeds); ++j) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return runs;
}

AggregateStats monte_carlo(const Problem& prob, const RiccatiSolution& sol, Policy policy,
                           int n_seeds, std::uint64_t seed0, int jobs) {
  return aggregate(monte_carlo_runs(prob, sol, policy, n_seeds, seed0, jobs));
}

std::vector<SweepRow> sweep_p(const Problem& prob, const std::vector<double>& p_grid,
                              int n_seeds, std::uint64_t seed0, int jobs) {
  std::vector<SweepRow> rows;
  for (const double p : p_grid) {
    const Problem prob_p = prob.with_p(p);
    validate_problem(prob_p);
    const RiccatiSolution sol = solve_riccati(prob_p);
    for (const Policy policy : {Policy::OneShot, Policy::Mpc}) {
      rows.push_back({policy, p, monte_carlo(prob_p, sol, policy, n_seeds, seed0, jobs)});
    }
  }
  return rows;
}

}  // namespace etlqg
