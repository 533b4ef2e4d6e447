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

#include "etlqg/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace etlqg {
namespace {

constexpr int kEnumerationBudget = 22;

// Cost of a schedule restricted to slots [j0, H) and table entries with
// tau >= j0 (the self-contained suffix subproblem; schedule indices are
// window-local, entries below j0 must be zero).
double suffix_cost(const GramianTable& table, const std::vector<double>& beta,
                   const std::vector<std::uint8_t>& theta, int j0) {
  const int H = table.H;
  std::vector<int> pc(static_cast<std::size_t>(H), 0);
  int run = 0;
  int attempts = 0;
  for (int i = j0; i < H; ++i) {
    run += theta[static_cast<std::size_t>(i)];
    attempts += theta[static_cast<std::size_t>(i)];
    pc[static_cast<std::size_t>(i)] = run;
  }
  double cov = 0.0;
  for (int itau = j0; itau < H; ++itau) {
    for (int it = itau; it < H; ++it) {
      const int c = pc[it] - (itau > j0 ? pc[itau - 1] : 0);
      cov += beta[c] * table.g(it, itau);
    }
  }
  return cov + table.lambda * attempts;
}

// Certificate-driven greedy rollout: walk the window and attempt whenever the
// one-step expected gain p * tr(Gamma_t Sigma_t^pre) reaches lambda. The
// pre-decision stage cost is the beta-weighted table row under the prefix
// chosen so far. Restricted to slots/columns >= j0.
std::vector<std::uint8_t> greedy_rollout(const GramianTable& table, double p,
                                         const std::vector<double>& beta, int j0) {
  const int H = table.H;
  std::vector<std::uint8_t> theta(static_cast<std::size_t>(H), 0);
  std::vector<int> pc(static_cast<std::size_t>(H), 0);
  int run = 0;
  for (int it = j0; it < H; ++it) {
    double stage = 0.0;
    for (int itau = j0; itau <= it; ++itau) {
      // Attempts on [tau, t-1]; slot t itself is the decision being scored.
      const int c = (it > j0 ? pc[it - 1] : 0) - (itau > j0 ? pc[itau - 1] : 0);
      stage += beta[c] * table.g(it, itau);
    }
    theta[static_cast<std::size_t>(it)] = (p * stage >= table.lambda) ? 1 : 0;
    run += theta[static_cast<std::size_t>(it)];
    pc[static_cast<std::size_t>(it)] = run;
  }
  return theta;
}

// Exact depth-first search over one window.
//
// State at depth d of a solve started at j0: slots [j0, d) are fixed, and F
// carries sum_{tau >= j0} beta[cnt] g with cnt = decided attempts plus every
// undecided slot assumed 1 (the all-remaining-ones relaxation, a term-wise
// lower bound on the covariance part). The node bound adds two pieces on top
// of the relaxation:
//
//   bound(d) = lambda * (attempts so far) + (F - allones_tail[d]) + opt_tail[d]
//
// where allones_tail[d] is the relaxed value of the terms with tau >= d and
// opt_tail[d] is the exact optimum of the self-contained subproblem on slots
// [d, H) including its communication charges. opt_tail[d] >= allones_tail[d],
// so this dominates the plain relaxation bound while staying a valid lower
// bound; it is what makes horizon-50 windows tractable. The opt_tail table is
// bootstrapped back-to-front with the same search.
struct BnbSearch {
  const GramianTable& table;
  const std::vector<double>& beta;
  double lambda;
  int H;

  Eigen::MatrixXi cnt;
  std::vector<double> allones_tail;  // size H+1
  std::vector<double> opt_tail;      // size H+1
  std::vector<std::uint8_t> path;
  std::uint64_t nodes = 0;

  int j0 = 0;
  double F = 0.0;
  double lambda_prefix = 0.0;
  double best_cost = 0.0;
  std::vector<std::uint8_t> best_theta;

  BnbSearch(const GramianTable& tab, const std::vector<double>& b)
      : table(tab), beta(b), lambda(tab.lambda), H(tab.H) {
    cnt.setZero(H, H);
    path.resize(static_cast<std::size_t>(H));
    allones_tail.assign(static_cast<std::size_t>(H) + 1, 0.0);
    for (int d = H - 1; d >= 0; --d) {
      double col = 0.0;
      for (int it = d; it < H; ++it) col += beta[it - d + 1] * table.g(it, d);
      allones_tail[d] = allones_tail[d + 1] + col;
    }
    opt_tail.assign(static_cast<std::size_t>(H) + 1, 0.0);
  }

  void start(int start_slot, double incumbent, const std::vector<std::uint8_t>& inc_theta) {
    j0 = start_slot;
    F = allones_tail[j0];
    lambda_prefix = 0.0;
    best_cost = incumbent;
    best_theta = inc_theta;
    for (int itau = j0; itau < H; ++itau) {
      for (int it = itau; it < H; ++it) cnt(it, itau) = it - itau + 1;
    }
    dfs(j0);
  }

  // Removes the assumed attempt at slot d from the relaxation; returns the
  // F increase so the caller can undo it.
  double drop_slot(int d) {
    double delta = 0.0;
    for (int itau = j0; itau <= d; ++itau) {
      for (int it = std::max(itau, d); it < H; ++it) {
        const int c = cnt(it, itau);
        delta += (beta[c - 1] - beta[c]) * table.g(it, itau);
        cnt(it, itau) = c - 1;
      }
    }
    F += delta;
    return delta;
  }

  void restore_slot(int d, double delta) {
    for (int itau = j0; itau <= d; ++itau) {
      for (int it = std::max(itau, d); it < H; ++it) cnt(it, itau) += 1;
    }
    F -= delta;
  }

  void dfs(int d) {
    ++nodes;
    if (d == H) {
      const double cost = lambda_prefix + F;  // counts are exact at a leaf
      if (cost < best_cost) {
        best_cost = cost;
        best_theta = path;
      }
      return;
    }

    // theta = 1 first: the relaxation already assumes it, only lambda moves.
    path[static_cast<std::size_t>(d)] = 1;
    lambda_prefix += lambda;
    if (lambda_prefix + F - allones_tail[d + 1] + opt_tail[d + 1] < best_cost) dfs(d + 1);
    lambda_prefix -= lambda;

    path[static_cast<std::size_t>(d)] = 0;
    const double delta = drop_slot(d);
    if (lambda_prefix + F - allones_tail[d + 1] + opt_tail[d + 1] < best_cost) dfs(d + 1);
    restore_slot(d, delta);
  }
};

double indicator_gram_sum(const GramianTable& table, const Schedule& sched) {
  const auto pc = sched.prefix_counts();
  double sum = 0.0;
  for (int it = 0; it < table.H; ++it) {
    for (int itau = 0; itau <= it; ++itau) {
      const int c = pc[it] - (itau > 0 ? pc[itau - 1] : 0);
      if (c >= 1) sum += table.g(it, itau);
    }
  }
  return sum;
}

}  // namespace

CertificateOutcome certify(const Eigen::VectorXd& e_s, const Eigen::MatrixXd& Gamma_k,
                           const Eigen::MatrixXd& W_k, double p, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("certify: lambda must be positive");
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("certify: p must lie in (0,1]");

  CertificateOutcome out;
  out.attempt_stat = p * e_s.dot(Gamma_k * e_s);
  out.skip_stat = p * e_s.dot(W_k * e_s);
  out.lambda = lambda;
  if (out.attempt_stat >= lambda) {
    out.decision = Decision::Attempt;
  } else if (out.skip_stat <= lambda) {
    out.decision = Decision::Skip;
  } else {
    out.decision = Decision::Ambiguous;
  }
  return out;
}

SolveResult solve_enumerate(const GramianTable& table, double p, int H) {
  if (H != table.H) throw std::invalid_argument("solve_enumerate: H must match the table");
  if (H < 1) throw std::invalid_argument("solve_enumerate: H must be at least 1");
  if (H > kEnumerationBudget) {
    throw std::invalid_argument("solve_enumerate: H exceeds the 2^22 enumeration budget");
  }

  SolveResult best;
  best.proof = Proof::Enumerated;
  best.cost = std::numeric_limits<double>::infinity();
  int best_attempts = H + 1;

  Schedule sched = Schedule::zeros(H);
  const std::uint64_t total = 1ull << H;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    // Bit H-1-i holds theta_i, so ascending masks scan schedules in
    // lexicographic order with theta_k most significant.
    int attempts = 0;
    for (int i = 0; i < H; ++i) {
      sched.theta[static_cast<std::size_t>(i)] =
          static_cast<std::uint8_t>((mask >> (H - 1 - i)) & 1ull);
      attempts += sched.theta[static_cast<std::size_t>(i)];
    }
    const double cost = schedule_cost(table, sched, p);
    if (cost < best.cost || (cost == best.cost && attempts < best_attempts)) {
      best.cost = cost;
      best.schedule = sched;
      best_attempts = attempts;
    }
  }
  best.nodes_explored = total;
  return best;
}

SolveResult solve_bnb(const GramianTable& table, double p, int H,
                      const std::optional<Schedule>& incumbent_hint) {
  if (H != table.H) throw std::invalid_argument("solve_bnb: H must match the table");
  if (H < 1) throw std::invalid_argument("solve_bnb: H must be at least 1");
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("solve_bnb: p must lie in (0,1]");

  const auto beta = survival_factors(p, H);
  BnbSearch search(table, beta);

  // Exact optima of the pure-noise suffix subproblems, back to front; each
  // solve is bounded by the ones already done.
  for (int j0 = H - 1; j0 >= 1; --j0) {
    const auto greedy = greedy_rollout(table, p, beta, j0);
    std::vector<std::uint8_t> zeros(static_cast<std::size_t>(H), 0);
    std::vector<std::uint8_t> ones(static_cast<std::size_t>(H), 0);
    std::fill(ones.begin() + j0, ones.end(), 1);

    double incumbent = suffix_cost(table, beta, greedy, j0);
    std::vector<std::uint8_t> inc_theta = greedy;
    for (const auto& cand : {zeros, ones}) {
      const double c = suffix_cost(table, beta, cand, j0);
      if (c < incumbent) {
        incumbent = c;
        inc_theta = cand;
      }
    }
    search.start(j0, incumbent, inc_theta);
    search.opt_tail[j0] = search.best_cost;
  }

  // Full window, innovation column included.
  std::vector<Schedule> candidates;
  if (incumbent_hint && incumbent_hint->horizon() == H) candidates.push_back(*incumbent_hint);
  candidates.push_back(Schedule(greedy_rollout(table, p, beta, 0)));
  candidates.push_back(Schedule::zeros(H));
  candidates.push_back(Schedule::ones(H));

  double incumbent = std::numeric_limits<double>::infinity();
  std::vector<std::uint8_t> inc_theta;
  for (const auto& cand : candidates) {
    const double cost = schedule_cost(table, cand, p);
    if (cost < incumbent) {
      incumbent = cost;
      inc_theta = cand.theta;
    }
  }
  search.start(0, incumbent, inc_theta);

  SolveResult res;
  res.schedule = Schedule(search.best_theta);
  res.cost = schedule_cost(table, res.schedule, p);
  res.nodes_explored = search.nodes;
  res.proof = Proof::Optimal;
  return res;
}

RatioBounds ratio_bounds(const Schedule& theta_star_1, const Schedule& theta_star_p,
                         const GramianTable& table, double p) {
  if (theta_star_1.horizon() != table.H || theta_star_p.horizon() != table.H) {
    throw std::invalid_argument("ratio_bounds: schedule length mismatch");
  }

  RatioBounds out;
  out.C_max = theta_star_p.attempts();  // max interval count is the full-window count

  const double j1_star = schedule_cost(table, theta_star_1, 1.0);
  const double jp_star = schedule_cost(table, theta_star_p, p);
  const double j1_at_p_opt = schedule_cost(table, theta_star_p, 1.0);

  if (j1_star <= 0.0) {
    // Only possible when every g vanishes and no attempts pay; both channels
    // then cost nothing.
    return out;
  }

  out.ratio = jp_star / j1_star;
  out.upper = 1.0 + (1.0 - p) * indicator_gram_sum(table, theta_star_1) / j1_star;
  out.lower = 1.0 + std::pow(1.0 - p, out.C_max) *
                        indicator_gram_sum(table, theta_star_p) / j1_at_p_opt;
  return out;
}

}  // namespace etlqg
