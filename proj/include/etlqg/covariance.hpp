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

#ifndef ETLQG_COVARIANCE_HPP_
#define ETLQG_COVARIANCE_HPP_

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "etlqg/problem.hpp"
#include "etlqg/riccati.hpp"

namespace etlqg {

/// Binary attempt vector over a planning window [k, T). Index i refers to
/// absolute time k+i.
struct Schedule {
  std::vector<std::uint8_t> theta;

  Schedule() = default;
  explicit Schedule(std::vector<std::uint8_t> t) : theta(std::move(t)) {}
  static Schedule zeros(int H) { return Schedule(std::vector<std::uint8_t>(H, 0)); }
  static Schedule ones(int H) { return Schedule(std::vector<std::uint8_t>(H, 1)); }

  int horizon() const { return static_cast<int>(theta.size()); }
  int attempts() const;

  /// pc[i] = theta[0] + ... + theta[i].
  std::vector<int> prefix_counts() const;

  /// Number of attempts on the inclusive local interval [tau, t].
  int count(int t, int tau) const;

  bool operator==(const Schedule& other) const { return theta == other.theta; }
};

/// Precomputed stage-cost coefficients for one window [k, T):
///   gram(it, 0)    = || A^{it} e_s ||^2_{Gamma_{k+it}}      (innovation column)
///   gram(it, itau) = tr(Gamma_{k+it} A^{it-itau} Sigma_w (A^{it-itau})'),
///                    1 <= itau <= it
/// Local indices: it = t - k, itau = tau - k. Tiny negative traces from
/// floating-point congruence noise are clamped to zero. The propagated
/// matrices behind the traces are retained for the closed-form covariance.
struct GramianTable {
  int k = 0;
  int H = 0;
  double lambda = 0.0;
  Eigen::MatrixXd g;                         // H x H lower triangle
  std::vector<Eigen::MatrixXd> noise_lag;    // A^d Sigma_w (A^d)', d = 0..H-1
  std::vector<Eigen::VectorXd> innov_prop;   // A^it e_s, it = 0..H-1

  double gram(int it, int itau) const { return g(it, itau); }
  /// Absolute-index accessors.
  double g_noise(int t, int tau) const { return g(t - k, tau - k); }
  double g_innov(int t) const { return g(t - k, 0); }
  /// Sum of every stage-cost coefficient in the window.
  double total_gram() const;
};

/// Builds the Gramian tables for the window starting at k with scheduler-side
/// error e_s. One forward matrix chain per window; O(H) matrix products.
GramianTable build_tables(const Problem& prob, const RiccatiSolution& sol, int k,
                          const Eigen::VectorXd& e_s);

/// Error-covariance recursion over the window:
///   Sigma_{k|k}   = (1 - p theta_0) e_s e_s'
///   Sigma_{t+1|k} = (1 - p theta_{t+1-k}) (A Sigma_{t|k} A' + Sigma_w)
/// Returns Sigma_{k|k} .. Sigma_{T-1|k}.
std::vector<Eigen::MatrixXd> propagate_recursive(const Problem& prob,
                                                 const RiccatiSolution& sol,
                                                 const Schedule& schedule,
                                                 const Eigen::VectorXd& e_s, int k);

/// Closed-form covariance at absolute time t:
///   Sigma_{t|k} = sum_tau (1-p)^{c_{t,tau}} G_{t,tau}
/// with the convention (1-p)^0 = 1 also at p = 1.
Eigen::MatrixXd closed_form_cov(const GramianTable& table, const Schedule& schedule,
                                int t, double p);

/// beta_i = (1-p)^i for i = 0..H, with beta_0 = 1 even at p = 1.
std::vector<double> survival_factors(double p, int H);

/// Window cost of a fixed schedule:
///   sum_{t,tau} (1-p)^{c_{t,tau}} g_{t,tau} + lambda * sum_t theta_t.
/// At p = 1 this reduces to the lossless indicator form.
double schedule_cost(const GramianTable& table, const Schedule& schedule, double p);

}  // namespace etlqg

#endif  // ETLQG_COVARIANCE_HPP_
