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

#ifndef ETLQG_PROBLEM_HPP_
#define ETLQG_PROBLEM_HPP_

#include <Eigen/Core>

#include <optional>
#include <stdexcept>
#include <string>

namespace etlqg {

/// Thrown when an input (config file, flag combination, matrix data) violates
/// a documented invariant. The message names the offending field.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Per-attempt penalties when failed and successful transmissions are charged
/// differently. Collapsed to a single effective penalty before scheduling;
/// kept around so the simulator can account realized costs separately.
struct PenaltyPair {
  double fail = 0.0;
  double success = 0.0;
};

/// One finite-horizon instance: plant, weights, noise statistics, horizon,
/// channel success probability and the communication penalty.
///
/// Immutable after construction/validation; safe to share across threads.
struct Problem {
  Eigen::MatrixXd A;        // n x n state map
  Eigen::MatrixXd B;        // n x m input map
  Eigen::MatrixXd Q;        // n x n stage state weight, PSD
  Eigen::MatrixXd R;        // m x m input weight, PD
  Eigen::MatrixXd Q_T;      // n x n terminal weight, PSD
  Eigen::MatrixXd Sigma_w;  // n x n process-noise covariance, PSD
  Eigen::VectorXd x0_mean;  // n
  Eigen::MatrixXd Sigma_0;  // n x n initial-state covariance, PSD
  int T = 1;                // horizon, steps
  double p = 1.0;           // channel success probability, (0,1]
  double lambda = 1.0;      // effective per-attempt penalty

  // Present when the instance was specified with distinct penalties for
  // failed/successful attempts; `lambda` then equals the collapsed value.
  std::optional<PenaltyPair> penalty_split;

  int state_dim() const { return static_cast<int>(A.rows()); }
  int input_dim() const { return static_cast<int>(B.cols()); }

  /// Copy with a new channel probability; re-collapses split penalties.
  Problem with_p(double new_p) const;
  /// Copy with a new horizon.
  Problem with_horizon(int new_T) const;
  /// Copy with a new single penalty (drops any split).
  Problem with_lambda(double new_lambda) const;
};

/// lambda_eff = lambda_fail * (1 - p) + lambda_success * p.
double effective_lambda(double lambda_fail, double lambda_success, double p);

/// Checks every Problem invariant; throws ValidationError naming the field.
void validate_problem(const Problem& prob);

/// Parses and validates a JSON instance. Matrices are row-major arrays of
/// arrays; keys: A, B, Q, R, Q_T, Sigma_w, x0_mean, Sigma_0, T, p and either
/// `lambda` or `lambda_fail` + `lambda_success`. x0_mean and Sigma_0 default
/// to zero. Unknown keys are rejected.
Problem load_problem(const std::string& json_text);

/// Inverse of load_problem; emits the split penalties when present.
std::string serialize_problem(const Problem& prob);

/// Linearized Boeing 747 longitudinal dynamics benchmark: 4x4 plant, two
/// inputs, Q = Q_T = 5I, R = I, Sigma_w = sigma2*I, Sigma_0 = 0.4I,
/// x0_mean = (0.5,...), T = 50, p = 0.7, lambda = 100. The sampling model
/// leaves sigma unspecified; sigma2 defaults to 1.0 and is overridable here
/// and through the config file.
Problem boeing747_preset(double sigma2 = 1.0);

}  // namespace etlqg

#endif  // ETLQG_PROBLEM_HPP_
