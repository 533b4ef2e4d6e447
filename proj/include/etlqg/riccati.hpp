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

#ifndef ETLQG_RICCATI_HPP_
#define ETLQG_RICCATI_HPP_

#include <vector>

#include <Eigen/Core>

#include "etlqg/problem.hpp"

namespace etlqg {

/// Certainty-equivalent controller quantities for a finite horizon T.
///
/// P has T+1 entries (P[T] = Q_T); S, L, Gamma and W have T entries each.
/// Gamma[k] = L[k]' S[k] L[k] weighs the estimation error in the cost
/// decomposition; W[k] = sum_j (A^j)' Gamma[k+j] A^j is the tail Gramian
/// used by the one-step certificates.
struct RiccatiSolution {
  std::vector<Eigen::MatrixXd> P;
  std::vector<Eigen::MatrixXd> S;
  std::vector<Eigen::MatrixXd> L;
  std::vector<Eigen::MatrixXd> Gamma;
  std::vector<Eigen::MatrixXd> W;
};

/// Backward Riccati recursion from P_T = Q_T:
///   S_k = R + B' P_{k+1} B
///   L_k = S_k^{-1} B' P_{k+1} A        (solved via Cholesky, not inversion)
///   P_k = A' P_{k+1} A + Q - A' P_{k+1} B S_k^{-1} B' P_{k+1} A
/// P is re-symmetrized after each step. Also fills Gamma and W.
RiccatiSolution solve_riccati(const Problem& prob);

/// W_k by the backward recurrence W_{T-1} = Gamma_{T-1},
/// W_k = Gamma_k + A' W_{k+1} A. Equals the direct sum
/// sum_{j=0}^{T-1-k} (A^j)' Gamma_{k+j} A^j.
std::vector<Eigen::MatrixXd> tail_gramians(const std::vector<Eigen::MatrixXd>& Gamma,
                                           const Eigen::MatrixXd& A);

/// Schedule-independent cost constant:
///   tr(P_0 (Sigma_0 + x0 x0')) + sum_{k=0}^{T-1} tr(P_{k+1} Sigma_w).
double constant_cost(const Problem& prob, const RiccatiSolution& sol);

}  // namespace etlqg

#endif  // ETLQG_RICCATI_HPP_
