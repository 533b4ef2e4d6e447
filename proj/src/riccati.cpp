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

#include "etlqg/riccati.hpp"

#include <stdexcept>

#include <Eigen/Cholesky>

namespace etlqg {
namespace {

inline Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& M) {
  return 0.5 * (M + M.transpose());
}

}  // namespace

RiccatiSolution solve_riccati(const Problem& prob) {
  const int T = prob.T;
  const auto& A = prob.A;
  const auto& B = prob.B;

  RiccatiSolution sol;
  sol.P.resize(T + 1);
  sol.S.resize(T);
  sol.L.resize(T);
  sol.Gamma.resize(T);

  sol.P[T] = prob.Q_T;
  for (int k = T - 1; k >= 0; --k) {
    const Eigen::MatrixXd& Pn = sol.P[k + 1];
    Eigen::MatrixXd S = symmetrize(prob.R + B.transpose() * Pn * B);
    Eigen::LLT<Eigen::MatrixXd> llt(S);
    if (llt.info() != Eigen::Success) {
      throw std::runtime_error("Riccati step " + std::to_string(k) +
                               ": S_k is not positive definite to working precision");
    }
    const Eigen::MatrixXd M = B.transpose() * Pn * A;  // m x n
    const Eigen::MatrixXd L = llt.solve(M);
    const Eigen::MatrixXd Gamma = symmetrize(M.transpose() * L);  // = L' S L
    sol.S[k] = S;
    sol.L[k] = L;
    sol.Gamma[k] = Gamma;
    sol.P[k] = symmetrize(A.transpose() * Pn * A + prob.Q - Gamma);
  }

  sol.W = tail_gramians(sol.Gamma, A);
  return sol;
}

std::vector<Eigen::MatrixXd> tail_gramians(const std::vector<Eigen::MatrixXd>& Gamma,
                                           const Eigen::MatrixXd& A) {
  const int T = static_cast<int>(Gamma.size());
  std::vector<Eigen::MatrixXd> W(T);
  if (T == 0) return W;
  W[T - 1] = Gamma[T - 1];
  for (int k = T - 2; k >= 0; --k) {
    W[k] = symmetrize(Gamma[k] + A.transpose() * W[k + 1] * A);
  }
  return W;
}

double constant_cost(const Problem& prob, const RiccatiSolution& sol) {
  const Eigen::MatrixXd init =
      prob.Sigma_0 + prob.x0_mean * prob.x0_mean.transpose();
  double cost = (sol.P[0] * init).trace();
  for (int k = 0; k < prob.T; ++k) {
    cost += (sol.P[k + 1] * prob.Sigma_w).trace();
  }
  return cost;
}

}  // namespace etlqg
