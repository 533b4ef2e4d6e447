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

#include "etlqg/covariance.hpp"

#include <algorithm>
#include <stdexcept>

namespace etlqg {
namespace {

inline void require(bool cond, const char* what) {
  if (!cond) throw std::invalid_argument(what);
}

inline double trace_product(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y) {
  // tr(XY) for symmetric X, Y.
  return X.cwiseProduct(Y).sum();
}

}  // namespace

int Schedule::attempts() const {
  int n = 0;
  for (auto t : theta) n += t;
  return n;
}

std::vector<int> Schedule::prefix_counts() const {
  std::vector<int> pc(theta.size());
  int run = 0;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    run += theta[i];
    pc[i] = run;
  }
  return pc;
}

int Schedule::count(int t, int tau) const {
  int n = 0;
  for (int s = tau; s <= t; ++s) n += theta[static_cast<std::size_t>(s)];
  return n;
}

double GramianTable::total_gram() const {
  double sum = 0.0;
  for (int it = 0; it < H; ++it) {
    for (int itau = 0; itau <= it; ++itau) sum += g(it, itau);
  }
  return sum;
}

GramianTable build_tables(const Problem& prob, const RiccatiSolution& sol, int k,
                          const Eigen::VectorXd& e_s) {
  require(k >= 0 && k <= prob.T - 1, "build_tables: k must lie in [0, T-1]");
  require(e_s.size() == prob.A.rows(), "build_tables: e_s dimension mismatch");

  GramianTable tab;
  tab.k = k;
  tab.H = prob.T - k;
  tab.lambda = prob.lambda;
  tab.g = Eigen::MatrixXd::Zero(tab.H, tab.H);

  // One forward chain of A-propagations per window, shared by the noise
  // Gramians and the innovation terms.
  tab.noise_lag.resize(tab.H);
  tab.innov_prop.resize(tab.H);
  tab.noise_lag[0] = prob.Sigma_w;
  tab.innov_prop[0] = e_s;
  for (int d = 1; d < tab.H; ++d) {
    tab.noise_lag[d] = prob.A * tab.noise_lag[d - 1] * prob.A.transpose();
    tab.innov_prop[d] = prob.A * tab.innov_prop[d - 1];
  }

  for (int it = 0; it < tab.H; ++it) {
    const Eigen::MatrixXd& G = sol.Gamma[k + it];
    tab.g(it, 0) = tab.innov_prop[it].dot(G * tab.innov_prop[it]);
    for (int itau = 1; itau <= it; ++itau) {
      tab.g(it, itau) = trace_product(G, tab.noise_lag[it - itau]);
    }
  }

  // Clamp congruence noise; anything materially negative is a bug upstream.
  const double scale = std::max(tab.g.cwiseAbs().maxCoeff(), 1.0);
  for (int it = 0; it < tab.H; ++it) {
    for (int itau = 0; itau <= it; ++itau) {
      if (tab.g(it, itau) < 0.0) {
        require(tab.g(it, itau) >= -1e-10 * scale,
                "build_tables: negative Gramian trace beyond tolerance");
        tab.g(it, itau) = 0.0;
      }
    }
  }
  return tab;
}

std::vector<Eigen::MatrixXd> propagate_recursive(const Problem& prob,
                                                 const RiccatiSolution& sol,
                                                 const Schedule& schedule,
                                                 const Eigen::VectorXd& e_s, int k) {
  (void)sol;
  const int H = prob.T - k;
  require(schedule.horizon() == H, "propagate_recursive: schedule length must be T-k");
  const double p = prob.p;

  std::vector<Eigen::MatrixXd> out(H);
  out[0] = (1.0 - p * schedule.theta[0]) * (e_s * e_s.transpose());
  for (int i = 1; i < H; ++i) {
    Eigen::MatrixXd grown = prob.A * out[i - 1] * prob.A.transpose() + prob.Sigma_w;
    out[i] = (1.0 - p * schedule.theta[i]) * grown;
  }
  for (auto& S : out) S = 0.5 * (S + S.transpose()).eval();
  return out;
}

Eigen::MatrixXd closed_form_cov(const GramianTable& table, const Schedule& schedule,
                                int t, double p) {
  const int it = t - table.k;
  require(it >= 0 && it < table.H, "closed_form_cov: t outside the window");
  require(schedule.horizon() == table.H, "closed_form_cov: schedule length mismatch");

  const auto beta = survival_factors(p, table.H);
  const auto pc = schedule.prefix_counts();
  const auto count = [&](int itau) { return pc[it] - (itau > 0 ? pc[itau - 1] : 0); };

  const Eigen::VectorXd& v = table.innov_prop[it];
  Eigen::MatrixXd sigma = beta[count(0)] * (v * v.transpose());
  for (int itau = 1; itau <= it; ++itau) {
    sigma += beta[count(itau)] * table.noise_lag[it - itau];
  }
  return sigma;
}

std::vector<double> survival_factors(double p, int H) {
  std::vector<double> beta(static_cast<std::size_t>(H) + 1);
  beta[0] = 1.0;  // (1-p)^0 = 1 also at p = 1
  for (int i = 1; i <= H; ++i) beta[i] = beta[i - 1] * (1.0 - p);
  return beta;
}

double schedule_cost(const GramianTable& table, const Schedule& schedule, double p) {
  const int H = table.H;
  require(schedule.horizon() == H, "schedule_cost: schedule length mismatch");
  require(p > 0.0 && p <= 1.0, "schedule_cost: p must lie in (0,1]");

  const auto beta = survival_factors(p, H);
  const auto pc = schedule.prefix_counts();

  double cov = 0.0;
  for (int it = 0; it < H; ++it) {
    for (int itau = 0; itau <= it; ++itau) {
      const int c = pc[it] - (itau > 0 ? pc[itau - 1] : 0);
      cov += beta[c] * table.g(it, itau);
    }
  }
  return cov + table.lambda * schedule.attempts();
}

}  // namespace etlqg
