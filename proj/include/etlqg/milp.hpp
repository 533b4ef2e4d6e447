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

#ifndef ETLQG_MILP_HPP_
#define ETLQG_MILP_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "etlqg/covariance.hpp"

namespace etlqg {

enum class VarRole { Theta, Counter, Selector };

/// One MILP variable. Indices t, tau are absolute times; i is the selector
/// level. Counters are general integers with bounds [0, t-tau+1]; theta and
/// selectors are binary.
struct MilpVar {
  VarRole role = VarRole::Theta;
  int t = 0;
  int tau = 0;
  int i = 0;
  bool is_binary = true;
  int lb = 0;
  int ub = 1;
  std::string name;
};

struct MilpTerm {
  int var = 0;
  double coeff = 0.0;
};

/// Equality row sum(coeff * var) = rhs.
struct MilpConstraint {
  std::string name;
  std::vector<MilpTerm> lhs;
  double rhs = 0.0;
};

/// Exact linearization of the window scheduling program: binary attempts
/// theta_t, running/interval attempt counters c_{t,tau} and one-hot selectors
/// s_{t,tau,i} with sum_i s = 1 and sum_i i s = c, so that
/// (1-p)^{c_{t,tau}} = sum_i beta_i s_{t,tau,i} with beta_i = (1-p)^i.
///
/// Selector levels run over i = 0..t-tau+1: the interval [tau, t] holds
/// t-tau+1 slots, so the attempt count reaches t-tau+1 when every slot in it
/// attempts, and the one-hot encoding must cover that value.
struct MilpModel {
  int k = 0;
  int H = 0;
  double p = 0.0;
  double lambda = 0.0;
  std::vector<MilpVar> vars;
  std::vector<MilpTerm> objective;       // ordered: selectors by (t,tau,i), then theta
  std::vector<MilpConstraint> constraints;  // ordered by kind, then indices

  std::size_t num_theta() const;
  std::size_t num_counters() const;
  std::size_t num_selectors() const;

  /// Variable lookups by role and absolute indices.
  int theta_index(int t) const;
  int counter_index(int t, int tau) const;
  int selector_index(int t, int tau, int i) const;
};

/// Builds the MILP for the window behind `table`. Requires p in (0,1): at
/// p = 1 the one-hot linearization degenerates and the request is refused
/// (the nonlinear evaluator and enumeration cover that case). H must equal
/// the table window length.
MilpModel build_milp(const GramianTable& table, double p, double lambda, int H);

/// Derives the unique feasible (c, s) implied by theta, checks every
/// constraint row exactly (integer arithmetic), and returns the linear
/// objective value. Throws std::logic_error on any violation, which would
/// signal a model-construction bug.
double eval_assignment(const MilpModel& model, const Schedule& theta);

/// Plain-text LP interchange format: sections Minimize, Subject To, Bounds,
/// Binary, General, End; variable names th_t, c_t_tau, s_t_tau_i;
/// coefficients printed with 17 significant digits; deterministic ordering.
std::string export_lp(const MilpModel& model);

}  // namespace etlqg

#endif  // ETLQG_MILP_HPP_
