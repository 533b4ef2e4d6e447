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

#include "etlqg/milp.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "etlqg/problem.hpp"

namespace etlqg {
namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Appends "coeff name" with a +/- separator, wrapping lines near 200 chars.
void append_term(std::string& out, std::size_t& line_len, double coeff,
                 const std::string& name, bool first) {
  std::string piece;
  if (first) {
    piece = (coeff < 0 ? "- " : "") + fmt17(std::abs(coeff)) + " " + name;
  } else {
    piece = (coeff < 0 ? " - " : " + ") + fmt17(std::abs(coeff)) + " " + name;
  }
  if (line_len + piece.size() > 200) {
    out += "\n ";
    line_len = 1;
    if (!first && piece[0] == ' ') piece.erase(0, 1);
  }
  out += piece;
  line_len += piece.size();
}

}  // namespace

std::size_t MilpModel::num_theta() const {
  std::size_t n = 0;
  for (const auto& v : vars) n += (v.role == VarRole::Theta);
  return n;
}

std::size_t MilpModel::num_counters() const {
  std::size_t n = 0;
  for (const auto& v : vars) n += (v.role == VarRole::Counter);
  return n;
}

std::size_t MilpModel::num_selectors() const {
  std::size_t n = 0;
  for (const auto& v : vars) n += (v.role == VarRole::Selector);
  return n;
}

int MilpModel::theta_index(int t) const { return t - k; }

int MilpModel::counter_index(int t, int tau) const {
  // Counters are laid out after the H thetas, ordered by (t, tau).
  const int it = t - k;
  const int itau = tau - k;
  return H + it * (it + 1) / 2 + itau;
}

int MilpModel::selector_index(int t, int tau, int i) const {
  // Selectors follow the counters; the (t,tau) block stores levels
  // 0..(t-tau+1). Block offsets accumulate in (t, tau) order.
  const int it = t - k;
  const int itau = tau - k;
  int offset = H + H * (H + 1) / 2;
  for (int jt = 0; jt < it; ++jt) {
    for (int jtau = 0; jtau <= jt; ++jtau) offset += (jt - jtau) + 2;
  }
  for (int jtau = 0; jtau < itau; ++jtau) offset += (it - jtau) + 2;
  return offset + i;
}

MilpModel build_milp(const GramianTable& table, double p, double lambda, int H) {
  if (H != table.H) throw ValidationError("build_milp: H must match the table window");
  if (H < 1) throw ValidationError("build_milp: H must be at least 1");
  if (!(p > 0.0 && p < 1.0)) {
    throw ValidationError(
        "build_milp: p must lie in (0,1); the one-hot linearization does not cover p = 1");
  }
  if (!(lambda > 0.0)) throw ValidationError("build_milp: lambda must be positive");

  MilpModel model;
  model.k = table.k;
  model.H = H;
  model.p = p;
  model.lambda = lambda;
  const int k = table.k;
  const int Tend = k + H;  // exclusive

  const auto beta = survival_factors(p, H);

  // Variables: theta by t, counters by (t,tau), selectors by (t,tau,i).
  for (int t = k; t < Tend; ++t) {
    model.vars.push_back({VarRole::Theta, t, 0, 0, true, 0, 1, "th_" + std::to_string(t)});
  }
  for (int t = k; t < Tend; ++t) {
    for (int tau = k; tau <= t; ++tau) {
      model.vars.push_back({VarRole::Counter, t, tau, 0, false, 0, t - tau + 1,
                            "c_" + std::to_string(t) + "_" + std::to_string(tau)});
    }
  }
  for (int t = k; t < Tend; ++t) {
    for (int tau = k; tau <= t; ++tau) {
      for (int i = 0; i <= t - tau + 1; ++i) {
        model.vars.push_back({VarRole::Selector, t, tau, i, true, 0, 1,
                              "s_" + std::to_string(t) + "_" + std::to_string(tau) + "_" +
                                  std::to_string(i)});
      }
    }
  }

  // Objective: sum_{t,tau,i} beta_i g_{t,tau} s_{t,tau,i} + lambda sum_t theta_t.
  for (int t = k; t < Tend; ++t) {
    for (int tau = k; tau <= t; ++tau) {
      const double gval = table.g(t - k, tau - k);
      for (int i = 0; i <= t - tau + 1; ++i) {
        model.objective.push_back({model.selector_index(t, tau, i), beta[i] * gval});
      }
    }
  }
  for (int t = k; t < Tend; ++t) {
    model.objective.push_back({model.theta_index(t), lambda});
  }

  // Counter recursion c_{t,k} = c_{t-1,k} + theta_t; c_{k-1,k} is fixed to 0
  // and eliminated, so the first row reads c_{k,k} = theta_k.
  for (int t = k; t < Tend; ++t) {
    MilpConstraint row;
    row.name = "rec_" + std::to_string(t);
    row.lhs.push_back({model.counter_index(t, k), 1.0});
    if (t > k) row.lhs.push_back({model.counter_index(t - 1, k), -1.0});
    row.lhs.push_back({model.theta_index(t), -1.0});
    row.rhs = 0.0;
    model.constraints.push_back(std::move(row));
  }

  // Interval identity c_{t,tau} = c_{t,k} - c_{tau-1,k} for tau >= k+1.
  for (int t = k; t < Tend; ++t) {
    for (int tau = k + 1; tau <= t; ++tau) {
      MilpConstraint row;
      row.name = "intv_" + std::to_string(t) + "_" + std::to_string(tau);
      row.lhs.push_back({model.counter_index(t, tau), 1.0});
      row.lhs.push_back({model.counter_index(t, k), -1.0});
      row.lhs.push_back({model.counter_index(tau - 1, k), 1.0});
      row.rhs = 0.0;
      model.constraints.push_back(std::move(row));
    }
  }

  // One-hot rows sum_i s = 1.
  for (int t = k; t < Tend; ++t) {
    for (int tau = k; tau <= t; ++tau) {
      MilpConstraint row;
      row.name = "onehot_" + std::to_string(t) + "_" + std::to_string(tau);
      for (int i = 0; i <= t - tau + 1; ++i) {
        row.lhs.push_back({model.selector_index(t, tau, i), 1.0});
      }
      row.rhs = 1.0;
      model.constraints.push_back(std::move(row));
    }
  }

  // Linking rows sum_i i*s = c.
  for (int t = k; t < Tend; ++t) {
    for (int tau = k; tau <= t; ++tau) {
      MilpConstraint row;
      row.name = "link_" + std::to_string(t) + "_" + std::to_string(tau);
      for (int i = 1; i <= t - tau + 1; ++i) {
        row.lhs.push_back({model.selector_index(t, tau, i), static_cast<double>(i)});
      }
      row.lhs.push_back({model.counter_index(t, tau), -1.0});
      row.rhs = 0.0;
      model.constraints.push_back(std::move(row));
    }
  }

  return model;
}

double eval_assignment(const MilpModel& model, const Schedule& theta) {
  if (theta.horizon() != model.H) {
    throw std::invalid_argument("eval_assignment: schedule length mismatch");
  }

  // The unique feasible completion: counters from prefix sums, selectors
  // one-hot at the counter value.
  std::vector<double> value(model.vars.size(), 0.0);
  const auto pc = theta.prefix_counts();
  const int k = model.k;
  for (int t = k; t < k + model.H; ++t) {
    value[static_cast<std::size_t>(model.theta_index(t))] = theta.theta[t - k];
    for (int tau = k; tau <= t; ++tau) {
      const int c = pc[t - k] - (tau > k ? pc[tau - k - 1] : 0);
      value[static_cast<std::size_t>(model.counter_index(t, tau))] = c;
      value[static_cast<std::size_t>(model.selector_index(t, tau, c))] = 1.0;
    }
  }

  for (const auto& var : model.vars) {
    const double v = value[static_cast<std::size_t>(&var - model.vars.data())];
    if (v < var.lb || v > var.ub) {
      throw std::logic_error("eval_assignment: bound violated on " + var.name);
    }
  }
  for (const auto& row : model.constraints) {
    double lhs = 0.0;
    for (const auto& term : row.lhs) lhs += term.coeff * value[static_cast<std::size_t>(term.var)];
    if (lhs != row.rhs) {
      throw std::logic_error("eval_assignment: constraint violated: " + row.name);
    }
  }

  double obj = 0.0;
  for (const auto& term : model.objective) {
    obj += term.coeff * value[static_cast<std::size_t>(term.var)];
  }
  return obj;
}

std::string export_lp(const MilpModel& model) {
  std::string out;
  out.reserve(1 << 16);

  out += "Minimize\n obj: ";
  std::size_t line_len = 6;
  bool first = true;
  for (const auto& term : model.objective) {
    append_term(out, line_len, term.coeff, model.vars[static_cast<std::size_t>(term.var)].name,
                first);
    first = false;
  }
  out += "\n";

  out += "Subject To\n";
  for (const auto& row : model.constraints) {
    out += " " + row.name + ": ";
    line_len = row.name.size() + 3;
    bool row_first = true;
    for (const auto& term : row.lhs) {
      append_term(out, line_len, term.coeff, model.vars[static_cast<std::size_t>(term.var)].name,
                  row_first);
      row_first = false;
    }
    out += " = " + fmt17(row.rhs) + "\n";
  }

  out += "Bounds\n";
  for (const auto& var : model.vars) {
    if (var.role == VarRole::Counter) {
      out += " " + std::to_string(var.lb) + " <= " + var.name + " <= " + std::to_string(var.ub) +
             "\n";
    }
  }

  out += "Binary\n";
  for (const auto& var : model.vars) {
    if (var.is_binary) out += " " + var.name + "\n";
  }

  out += "General\n";
  for (const auto& var : model.vars) {
    if (!var.is_binary) out += " " + var.name + "\n";
  }

  out += "End\n";
  return out;
}

}  // namespace etlqg
