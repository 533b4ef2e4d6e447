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

#include "etlqg/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace etlqg {
namespace {

const char* resolution_name(StepResolution r) {
  switch (r) {
    case StepResolution::Skip:
      return "skip";
    case StepResolution::Attempt:
      return "attempt";
    case StepResolution::Milp:
      return "milp";
  }
  throw std::logic_error("unknown step resolution");
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string matrix_series_csv(const std::vector<Eigen::MatrixXd>& mats, int k0) {
  std::string out = "k,i,j,value\n";
  for (std::size_t k = 0; k < mats.size(); ++k) {
    const auto& M = mats[k];
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
      for (Eigen::Index j = 0; j < M.cols(); ++j) {
        out += std::to_string(k0 + static_cast<int>(k)) + "," + std::to_string(i) + "," +
               std::to_string(j) + "," + format_double(M(i, j)) + "\n";
      }
    }
  }
  return out;
}

std::string trace_csv(const RunRecord& run) {
  std::string out = "k,theta,delta,cert,e_s_norm,err_norm,u_norm,stage_cost\n";
  for (std::size_t k = 0; k < run.theta.size(); ++k) {
    out += std::to_string(k) + "," + std::to_string(int(run.theta[k])) + "," +
           std::to_string(int(run.delta[k])) + "," + resolution_name(run.resolution[k]) + "," +
           format_double(run.e_s[k].norm()) + "," + format_double(run.err[k].norm()) + "," +
           format_double(run.u[k].norm()) + "," + format_double(run.stage_cost[k]) + "\n";
  }
  return out;
}

std::string aggregate_csv_header() {
  return "policy,p,n_seeds,mean_attempts,std_attempts,mean_successes,mean_comm,mean_lqg,"
         "mean_total,std_total\n";
}

std::string aggregate_csv_row(Policy policy, double p, const AggregateStats& stats) {
  return policy_name(policy) + "," + format_double(p) + "," + std::to_string(stats.n_seeds) +
         "," + format_double(stats.mean_attempts) + "," + format_double(stats.std_attempts) +
         "," + format_double(stats.mean_successes) + "," + format_double(stats.mean_comm) + "," +
         format_double(stats.mean_lqg) + "," + format_double(stats.mean_total) + "," +
         format_double(stats.std_total) + "\n";
}

std::string frequency_csv(const std::vector<double>& oneshot_freq,
                          const std::vector<double>& mpc_freq) {
  if (oneshot_freq.size() != mpc_freq.size()) {
    throw std::invalid_argument("frequency_csv: length mismatch");
  }
  std::string out = "k,frac_attempt_oneshot,frac_attempt_mpc\n";
  for (std::size_t k = 0; k < oneshot_freq.size(); ++k) {
    out += std::to_string(k) + "," + format_double(oneshot_freq[k]) + "," +
           format_double(mpc_freq[k]) + "\n";
  }
  return out;
}

}  // namespace etlqg
