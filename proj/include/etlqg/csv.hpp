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

#ifndef ETLQG_CSV_HPP_
#define ETLQG_CSV_HPP_

#include <string>
#include <vector>

#include <Eigen/Core>

#include "etlqg/riccati.hpp"
#include "etlqg/sim.hpp"

namespace etlqg {

/// Floats are printed with 17 significant digits so CSV values round-trip
/// bit-exactly through text.
std::string format_double(double value);

/// `k,i,j,value` rows for a time-indexed matrix sequence.
std::string matrix_series_csv(const std::vector<Eigen::MatrixXd>& mats, int k0 = 0);

/// Per-step trace: k,theta,delta,cert,e_s_norm,err_norm,u_norm,stage_cost.
std::string trace_csv(const RunRecord& run);

/// Aggregate schema: policy,p,n_seeds,mean_attempts,std_attempts,
/// mean_successes,mean_comm,mean_lqg,mean_total,std_total.
std::string aggregate_csv_header();
std::string aggregate_csv_row(Policy policy, double p, const AggregateStats& stats);

/// Per-step attempt frequencies: k,frac_attempt_oneshot,frac_attempt_mpc.
std::string frequency_csv(const std::vector<double>& oneshot_freq,
                          const std::vector<double>& mpc_freq);

}  // namespace etlqg

#endif  // ETLQG_CSV_HPP_
