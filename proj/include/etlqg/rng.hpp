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

#ifndef ETLQG_RNG_HPP_
#define ETLQG_RNG_HPP_

#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace etlqg {

/// Stream ids used by the simulator. Each (seed, stream) pair yields an
/// independent deterministic substream, so runs with the same seed share
/// noise and channel realizations across policies and penalty variants.
enum : std::uint64_t {
  kStreamInitialState = 0,
  kStreamProcessNoise = 1,
  kStreamChannel = 2,
};

/// SplitMix64 finalizer; derives per-stream seeds from (seed, stream_id).
std::uint64_t splitmix64(std::uint64_t x);

/// One deterministic substream: mt19937_64 seeded with
/// splitmix64(seed + (stream_id + 1) * 0x9E3779B97F4A7C15).
///
/// uniform01 maps the top 53 bits of one 64-bit draw to [0,1); gaussian uses
/// Box-Muller on two uniforms per variate (no cached second value, so the
/// draw sequence is a pure function of the call count). Both avoid
/// std::*_distribution, whose output is implementation-defined.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  double uniform01();                 // [0, 1)
  double gaussian();                  // standard normal
  Eigen::VectorXd gaussian_vec(int n);

 private:
  std::mt19937_64 gen_;
};

/// Symmetric square root of a PSD matrix via eigendecomposition; eigenvalues
/// below zero (congruence noise) are clamped to zero, so PSD inputs that are
/// only numerically semidefinite are accepted.
Eigen::MatrixXd covariance_sqrt(const Eigen::MatrixXd& cov);

}  // namespace etlqg

#endif  // ETLQG_RNG_HPP_
