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

#include "etlqg/problem.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <nlohmann/json.hpp>

namespace etlqg {
namespace {

using nlohmann::json;

bool is_symmetric(const Eigen::MatrixXd& M) {
  const double scale = M.cwiseAbs().maxCoeff();
  if (scale == 0.0) return true;
  return (M - M.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale;
}

// PSD up to -1e-10 relative to the spectral norm; robust to text round-trip
// noise in the config file.
bool is_psd(const Eigen::MatrixXd& M) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  const double scale = std::max(std::abs(ev.minCoeff()), std::abs(ev.maxCoeff()));
  return ev.minCoeff() >= -1e-10 * std::max(scale, 1e-300);
}

bool is_pd(const Eigen::MatrixXd& M) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() > 0.0;
}

void check_square(const Eigen::MatrixXd& M, int n, const char* name) {
  if (M.rows() != n || M.cols() != n) {
    std::ostringstream msg;
    msg << name << " must be " << n << "x" << n << ", got " << M.rows() << "x" << M.cols();
    throw ValidationError(msg.str());
  }
}

void check_sym_psd(const Eigen::MatrixXd& M, const char* name) {
  if (!is_symmetric(M)) throw ValidationError(std::string(name) + " not symmetric");
  if (!is_psd(M)) throw ValidationError(std::string(name) + " not positive semidefinite");
}

Eigen::MatrixXd parse_matrix(const json& j, const std::string& key) {
  const auto& v = j.at(key);
  if (!v.is_array() || v.empty() || !v[0].is_array()) {
    throw ValidationError(key + " must be an array of arrays");
  }
  const std::size_t rows = v.size();
  const std::size_t cols = v[0].size();
  Eigen::MatrixXd M(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!v[i].is_array() || v[i].size() != cols) {
      throw ValidationError(key + " rows have inconsistent lengths");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      if (!v[i][c].is_number()) throw ValidationError(key + " entries must be numbers");
      M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = v[i][c].get<double>();
    }
  }
  return M;
}

Eigen::VectorXd parse_vector(const json& j, const std::string& key) {
  const auto& v = j.at(key);
  if (!v.is_array() || (!v.empty() && v[0].is_array())) {
    throw ValidationError(key + " must be a flat array");
  }
  Eigen::VectorXd out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) throw ValidationError(key + " entries must be numbers");
    out(static_cast<Eigen::Index>(i)) = v[i].get<double>();
  }
  return out;
}

json matrix_to_json(const Eigen::MatrixXd& M) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index c = 0; c < M.cols(); ++c) row.push_back(M(i, c));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

double effective_lambda(double lambda_fail, double lambda_success, double p) {
  return lambda_fail * (1.0 - p) + lambda_success * p;
}

Problem Problem::with_p(double new_p) const {
  Problem out = *this;
  out.p = new_p;
  if (out.penalty_split) {
    out.lambda = effective_lambda(out.penalty_split->fail, out.penalty_split->success, new_p);
  }
  return out;
}

Problem Problem::with_horizon(int new_T) const {
  Problem out = *this;
  out.T = new_T;
  return out;
}

Problem Problem::with_lambda(double new_lambda) const {
  Problem out = *this;
  out.lambda = new_lambda;
  out.penalty_split.reset();
  return out;
}

void validate_problem(const Problem& prob) {
  const Eigen::Index n = prob.A.rows();
  if (n == 0) throw ValidationError("A must be nonempty");
  if (prob.A.cols() != n) throw ValidationError("A must be square");
  if (prob.B.rows() != n) throw ValidationError("B row count must match A");
  if (prob.B.cols() == 0) throw ValidationError("B must have at least one column");
  const Eigen::Index m = prob.B.cols();

  check_square(prob.Q, static_cast<int>(n), "Q");
  check_square(prob.Q_T, static_cast<int>(n), "Q_T");
  check_square(prob.Sigma_w, static_cast<int>(n), "Sigma_w");
  check_square(prob.Sigma_0, static_cast<int>(n), "Sigma_0");
  check_square(prob.R, static_cast<int>(m), "R");
  if (prob.x0_mean.size() != n) throw ValidationError("x0_mean length must match A");

  check_sym_psd(prob.Q, "Q");
  check_sym_psd(prob.Q_T, "Q_T");
  check_sym_psd(prob.Sigma_w, "Sigma_w");
  check_sym_psd(prob.Sigma_0, "Sigma_0");
  if (!is_symmetric(prob.R)) throw ValidationError("R not symmetric");
  if (!is_pd(prob.R)) throw ValidationError("R not positive definite");

  if (prob.T < 1) throw ValidationError("T must be at least 1");
  if (!(prob.p > 0.0 && prob.p <= 1.0)) throw ValidationError("p must lie in (0,1]");
  if (prob.penalty_split) {
    if (!(prob.penalty_split->fail > 0.0)) throw ValidationError("lambda_fail must be positive");
    if (!(prob.penalty_split->success > 0.0)) {
      throw ValidationError("lambda_success must be positive");
    }
  }
  if (!(prob.lambda > 0.0)) throw ValidationError("lambda must be positive");
  if (!std::isfinite(prob.lambda)) throw ValidationError("lambda must be finite");
}

Problem load_problem(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config parse error: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("config must be a JSON object");

  static const std::set<std::string> known = {
      "A",       "B",      "Q",      "R",           "Q_T",
      "Sigma_w", "x0_mean", "Sigma_0", "T",          "p",
      "lambda",  "lambda_fail", "lambda_success"};
  for (const auto& item : j.items()) {
    if (known.find(item.key()) == known.end()) {
      throw ValidationError("unknown config key: " + item.key());
    }
  }

  for (const char* key : {"A", "B", "Q", "R", "Q_T", "Sigma_w", "T", "p"}) {
    if (!j.contains(key)) throw ValidationError(std::string("missing config key: ") + key);
  }

  Problem prob;
  prob.A = parse_matrix(j, "A");
  prob.B = parse_matrix(j, "B");
  prob.Q = parse_matrix(j, "Q");
  prob.R = parse_matrix(j, "R");
  prob.Q_T = parse_matrix(j, "Q_T");
  prob.Sigma_w = parse_matrix(j, "Sigma_w");

  const Eigen::Index n = prob.A.rows();
  prob.x0_mean = j.contains("x0_mean") ? parse_vector(j, "x0_mean")
                                       : Eigen::VectorXd::Zero(n).eval();
  prob.Sigma_0 = j.contains("Sigma_0") ? parse_matrix(j, "Sigma_0")
                                       : Eigen::MatrixXd::Zero(n, n).eval();

  if (!j.at("T").is_number_integer()) throw ValidationError("T must be an integer");
  prob.T = j.at("T").get<int>();
  if (!j.at("p").is_number()) throw ValidationError("p must be a number");
  prob.p = j.at("p").get<double>();

  const bool has_single = j.contains("lambda");
  const bool has_split = j.contains("lambda_fail") || j.contains("lambda_success");
  if (has_single && has_split) {
    throw ValidationError("give either lambda or lambda_fail+lambda_success, not both");
  }
  if (has_single) {
    prob.lambda = j.at("lambda").get<double>();
  } else if (j.contains("lambda_fail") && j.contains("lambda_success")) {
    PenaltyPair split{j.at("lambda_fail").get<double>(), j.at("lambda_success").get<double>()};
    prob.penalty_split = split;
    prob.lambda = effective_lambda(split.fail, split.success, prob.p);
  } else {
    throw ValidationError("missing config key: lambda (or lambda_fail+lambda_success)");
  }

  validate_problem(prob);
  return prob;
}

std::string serialize_problem(const Problem& prob) {
  json j;
  j["A"] = matrix_to_json(prob.A);
  j["B"] = matrix_to_json(prob.B);
  j["Q"] = matrix_to_json(prob.Q);
  j["R"] = matrix_to_json(prob.R);
  j["Q_T"] = matrix_to_json(prob.Q_T);
  j["Sigma_w"] = matrix_to_json(prob.Sigma_w);
  json x0 = json::array();
  for (Eigen::Index i = 0; i < prob.x0_mean.size(); ++i) x0.push_back(prob.x0_mean(i));
  j["x0_mean"] = x0;
  j["Sigma_0"] = matrix_to_json(prob.Sigma_0);
  j["T"] = prob.T;
  j["p"] = prob.p;
  if (prob.penalty_split) {
    j["lambda_fail"] = prob.penalty_split->fail;
    j["lambda_success"] = prob.penalty_split->success;
  } else {
    j["lambda"] = prob.lambda;
  }
  return j.dump(2);
}

Problem boeing747_preset(double sigma2) {
  Problem prob;
  prob.A.resize(4, 4);
  prob.A << 0.99, 0.03, -0.02, -0.32,
            0.01, 0.47, 4.70, 0.00,
            0.02, -0.06, 0.40, 0.00,
            0.01, -0.04, 0.72, 0.99;
  prob.B.resize(4, 2);
  prob.B << 0.01, 0.99,
            -3.44, 1.66,
            -0.83, 0.44,
            -0.47, 0.25;
  prob.Q = 5.0 * Eigen::MatrixXd::Identity(4, 4);
  prob.R = Eigen::MatrixXd::Identity(2, 2);
  prob.Q_T = 5.0 * Eigen::MatrixXd::Identity(4, 4);
  prob.Sigma_w = sigma2 * Eigen::MatrixXd::Identity(4, 4);
  prob.x0_mean = Eigen::VectorXd::Constant(4, 0.5);
  prob.Sigma_0 = 0.4 * Eigen::MatrixXd::Identity(4, 4);
  prob.T = 50;
  prob.p = 0.7;
  prob.lambda = 100.0;
  validate_problem(prob);
  return prob;
}

}  // namespace etlqg
