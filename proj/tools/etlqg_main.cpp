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
//
// Command-line surface. Every subcommand is a thin shell over the library:
// it parses flags, loads the instance, calls one operation and writes the
// documented CSV/LP files. No numeric logic lives here.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "etlqg/csv.hpp"
#include "etlqg/milp.hpp"
#include "etlqg/problem.hpp"
#include "etlqg/riccati.hpp"
#include "etlqg/scheduler.hpp"
#include "etlqg/sim.hpp"

namespace fs = std::filesystem;
using namespace etlqg;

namespace {

constexpr std::uint64_t kDefaultSeed0 = 12345;

std::uint64_t base_seed() {
  if (const char* env = std::getenv("ETLQG_SEED0")) {
    return std::strtoull(env, nullptr, 10);
  }
  return kDefaultSeed0;
}

struct Options {
  std::string config_path;
  std::string out_dir = ".";
  bool force = false;
  std::uint64_t seed = base_seed();
  int seeds = 100;
  int jobs = 1;
  std::string policy = "mpc";
  double p_override = -1.0;       // <0: keep config value
  double lambda_override = -1.0;  // <0: keep config value
  int horizon = -1;               // <0: full horizon
  std::string es_csv;
  bool use_enumerate = false;
  double sigma2 = 1.0;
  std::vector<double> grid = {0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
};

Problem load_instance(const Options& opt) {
  Problem prob;
  if (opt.config_path.empty()) {
    prob = boeing747_preset(opt.sigma2);
  } else {
    if (!fs::exists(opt.config_path)) {
      throw ValidationError("config path does not exist: " + opt.config_path);
    }
    std::ifstream in(opt.config_path);
    std::stringstream buf;
    buf << in.rdbuf();
    prob = load_problem(buf.str());
  }
  if (opt.p_override >= 0.0) prob = prob.with_p(opt.p_override);
  if (opt.lambda_override >= 0.0) prob = prob.with_lambda(opt.lambda_override);
  validate_problem(prob);
  return prob;
}

Eigen::VectorXd parse_es(const std::string& csv, int n) {
  if (csv.empty()) return Eigen::VectorXd::Zero(n);
  std::vector<double> vals;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      vals.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ValidationError("--es entries must be numbers");
    }
  }
  if (static_cast<int>(vals.size()) != n) {
    throw ValidationError("--es must have " + std::to_string(n) + " entries");
  }
  Eigen::VectorXd e(n);
  for (int i = 0; i < n; ++i) e(i) = vals[static_cast<std::size_t>(i)];
  return e;
}

// Window start for commands that operate on [k, T): the last `horizon` steps.
int window_start(const Problem& prob, const Options& opt) {
  if (opt.horizon < 0) return 0;
  if (opt.horizon < 1 || opt.horizon > prob.T) {
    throw ValidationError("--horizon must lie in [1, T]");
  }
  return prob.T - opt.horizon;
}

void write_file(const fs::path& path, const std::string& content, bool force) {
  if (fs::exists(path) && !force) {
    throw ValidationError("output file exists (use --force to overwrite): " + path.string());
  }
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open output file: " + path.string());
  out << content;
}

void cmd_riccati(const Options& opt) {
  const Problem prob = load_instance(opt);
  const RiccatiSolution sol = solve_riccati(prob);
  const fs::path out(opt.out_dir);
  write_file(out / "riccati_P.csv", matrix_series_csv(sol.P), opt.force);
  write_file(out / "riccati_L.csv", matrix_series_csv(sol.L), opt.force);
  write_file(out / "riccati_Gamma.csv", matrix_series_csv(sol.Gamma), opt.force);
  write_file(out / "riccati_W.csv", matrix_series_csv(sol.W), opt.force);
  std::cout << "wrote riccati_{P,L,Gamma,W}.csv to " << out.string() << "\n";
}

void cmd_certify(const Options& opt) {
  const Problem prob = load_instance(opt);
  const RiccatiSolution sol = solve_riccati(prob);
  const int k = window_start(prob, opt);
  const Eigen::VectorXd e_s = parse_es(opt.es_csv, prob.state_dim());
  const CertificateOutcome res = certify(e_s, sol.Gamma[k], sol.W[k], prob.p, prob.lambda);
  const char* names[] = {"attempt", "skip", "ambiguous"};
  std::cout << "k: " << k << "\n"
            << "decision: " << names[static_cast<int>(res.decision)] << "\n"
            << "attempt_stat: " << format_double(res.attempt_stat) << "\n"
            << "skip_stat: " << format_double(res.skip_stat) << "\n"
            << "lambda: " << format_double(res.lambda) << "\n";
}

void cmd_schedule(const Options& opt) {
  const Problem prob = load_instance(opt);
  const RiccatiSolution sol = solve_riccati(prob);
  const int k = window_start(prob, opt);
  const int H = prob.T - k;
  const Eigen::VectorXd e_s = parse_es(opt.es_csv, prob.state_dim());
  const GramianTable table = build_tables(prob, sol, k, e_s);

  const SolveResult res = opt.use_enumerate ? solve_enumerate(table, prob.p, H)
                                            : solve_bnb(table, prob.p, H);
  const CertificateOutcome cert = certify(e_s, sol.Gamma[k], sol.W[k], prob.p, prob.lambda);

  std::string theta;
  for (auto t : res.schedule.theta) theta += t ? '1' : '0';
  const char* names[] = {"attempt", "skip", "ambiguous"};
  std::cout << "k: " << k << "\n"
            << "theta: " << theta << "\n"
            << "cost: " << format_double(res.cost) << "\n"
            << "attempts: " << res.schedule.attempts() << "\n"
            << "nodes: " << res.nodes_explored << "\n"
            << "proof: " << (res.proof == Proof::Optimal ? "optimal" : "enumerated") << "\n"
            << "certificate: " << names[static_cast<int>(cert.decision)] << "\n"
            << "attempt_stat: " << format_double(cert.attempt_stat) << "\n"
            << "skip_stat: " << format_double(cert.skip_stat) << "\n";
}

void cmd_export_milp(const Options& opt) {
  const Problem prob = load_instance(opt);
  const RiccatiSolution sol = solve_riccati(prob);
  const int k = window_start(prob, opt);
  const int H = prob.T - k;
  const Eigen::VectorXd e_s = parse_es(opt.es_csv, prob.state_dim());
  const GramianTable table = build_tables(prob, sol, k, e_s);
  const MilpModel model = build_milp(table, prob.p, prob.lambda, H);

  const fs::path path = fs::path(opt.out_dir) / ("model_k" + std::to_string(k) + ".lp");
  write_file(path, export_lp(model), opt.force);
  std::cout << "wrote " << path.string() << " (" << model.num_theta() << " theta, "
            << model.num_counters() << " counters, " << model.num_selectors()
            << " selectors)\n";
}

Policy parse_policy(const std::string& name) {
  if (name == "mpc") return Policy::Mpc;
  if (name == "oneshot") return Policy::OneShot;
  throw ValidationError("--policy must be mpc or oneshot");
}

void cmd_simulate(const Options& opt) {
  const Problem prob = load_instance(opt);
  const RiccatiSolution sol = solve_riccati(prob);
  const Policy policy = parse_policy(opt.policy);
  const RunRecord run = simulate_run(prob, sol, policy, opt.seed);

  const fs::path path = fs::path(opt.out_dir) /
                        ("trace_" + policy_name(policy) + "_seed" + std::to_string(opt.seed) +
                         ".csv");
  write_file(path, trace_csv(run), opt.force);
  std::cout << "wrote " << path.string() << "\n"
            << "attempts: " << run.attempts << "\nsuccesses: " << run.successes
            << "\nlqg_cost: " << format_double(run.lqg_cost)
            << "\ncomm_cost: " << format_double(run.comm_cost)
            << "\ntotal: " << format_double(run.total) << "\n";
}

void cmd_montecarlo(const Options& opt) {
  const Problem prob = load_instance(opt);
  const RiccatiSolution sol = solve_riccati(prob);
  const Policy policy = parse_policy(opt.policy);
  const AggregateStats stats = monte_carlo(prob, sol, policy, opt.seeds, opt.seed, opt.jobs);

  const fs::path path = fs::path(opt.out_dir) / ("aggregate_" + policy_name(policy) + ".csv");
  write_file(path, aggregate_csv_header() + aggregate_csv_row(policy, prob.p, stats), opt.force);
  std::cout << "wrote " << path.string() << "\nmean_total: " << format_double(stats.mean_total)
            << "\nmean_attempts: " << format_double(stats.mean_attempts) << "\n";
}

void cmd_sweep_p(const Options& opt) {
  const Problem prob = load_instance(opt);
  const auto rows = sweep_p(prob, opt.grid, opt.seeds, opt.seed, opt.jobs);

  std::string csv = aggregate_csv_header();
  for (const auto& row : rows) csv += aggregate_csv_row(row.policy, row.p, row.stats);
  const fs::path path = fs::path(opt.out_dir) / "sweep_p.csv";
  write_file(path, csv, opt.force);
  std::cout << "wrote " << path.string() << "\n";
}

void cmd_bench747(const Options& opt) {
  const Problem prob = boeing747_preset(opt.sigma2)
                           .with_p(opt.p_override >= 0.0 ? opt.p_override : 0.7);
  const RiccatiSolution sol = solve_riccati(prob);

  const auto oneshot = monte_carlo_runs(prob, sol, Policy::OneShot, opt.seeds, opt.seed, opt.jobs);
  const auto mpc = monte_carlo_runs(prob, sol, Policy::Mpc, opt.seeds, opt.seed, opt.jobs);
  const AggregateStats stats_oneshot = aggregate(oneshot);
  const AggregateStats stats_mpc = aggregate(mpc);

  const fs::path out(opt.out_dir);

  // Single-run table for the base seed, then the averaged table.
  std::string t1 = "policy,seed,successes,comm_cost,lqg_cost,total\n";
  for (const RunRecord* run : {&oneshot.front(), &mpc.front()}) {
    t1 += policy_name(run->policy) + "," + std::to_string(run->seed) + "," +
          std::to_string(run->successes) + "," + format_double(run->comm_cost) + "," +
          format_double(run->lqg_cost) + "," + format_double(run->total) + "\n";
  }
  write_file(out / "table1.csv", t1, opt.force);

  std::string t2 = aggregate_csv_header();
  t2 += aggregate_csv_row(Policy::OneShot, prob.p, stats_oneshot);
  t2 += aggregate_csv_row(Policy::Mpc, prob.p, stats_mpc);
  write_file(out / "table2.csv", t2, opt.force);

  write_file(out / "fig6_frequency.csv",
             frequency_csv(stats_oneshot.attempt_frequency, stats_mpc.attempt_frequency),
             opt.force);

  std::string per_seed = "policy,seed,attempts,successes,comm_cost,lqg_cost,total\n";
  for (const auto* runs : {&oneshot, &mpc}) {
    for (const auto& run : *runs) {
      per_seed += policy_name(run.policy) + "," + std::to_string(run.seed) + "," +
                  std::to_string(run.attempts) + "," + std::to_string(run.successes) + "," +
                  format_double(run.comm_cost) + "," + format_double(run.lqg_cost) + "," +
                  format_double(run.total) + "\n";
    }
  }
  write_file(out / "per_seed.csv", per_seed, opt.force);

  int wins = 0;
  for (std::size_t i = 0; i < mpc.size(); ++i) wins += mpc[i].total < oneshot[i].total;
  std::cout << "wrote table1.csv, table2.csv, fig6_frequency.csv, per_seed.csv to "
            << out.string() << "\n"
            << "mpc mean_total: " << format_double(stats_mpc.mean_total) << "\n"
            << "oneshot mean_total: " << format_double(stats_oneshot.mean_total) << "\n"
            << "mpc mean_attempts: " << format_double(stats_mpc.mean_attempts) << "\n"
            << "oneshot mean_attempts: " << format_double(stats_oneshot.mean_attempts) << "\n"
            << "paired win rate: " << format_double(double(wins) / double(mpc.size())) << "\n";
}

void cmd_bounds(const Options& opt) {
  const Problem prob = load_instance(opt);
  const RiccatiSolution sol = solve_riccati(prob);
  const int k = window_start(prob, opt);
  const int H = prob.T - k;
  const Eigen::VectorXd e_s = parse_es(opt.es_csv, prob.state_dim());
  const GramianTable table = build_tables(prob, sol, k, e_s);

  const SolveResult opt1 = solve_bnb(table, 1.0, H);
  const SolveResult optp = solve_bnb(table, prob.p, H);
  const RatioBounds rb = ratio_bounds(opt1.schedule, optp.schedule, table, prob.p);

  std::cout << "k: " << k << "\np: " << format_double(prob.p)
            << "\nJ_p_star: " << format_double(optp.cost)
            << "\nJ_1_star: " << format_double(opt1.cost)
            << "\nratio: " << format_double(rb.ratio)
            << "\nlower: " << format_double(rb.lower)
            << "\nupper: " << format_double(rb.upper) << "\nC_max: " << rb.C_max << "\n";
}

void add_common(CLI::App* cmd, Options& opt, bool with_config = true) {
  if (with_config) {
    cmd->add_option("--config", opt.config_path, "JSON instance (default: Boeing 747 preset)");
    cmd->add_option("--p", opt.p_override, "override channel success probability");
    cmd->add_option("--lambda", opt.lambda_override, "override communication penalty");
  }
  cmd->add_option("--sigma2", opt.sigma2, "preset process-noise variance (default 1.0)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Event-triggered LQG scheduling over a packet-erasure channel"};
  app.require_subcommand(1);
  Options opt;

  auto* riccati = app.add_subcommand("riccati", "dump P, L, Gamma, W as CSV");
  add_common(riccati, opt);
  riccati->add_option("--out", opt.out_dir, "output directory");
  riccati->add_flag("--force", opt.force, "overwrite existing outputs");

  auto* schedule = app.add_subcommand("schedule", "solve one window from a given e_s");
  add_common(schedule, opt);
  schedule->add_option("--horizon", opt.horizon, "window length (window is the last H steps)");
  schedule->add_option("--es", opt.es_csv, "scheduler-side error, comma-separated");
  schedule->add_flag("--enumerate", opt.use_enumerate, "exhaustive enumeration (H <= 22)");

  auto* certify_cmd = app.add_subcommand("certify", "one-step certificate statistics");
  add_common(certify_cmd, opt);
  certify_cmd->add_option("--horizon", opt.horizon, "window length");
  certify_cmd->add_option("--es", opt.es_csv, "scheduler-side error, comma-separated");

  auto* export_milp = app.add_subcommand("export-milp", "write the window MILP as an .lp file");
  add_common(export_milp, opt);
  export_milp->add_option("--horizon", opt.horizon, "window length");
  export_milp->add_option("--es", opt.es_csv, "scheduler-side error, comma-separated");
  export_milp->add_option("--out", opt.out_dir, "output directory");
  export_milp->add_flag("--force", opt.force, "overwrite existing outputs");

  auto* simulate = app.add_subcommand("simulate", "one seed, one policy, trace CSV");
  add_common(simulate, opt);
  simulate->add_option("--policy", opt.policy, "mpc or oneshot");
  simulate->add_option("--seed", opt.seed, "run seed (default ETLQG_SEED0 or 12345)");
  simulate->add_option("--out", opt.out_dir, "output directory");
  simulate->add_flag("--force", opt.force, "overwrite existing outputs");

  auto* montecarlo = app.add_subcommand("montecarlo", "seeded Monte Carlo aggregate CSV");
  add_common(montecarlo, opt);
  montecarlo->add_option("--policy", opt.policy, "mpc or oneshot");
  montecarlo->add_option("--seed", opt.seed, "base seed");
  montecarlo->add_option("--seeds", opt.seeds, "number of seeds");
  montecarlo->add_option("--jobs", opt.jobs, "worker threads");
  montecarlo->add_option("--out", opt.out_dir, "output directory");
  montecarlo->add_flag("--force", opt.force, "overwrite existing outputs");

  auto* sweep = app.add_subcommand("sweep-p", "both policies over a p grid");
  add_common(sweep, opt);
  sweep->add_option("--grid", opt.grid, "p grid")->delimiter(',');
  sweep->add_option("--seed", opt.seed, "base seed");
  sweep->add_option("--seeds", opt.seeds, "number of seeds per grid point");
  sweep->add_option("--jobs", opt.jobs, "worker threads");
  sweep->add_option("--out", opt.out_dir, "output directory");
  sweep->add_flag("--force", opt.force, "overwrite existing outputs");

  auto* bench = app.add_subcommand("bench747", "full Boeing 747 experiment, both policies");
  bench->add_option("--sigma2", opt.sigma2, "process-noise variance (default 1.0)");
  bench->add_option("--p", opt.p_override, "override channel success probability");
  bench->add_option("--seed", opt.seed, "base seed");
  bench->add_option("--seeds", opt.seeds, "number of seeds (default 100)");
  bench->add_option("--jobs", opt.jobs, "worker threads");
  bench->add_option("--out", opt.out_dir, "output directory");
  bench->add_flag("--force", opt.force, "overwrite existing outputs");

  auto* bounds = app.add_subcommand("bounds", "lossless-ratio bound report for one window");
  add_common(bounds, opt);
  bounds->add_option("--horizon", opt.horizon, "window length");
  bounds->add_option("--es", opt.es_csv, "scheduler-side error, comma-separated");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (riccati->parsed()) cmd_riccati(opt);
    if (schedule->parsed()) cmd_schedule(opt);
    if (certify_cmd->parsed()) cmd_certify(opt);
    if (export_milp->parsed()) cmd_export_milp(opt);
    if (simulate->parsed()) cmd_simulate(opt);
    if (montecarlo->parsed()) cmd_montecarlo(opt);
    if (sweep->parsed()) cmd_sweep_p(opt);
    if (bench->parsed()) cmd_bench747(opt);
    if (bounds->parsed()) cmd_bounds(opt);
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
