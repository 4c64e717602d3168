// Copyright 2026 The Campaign MPE Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// campaign-mpe: validate, solve, certify, report, simulate and serve campaign
// scenarios.
//
// Exit codes: 0 success, 1 validation failure, 2 non-convergence,
// 3 certification failure.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "campaign/analysis.h"
#include "campaign/scenario_io.h"
#include "campaign/service.h"
#include "campaign/solver.h"
#include "campaign/state_space.h"
#include "campaign/transitions.h"

namespace {

using namespace campaign;

constexpr int kOk = 0;
constexpr int kValidationFailure = 1;
constexpr int kNonConvergence = 2;
constexpr int kCertificationFailure = 3;

int cmd_validate(const std::string& path, const std::string& mode, std::size_t samples,
                 std::uint64_t seed) {
  const Scenario sc = load_scenario(path);
  const Campaign& c = sc.campaign;
  const StateSpace space(c);
  std::cout << "scenario      " << path << "\n";
  if (!sc.name.empty()) std::cout << "name          " << sc.name << "\n";
  std::cout << "digest        " << scenario_digest(sc) << "\n";
  std::cout << "objectives    " << c.num_objectives() << "\n";
  std::cout << "axes          " << c.num_axes() << " (";
  for (std::size_t x = 0; x < c.num_axes(); ++x) {
    std::cout << (x ? "," : "") << c.axes()[x].objectives.size();
  }
  std::cout << ")\n";
  std::cout << "commanders    " << c.num_commanders() << "\n";
  std::cout << "states        " << space.size() << "\n";
  std::cout << "initial state " << sc.initial_state.to_string() << " ("
            << validate_initial_state(c, sc.initial_state).message() << ")\n";

  ValidationOptions opts;
  if (mode == "sampled") {
    opts.mode = ValidationOptions::Mode::kSampled;
  } else if (mode != "exhaustive") {
    throw CLI::ValidationError("--mode", "expected exhaustive or sampled");
  }
  opts.samples = samples;
  opts.seed = seed;
  const AssumptionReport rep = validate_assumptions(c, opts);
  std::cout << "checked       " << rep.states_checked << " states, " << rep.pairs_checked
            << " flip pairs\n";
  std::cout << "assumption 1  " << (rep.assumption1_ok() ? "ok" : "VIOLATED") << " ("
            << rep.assumption1_errors << " errors)\n";
  std::cout << "assumption 2  " << (rep.assumption2_ok() ? "ok" : "VIOLATED") << " ("
            << rep.assumption2_errors << " errors)\n";
  std::cout << "assumption 3  ok\n";
  if (rep.warnings > 0) std::cout << "warnings      " << rep.warnings << "\n";
  std::cout << "strictness    " << (rep.strictness_holds ? "holds" : "does not hold") << "\n";
  for (const auto& f : rep.strictness_failures) std::cout << "  " << f << "\n";
  const std::size_t shown = std::min<std::size_t>(rep.violations.size(), 10);
  for (std::size_t i = 0; i < shown; ++i) std::cout << "  " << rep.violations[i].describe() << "\n";
  if (rep.violations.size() > shown) {
    std::cout << "  ... " << rep.violations.size() - shown << " more recorded\n";
  }
  return rep.ok() ? kOk : kValidationFailure;
}

int cmd_solve(const std::string& path, double epsilon, const std::string& algo,
              const std::string& out, std::size_t workers) {
  const Scenario sc = load_scenario(path);
  SolveOptions opts;
  opts.epsilon = epsilon;
  opts.algorithm = algorithm_from_string(algo);
  opts.workers = workers;
  const Solution sol = solve(sc.campaign, opts);
  const SolveReport& r = sol.report;
  std::printf("algorithm   %s\n", to_string(r.algorithm).c_str());
  std::printf("states      %zu\n", r.num_states);
  std::printf("max actions %zu / %zu\n", r.max_actions_p1, r.max_actions_p2);
  std::printf("iterations  %zu (bound %zu)\n", r.iterations, iteration_bound(sc.campaign, epsilon));
  std::printf("last step   %.3e\n", r.final_sup_delta);
  std::printf("pure/LP     %zu / %zu\n", r.pure_saddle_hits, r.lp_solves);
  std::printf("runtime     %.3f s\n", r.wallclock_seconds);
  const StateSpace space(sc.campaign);
  std::printf("V(%s) = %.6f\n", sc.initial_state.to_string().c_str(),
              sol.values[space.encode(sc.initial_state)]);
  if (!out.empty()) {
    save_solution(sc, sol, out);
    std::printf("wrote       %s\n", out.c_str());
  }
  return kOk;
}

int cmd_certify(const std::string& path, const std::string& solution_path, double epsilon,
                std::size_t workers) {
  const Scenario sc = load_scenario(path);
  const SolutionFile file = load_solution(solution_path, sc);
  CertificationOptions opts;
  opts.workers = workers;
  const CertificationReport rep =
      certify_epsilon_mpe(sc.campaign, file.solution.policy, epsilon, opts);
  const StateSpace space(sc.campaign);
  std::printf("epsilon          %g\n", rep.epsilon_claimed);
  std::printf("gain player 1    %.3e\n", rep.max_deviation_gain_p1);
  std::printf("gain player 2    %.3e\n", rep.max_deviation_gain_p2);
  std::printf("worst state      %s (player %d)\n",
              space.decode(rep.worst_state).to_string().c_str(), to_int(rep.worst_player));
  std::printf("certified        %s\n", rep.certified() ? "yes" : "NO");
  return rep.certified() ? kOk : kCertificationFailure;
}

std::vector<CampaignState> parse_states(const std::vector<std::string>& texts,
                                        const Scenario& sc) {
  std::vector<CampaignState> states;
  for (const auto& t : texts) states.push_back(CampaignState::from_string(t));
  if (states.empty()) states.push_back(sc.initial_state);
  return states;
}

int cmd_report(const std::string& path, const std::string& solution_path,
               const std::vector<std::string>& states) {
  const Scenario sc = load_scenario(path);
  const SolutionFile file = load_solution(solution_path, sc);
  std::cout << report(sc, file.solution, parse_states(states, sc));
  return kOk;
}

int cmd_simulate(const std::string& path, const std::string& solution_path,
                 const std::string& state, std::size_t episodes, std::uint64_t seed,
                 std::size_t horizon, std::size_t workers) {
  const Scenario sc = load_scenario(path);
  const SolutionFile file = load_solution(solution_path, sc);
  const CampaignState start = state.empty() ? sc.initial_state : CampaignState::from_string(state);
  const std::size_t h = horizon == 0 ? default_horizon(sc.campaign) : horizon;
  const MonteCarloEstimate est =
      monte_carlo(sc.campaign, file.solution.policy, start, episodes, seed, h, workers);
  const ValueFunction exact = evaluate_policy(sc.campaign, file.solution.policy, 1e-10, workers);
  const StateSpace space(sc.campaign);
  const double v = exact[space.encode(start)];
  std::printf("start            %s\n", start.to_string().c_str());
  std::printf("episodes         %zu (horizon %zu, seed %llu)\n", est.episodes, h,
              static_cast<unsigned long long>(seed));
  std::printf("mean loss        %.6f +- %.6f\n", est.mean, est.standard_error);
  std::printf("policy value     %.6f\n", v);
  std::printf("z-score          %.3f\n",
              est.standard_error > 0 ? (est.mean - v) / est.standard_error : 0.0);
  return kOk;
}

int cmd_serve(const std::string& path, const std::string& solution_path, const std::string& host,
              int port, double epsilon) {
  Scenario sc = load_scenario(path);
  Solution sol;
  if (solution_path.empty()) {
    std::fprintf(stderr, "no solution given; solving with epsilon %g\n", epsilon);
    SolveOptions opts;
    opts.epsilon = epsilon;
    sol = solve(sc.campaign, opts);
  } else {
    sol = load_solution(solution_path, sc).solution;
  }
  CampaignService service(std::move(sc), std::move(sol));
  HttpServer server(service);
  const int bound = server.bind(host, port);
  std::fprintf(stderr, "serving %s on http://%s:%d\n", service.digest().c_str(), host.c_str(),
               bound);
  server.listen();
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equilibrium analysis of discounted zero-sum campaign games"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "campaign-mpe 1.0.0");

  std::string scenario;
  std::string solution;
  std::string mode = "exhaustive";
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
  double epsilon = 1e-3;
  std::string algo = "avi";
  std::string out;
  std::size_t workers = 0;
  std::vector<std::string> states;
  std::string state;
  std::size_t episodes = 10000;
  std::size_t horizon = 0;
  std::string host = "127.0.0.1";
  int port = 8080;

  auto* validate = app.add_subcommand("validate", "Check structure and model assumptions");
  validate->add_option("scenario", scenario, "Scenario file")->required();
  validate->add_option("--mode", mode, "exhaustive or sampled")
      ->check(CLI::IsMember({"exhaustive", "sampled"}));
  validate->add_option("--samples", samples, "States sampled in sampled mode");
  validate->add_option("--seed", seed, "Sampling seed");

  auto* solve_cmd = app.add_subcommand("solve", "Compute an epsilon-equilibrium");
  solve_cmd->add_option("scenario", scenario, "Scenario file")->required();
  solve_cmd->add_option("--epsilon", epsilon, "Equilibrium accuracy")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--algo", algo, "vi or avi")->check(CLI::IsMember({"vi", "avi"}));
  solve_cmd->add_option("--out", out, "Solution file to write");
  solve_cmd->add_option("--workers", workers, "Worker threads (0 = all cores)");

  auto* certify = app.add_subcommand("certify", "Verify a solution by best responses");
  certify->add_option("scenario", scenario, "Scenario file")->required();
  certify->add_option("solution", solution, "Solution file")->required();
  certify->add_option("--epsilon", epsilon, "Claimed accuracy")->check(CLI::PositiveNumber);
  certify->add_option("--workers", workers, "Worker threads (0 = all cores)");

  auto* report_cmd = app.add_subcommand("report", "Print value and strategy tables");
  report_cmd->add_option("scenario", scenario, "Scenario file")->required();
  report_cmd->add_option("solution", solution, "Solution file")->required();
  report_cmd->add_option("--state", states, "State vectors (default: initial state)");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo play of the solved profile");
  simulate->add_option("scenario", scenario, "Scenario file")->required();
  simulate->add_option("solution", solution, "Solution file")->required();
  simulate->add_option("--state", state, "Start state (default: initial state)");
  simulate->add_option("--episodes", episodes, "Episodes")->check(CLI::PositiveNumber);
  simulate->add_option("--seed", seed, "Seed");
  simulate->add_option("--horizon", horizon, "Stages per episode (0 = automatic)");
  simulate->add_option("--workers", workers, "Worker threads (0 = all cores)");

  auto* serve = app.add_subcommand("serve", "Run the HTTP play/query service");
  serve->add_option("scenario", scenario, "Scenario file")->required();
  serve->add_option("solution", solution, "Solution file (solved on startup if absent)");
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--port", port, "Port")->check(CLI::Range(0, 65535));
  serve->add_option("--epsilon", epsilon, "Accuracy when solving on startup");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Help and version exit 0; usage errors count as validation failures.
    return app.exit(e) == 0 ? kOk : kValidationFailure;
  }

  try {
    if (*validate) return cmd_validate(scenario, mode, samples, seed);
    if (*solve_cmd) return cmd_solve(scenario, epsilon, algo, out, workers);
    if (*certify) return cmd_certify(scenario, solution, epsilon, workers);
    if (*report_cmd) return cmd_report(scenario, solution, states);
    if (*simulate) return cmd_simulate(scenario, solution, state, episodes, seed, horizon, workers);
    if (*serve) return cmd_serve(scenario, solution, host, port, epsilon);
  } catch (const ScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidationFailure;
  } catch (const NonConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNonConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidationFailure;
  }
  return kOk;
}
