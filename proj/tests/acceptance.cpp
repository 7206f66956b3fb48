// Acceptance gate: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "plantmarket/plantmarket.hpp"

namespace fs = std::filesystem;
using namespace plantmarket;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail) {
  if (!ok) ++failures;
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << id << ": " << what << " [" << detail << "]" << std::endl;
}

std::string num(double x) {
  std::ostringstream os;
  os.precision(8);
  os << x;
  return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool feasible_everywhere(const ExperimentSpec& spec, const ProductionPlan& plan) {
  for (std::size_t s = 1; s <= spec.scenarios.size(); ++s)
    if (evaluate(spec.problem(s), plan).penalty() != 0.0) return false;
  return true;
}

std::vector<ProductionPlan> feasible_plans(const ExperimentSpec& spec, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<ProductionPlan> plans;
  const auto pb = spec.problem(1);
  while (plans.size() < count) {
    auto plan = fixtures::random_plan(pb, rng, 0.6);
    if (feasible_everywhere(spec, plan)) plans.push_back(std::move(plan));
  }
  return plans;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int shell(const std::string& args) {
  const std::string cmd = std::string(PLANTMARKET_CLI) + " " + args + " > /dev/null 2>&1";
  return std::system(cmd.c_str());
}

void criterion_1() {
  const auto pb = fixtures::toy_problem();
  const double grid = oracle::grid_optimum_one_plant_two_fuels(pb, 200);
  const auto t0 = std::chrono::steady_clock::now();
  GaConfig ga;
  ga.population = 60;
  ga.iterations = 150;
  PsoConfig pso;
  pso.population = 60;
  pso.iterations = 150;
  const double f_ga = ga_solve(pb, Market::Collusion, ga).best_fitness;
  const double f_pso = pso_solve(pb, Market::Collusion, pso).best_fitness;
  const double secs = seconds_since(t0);
  const double tol = 0.005 * std::abs(grid);
  const bool ok = f_ga >= grid - tol && f_pso >= grid - tol && secs < 60.0;
  report(1, ok, "GA and PSO within 0.5% of the grid optimum on one plant, two fuels",
         "grid " + num(grid) + ", ga " + num(f_ga) + ", pso " + num(f_pso) + ", " + num(secs) + " s");
}

// Mean of a metric per scenario for one market, using the given solver.
std::vector<double> per_scenario_mean(const RunReport& r, std::size_t scenarios, Market m, SolverKind s,
                                      const std::string& metric) {
  std::vector<double> out;
  for (std::size_t k = 1; k <= scenarios; ++k) out.push_back(r.summary({k, m, s}, metric).mean);
  return out;
}

void criteria_2_3_9() {
  const auto spec = builtin_paper_example();
  const auto t0 = std::chrono::steady_clock::now();
  const auto report_all = run_matrix(spec);
  const double secs = seconds_since(t0);
  const std::size_t n = spec.scenarios.size();

  // 2: scenario monotonicity of mean best total profit
  {
    bool ok = secs < 600.0;
    std::string detail;
    for (Market m : {Market::Collusion, Market::Competitive}) {
      const auto means = per_scenario_mean(report_all, n, m, SolverKind::Pso, "total_profit");
      detail += std::string(to_string(m)) + ":";
      for (std::size_t k = 0; k < n; ++k) {
        detail += " " + num(means[k]);
        if (k > 0 && means[k] > means[k - 1] + 0.01 * std::abs(means[k - 1])) ok = false;
      }
      detail += "; ";
    }
    report(2, ok, "mean best total profit non-increasing over scenarios 1..6 in both markets (PSO, 5 reps)",
           detail + num(secs) + " s for the full matrix");
  }

  // 3: collusion dominance on best-found total profit
  {
    bool ok = true;
    std::string detail;
    for (std::size_t k = 1; k <= n; ++k) {
      double best[2] = {-INFINITY, -INFINITY};
      for (const auto& row : report_all.rows)
        if (row.cell.scenario == k) {
          auto& b = best[row.cell.market == Market::Collusion ? 0 : 1];
          b = std::max(b, row.total_profit);
        }
      if (best[0] < best[1] - 0.01 * std::abs(best[1])) ok = false;
      detail += "s" + std::to_string(k) + " " + num(best[0]) + " vs " + num(best[1]) + (k < n ? "; " : "");
    }
    report(3, ok, "best collusion total profit >= best competitive - 1% at every scenario", detail);
  }

  // 9: fuel-oil falls from scenario 1 to 6, gas roughly constant
  {
    bool ok = true;
    std::string detail;
    for (Market m : {Market::Collusion, Market::Competitive}) {
      const auto oil = per_scenario_mean(report_all, n, m, SolverKind::Pso, "fuel_use_1");
      const auto gas = per_scenario_mean(report_all, n, m, SolverKind::Pso, "fuel_use_3");
      const auto [lo, hi] = std::minmax_element(gas.begin(), gas.end());
      double gas_mean = 0;
      for (double g : gas) gas_mean += g / gas.size();
      const double spread = (*hi - *lo) / gas_mean;
      if (!(oil.back() <= oil.front())) ok = false;
      if (!(spread < 0.05)) ok = false;
      detail += std::string(to_string(m)) + ": fuel-oil " + num(oil.front()) + " -> " + num(oil.back()) +
                ", gas spread " + num(100 * spread) + "%; ";
    }
    report(9, ok, "fuel-oil at scenario 6 <= scenario 1 and gas varies < 5% across scenarios (PSO)", detail);
  }
}

void criterion_4() {
  const auto spec = builtin_paper_example();
  const auto plans = feasible_plans(spec, 100, 4);
  std::size_t checks = 0, bad = 0;
  for (const auto& plan : plans) {
    for (std::size_t s = 1; s < spec.scenarios.size(); ++s) {
      const auto a = evaluate(spec.problem(s), plan);
      const auto b = evaluate(spec.problem(s + 1), plan);
      for (std::size_t i = 0; i < spec.plants.size(); ++i) {
        // every fuel emits something, so each plant's emissions are positive
        ++checks;
        if (!(b.profit[i] < a.profit[i])) ++bad;
      }
    }
  }
  report(4, bad == 0, "per-plant profit strictly decreasing in external costs on 100 random feasible plans",
         std::to_string(checks) + " comparisons, " + std::to_string(bad) + " violations");
}

void criterion_5() {
  const auto spec = builtin_paper_example();
  const auto plans = feasible_plans(spec, 100, 5);
  std::size_t nonzero_on_feasible = 0;
  for (const auto& plan : plans)
    if (evaluate(spec.problem(1), plan).penalty() != 0.0) ++nonzero_on_feasible;

  // single violations: lower one limit to 80% of the plan's value
  std::size_t weak = 0, not_single = 0;
  for (std::size_t n = 0; n < plans.size(); ++n) {
    auto pb = spec.problem(1 + n % 6);
    const auto& plan = plans[n];
    const auto state = evaluate_constraints(pb, plan);
    const std::size_t idx = (n / 3) % 3;
    switch (n % 3) {
      case 0: pb.scenario.cap[idx] = 0.8 * state.emissions[idx] / pb.scenario.cap_unit_multiplier; break;
      case 1: pb.fuels[idx].availability = 0.8 * state.fuel_consumed[idx]; break;
      default: pb.plants[idx].p_max = 0.8 * plan.plant_total(idx); break;
    }
    const auto br = penalty(evaluate_constraints(pb, plan), pb);
    std::size_t violated = 0;
    for (const auto* v : {&br.emission, &br.fuel, &br.capacity})
      for (double x : *v) violated += x > 0.0;
    if (violated != 1) ++not_single;
    if (!(br.total() >= 1e5)) ++weak;
  }
  const double v1 = violation(2.0 * 1.24e9, 1.24e9);
  const bool ok = nonzero_on_feasible == 0 && weak == 0 && not_single == 0 && v1 == 2e5;
  report(5, ok, "penalty 0 on feasible plans, >= 1e5 on single violations, 2e5 at twice the cap",
         std::to_string(nonzero_on_feasible) + " nonzero feasible, " + std::to_string(weak) + " weak, " +
             std::to_string(not_single) + " not single, V1(2Z) = " + num(v1));
}

void criterion_6() {
  const double chi = constriction(4.1);
  report(6, std::abs(chi - 0.729844) <= 1e-4, "constriction coefficient at phi = 4.1", "chi " + num(chi));
}

void criterion_7() {
  const fs::path dir = fs::temp_directory_path() / "plantmarket_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string spec = (dir / "spec.json").string();
  bool ok = shell("init " + spec) == 0;
  auto small = load_spec(spec);
  small.scenarios.resize(2);
  small.replications = 3;
  save_spec(small, dir / "small.json");

  std::vector<std::pair<std::string, std::string>> pairs;
  for (const char* solver : {"ga", "pso"}) {
    const std::string base = "solve " + spec + " --market competitive --scenario 6 --seed 11 --solver " + solver;
    const std::string a = (dir / (std::string(solver) + "_a.json")).string();
    const std::string b = (dir / (std::string(solver) + "_b.json")).string();
    ok = ok && shell(base + " --out " + a) == 0 && shell(base + " --out " + b) == 0;
    pairs.emplace_back(a, b);
  }
  const std::string m = "run-matrix " + (dir / "small.json").string() + " --seed 3 --out-dir ";
  ok = ok && shell(m + (dir / "m1").string()) == 0 && shell(m + (dir / "m2").string()) == 0;
  for (const char* f : {"raw.csv", "summary.csv", "manifest.json"})
    pairs.emplace_back((dir / "m1" / f).string(), (dir / "m2" / f).string());

  std::size_t differing = 0;
  for (const auto& [a, b] : pairs)
    if (!fs::exists(a) || slurp(a) != slurp(b)) ++differing;
  ok = ok && differing == 0;
  report(7, ok, "repeated commands with the same seed give byte-identical JSON/CSV",
         std::to_string(pairs.size()) + " file pairs, " + std::to_string(differing) + " differ");
}

void criterion_8() {
  const std::vector<double> x{3.0, 1.0, 4.0, 1.0, 5.0};
  const auto same = compare_samples(x, x);
  const bool identical_ok = same.t && *same.t == 0.0 && same.p == 1.0;

  const std::vector<double> a{0, 0, 1}, b{10, 10, 11};
  const auto w = stats::welch_t(a, b);
  const auto o = oracle::welch(a, b);
  const bool welch_ok = std::abs(w.t - o.t) <= 1e-6;

  const double p = stats::t_tail(1.0, 10.0);
  const bool p_ok = std::abs(p - 0.3409) <= 5e-4;
  report(8, identical_ok && welch_ok && p_ok, "t = 0, p = 1 on identical samples; Welch t vs oracle; p(1, 10)",
         "t " + num(w.t) + " vs " + num(o.t) + ", p(1,10) " + num(p));
}

}  // namespace

int main() {
  criterion_1();
  criteria_2_3_9();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
