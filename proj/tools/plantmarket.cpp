// plantmarket: command-line front end.
//
//   plantmarket init <spec.json> [--force] [--paper-scale]
//   plantmarket evaluate <spec.json> --scenario N --plan "p11,p12,...;p21,..." [--market M]
//   plantmarket solve <spec.json> --market M --scenario N --solver S [--seed K] [--out file.json]
//   plantmarket run-matrix <spec.json> [--out-dir DIR] [--seed K] [--threads T] [--timing]
//   plantmarket compare <raw.csv> --a "S,market,solver" --b "S,market,solver" [--metric NAME]
//
// Results go to $PLANTMARKET_RESULTS_DIR (default ./results) unless an
// explicit output path is given.
//
// Exit codes: 0 success, 2 config error, 3 solver error, 4 I/O error.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "plantmarket/plantmarket.hpp"

namespace pm = plantmarket;
namespace fs = std::filesystem;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitIo = 4;

fs::path results_dir() {
  const char* env = std::getenv("PLANTMARKET_RESULTS_DIR");
  return env && *env ? fs::path(env) : fs::path("results");
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

pm::ProductionPlan parse_plan(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::stringstream rows_in(text);
  std::string row;
  while (std::getline(rows_in, row, ';')) {
    std::vector<double> values;
    std::stringstream cells(row);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      const auto first = cell.find_first_not_of(' ');
      const auto last = cell.find_last_not_of(' ');
      if (first == std::string::npos) throw pm::ConfigError("empty value in --plan");
      values.push_back(pm::parse_number(cell.substr(first, last - first + 1)));
    }
    rows.push_back(std::move(values));
  }
  return pm::ProductionPlan::from_rows(rows);
}

pm::CellKey parse_cell(const std::string& text) {
  std::stringstream in(text);
  std::string scenario, market, solver;
  if (!std::getline(in, scenario, ',') || !std::getline(in, market, ',') || !std::getline(in, solver, ','))
    throw pm::ConfigError("cell must look like 'scenario,market,solver', got '" + text + "'");
  return {static_cast<std::size_t>(pm::parse_number(scenario)), pm::parse_market(market), pm::parse_solver(solver)};
}

pm::json evaluation_json(const pm::ExperimentSpec& spec, const pm::ProductionPlan& plan,
                         const pm::EvaluationResult& r) {
  pm::json plants = pm::json::array();
  for (std::size_t i = 0; i < spec.plants.size(); ++i) {
    auto row = plan.row(i);
    plants.push_back({{"name", spec.plants[i].name},
                      {"production_by_fuel_mwh", std::vector<double>(row.begin(), row.end())},
                      {"production_mwh", plan.plant_total(i)},
                      {"net_output_mwh", r.net_output[i]},
                      {"price_usd_per_unit", r.price[i]},
                      {"subsidy_usd", r.subsidy[i]},
                      {"profit_usd", r.profit[i]},
                      {"capacity_slack_mwh", r.capacity_slack[i]}});
  }
  pm::json fuels = pm::json::array();
  for (std::size_t j = 0; j < spec.fuels.size(); ++j)
    fuels.push_back({{"name", spec.fuels[j].name}, {"consumed", r.fuel_consumed[j]}, {"violation", r.fuel_violation[j]}});
  pm::json pollutants = pm::json::array();
  for (std::size_t k = 0; k < spec.pollutants.size(); ++k)
    pollutants.push_back(
        {{"name", spec.pollutants[k]}, {"emitted_g", r.emissions[k]}, {"violation", r.emission_violation[k]}});
  return {{"plants", plants},
          {"fuels", fuels},
          {"pollutants", pollutants},
          {"total_profit_usd", r.total_profit()},
          {"penalty", r.penalty()},
          {"output_scale", spec.market.output_scale},
          {"price_mode", pm::to_string(spec.market.price_mode)}};
}

void print_breakdown(std::ostream& out, const pm::ExperimentSpec& spec, const pm::ProductionPlan& plan,
                     const pm::EvaluationResult& r) {
  out << std::setprecision(10);
  for (std::size_t i = 0; i < spec.plants.size(); ++i) {
    out << "  " << spec.plants[i].name << ": production " << plan.plant_total(i) << " MWh (";
    for (std::size_t j = 0; j < spec.fuels.size(); ++j)
      out << (j ? ", " : "") << spec.fuels[j].name << ' ' << plan(i, j);
    out << "), profit " << r.profit[i] << " USD\n";
  }
  for (std::size_t j = 0; j < spec.fuels.size(); ++j)
    out << "  fuel " << spec.fuels[j].name << ": " << r.fuel_consumed[j] << " volume units (limit "
        << spec.fuels[j].availability << ")\n";
  out << "  total profit " << r.total_profit() << " USD, penalty " << r.penalty() << ", output_scale "
      << spec.market.output_scale << " MWh\n";
}

int cmd_init(const std::string& path, bool force, bool paper_scale) {
  const auto spec = pm::builtin_paper_example(paper_scale ? pm::ExampleScale::Paper : pm::ExampleScale::Desk);
  pm::save_spec(spec, path, force);
  std::cout << "wrote " << path << '\n';
  return 0;
}

int cmd_evaluate(const std::string& spec_path, std::size_t scenario, const std::string& plan_text,
                 const std::string& market) {
  const auto spec = pm::load_spec(spec_path);
  const auto problem = spec.problem(scenario);
  const auto plan = parse_plan(plan_text);
  const auto r = pm::evaluate(problem, plan);
  auto j = evaluation_json(spec, plan, r);
  j["scenario"] = scenario;
  j["market"] = market;
  j["objective"] = pm::objective_from_profits(pm::parse_market(market), r.profit);
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_solve(const std::string& spec_path, const std::string& market_name, std::size_t scenario,
              const std::string& solver_name, std::optional<std::uint64_t> seed, const std::string& out_path,
              unsigned threads) {
  auto spec = pm::load_spec(spec_path);
  const pm::Market market = pm::parse_market(market_name);
  const pm::SolverKind solver = pm::parse_solver(solver_name);
  const auto problem = spec.problem(scenario);
  const std::uint64_t s = seed.value_or(spec.seed);

  pm::SolveOutcome outcome;
  try {
    if (solver == pm::SolverKind::Ga) {
      auto cfg = spec.ga;
      cfg.seed = s;
      cfg.threads = threads;
      outcome = pm::ga_solve(problem, market, cfg, spec.slack_genes);
    } else {
      auto cfg = spec.pso;
      cfg.seed = s;
      cfg.threads = threads;
      outcome = pm::pso_solve(problem, market, cfg, spec.slack_genes);
    }
  } catch (const pm::ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw pm::SolverError(e.what());
  }
  const auto r = pm::evaluate(problem, outcome.best_plan);

  std::cout << "scenario " << scenario << ", " << market_name << " market, " << solver_name << ", seed " << s << '\n';
  std::cout << std::setprecision(10) << "  best fitness " << outcome.best_fitness << " (objective "
            << outcome.best_objective << ", penalty " << outcome.best_penalty << ")\n";
  print_breakdown(std::cout, spec, outcome.best_plan, r);

  auto j = evaluation_json(spec, outcome.best_plan, r);
  j["scenario"] = scenario;
  j["market"] = market_name;
  j["solver"] = solver_name;
  j["seed"] = s;
  j["spec_hash"] = pm::spec_hash(spec);
  j["best_fitness"] = outcome.best_fitness;
  j["objective"] = outcome.best_objective;
  j["evaluations"] = outcome.evaluations;
  j["fitness_history"] = outcome.fitness_history;
  j["version"] = pm::kVersion;

  fs::path out = out_path;
  if (out.empty()) {
    std::error_code ec;
    fs::create_directories(results_dir(), ec);
    if (ec) throw pm::IoError("cannot create '" + results_dir().string() + "': " + ec.message());
    out = results_dir() / ("solve_s" + std::to_string(scenario) + "_" + market_name + "_" + solver_name + "_seed" +
                           std::to_string(s) + ".json");
  }
  pm::write_text(out, j.dump(2) + "\n");
  std::cout << "wrote " << out.string() << '\n';
  return 0;
}

int cmd_run_matrix(const std::string& spec_path, const std::string& out_dir, std::optional<std::uint64_t> seed,
                   unsigned threads, bool timing) {
  auto spec = pm::load_spec(spec_path);
  if (seed) spec.seed = *seed;
  const fs::path dir = out_dir.empty() ? results_dir() / "matrix" : fs::path(out_dir);

  pm::ManifestTimes times;
  if (timing) times.started = utc_now();
  const auto report = pm::run_matrix(spec, {threads, timing});
  if (timing) times.finished = utc_now();
  pm::write_report(dir, spec, report, timing ? &times : nullptr);

  std::cout << std::setprecision(10);
  const auto cols = report.summary_columns();
  std::cout << report.rows.size() << " runs, " << report.summaries.size() << " cells\n";
  for (const auto& s : report.summaries) {
    const auto& m = report.summary(s.cell, "total_profit");
    std::cout << "  " << pm::describe(s.cell) << ": mean total profit " << m.mean << " USD (best " << m.max
              << ")\n";
  }
  std::cout << "wrote " << (dir / "raw.csv").string() << ", " << (dir / "summary.csv").string() << ", "
            << (dir / "manifest.json").string() << '\n';
  return 0;
}

int cmd_compare(const std::string& csv_path, const std::string& a, const std::string& b, const std::string& metric) {
  const auto report = pm::read_raw_csv(fs::path(csv_path));
  const auto c = pm::compare_cells(report, parse_cell(a), parse_cell(b), metric);
  std::cout << std::setprecision(10);
  std::cout << "metric " << c.metric << ": mean_a " << c.mean_a << " (n=" << c.n_a << "), mean_b " << c.mean_b
            << " (n=" << c.n_b << ")\n";
  if (c.t) {
    std::cout << "t " << *c.t;
    if (c.df) std::cout << ", df " << *c.df;
    std::cout << ", p " << c.p << (c.infinite_t ? " (infinite t)" : "") << '\n';
  } else {
    std::cout << "t undefined (both samples constant)\n";
  }
  std::cout << "decision at 90%: " << pm::to_string(c.decision) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Production planning for power plants in collusion and competitive markets"};
  app.require_subcommand(1);

  std::string spec_path, out_path, plan_text, market = "collusion", solver = "pso", metric = "total_production";
  std::string cell_a, cell_b;
  std::size_t scenario = 1;
  std::uint64_t seed_value = 0;
  unsigned threads = 1;
  bool force = false, paper_scale = false, timing = false;

  auto* init = app.add_subcommand("init", "Write the built-in example spec");
  init->add_option("path", spec_path, "Spec file to create")->required();
  init->add_flag("--force", force, "Overwrite an existing file");
  init->add_flag("--paper-scale", paper_scale, "Population 400, 1000 iterations, 15 replications");

  auto* eval = app.add_subcommand("evaluate", "Evaluate a production plan");
  eval->add_option("spec", spec_path)->required();
  eval->add_option("--scenario", scenario, "Scenario index (1-based)");
  eval->add_option("--plan", plan_text, "Rows separated by ';', values by ','  (MWh)")->required();
  eval->add_option("--market", market, "collusion or competitive");

  auto* solve = app.add_subcommand("solve", "Solve one scenario");
  solve->add_option("spec", spec_path)->required();
  solve->add_option("--market", market, "collusion or competitive");
  solve->add_option("--scenario", scenario, "Scenario index (1-based)");
  solve->add_option("--solver", solver, "ga or pso");
  auto* seed_opt = solve->add_option("--seed", seed_value, "Random seed (default: spec seed)");
  solve->add_option("--out", out_path, "JSON result path");
  solve->add_option("--threads", threads, "Fitness evaluation threads");

  auto* matrix = app.add_subcommand("run-matrix", "Run every scenario/market/solver cell");
  matrix->add_option("spec", spec_path)->required();
  matrix->add_option("--out-dir", out_path, "Output directory");
  auto* matrix_seed = matrix->add_option("--seed", seed_value, "Root seed (default: spec seed)");
  matrix->add_option("--threads", threads, "Concurrent replications");
  matrix->add_flag("--timing", timing, "Record wall times and timestamps");

  auto* compare = app.add_subcommand("compare", "Welch t test between two cells of a raw CSV");
  compare->add_option("csv", spec_path, "raw.csv from run-matrix")->required();
  compare->add_option("--a", cell_a, "scenario,market,solver")->required();
  compare->add_option("--b", cell_b, "scenario,market,solver")->required();
  compare->add_option("--metric", metric, "Column name or total_production");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*init) return cmd_init(spec_path, force, paper_scale);
    if (*eval) return cmd_evaluate(spec_path, scenario, plan_text, market);
    if (*solve)
      return cmd_solve(spec_path, market, scenario, solver,
                       seed_opt->count() ? std::optional<std::uint64_t>(seed_value) : std::nullopt, out_path, threads);
    if (*matrix)
      return cmd_run_matrix(spec_path, out_path,
                            matrix_seed->count() ? std::optional<std::uint64_t>(seed_value) : std::nullopt, threads,
                            timing);
    if (*compare) return cmd_compare(spec_path, cell_a, cell_b, metric);
  } catch (const pm::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const pm::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSolver;
  }
  return 0;
}
