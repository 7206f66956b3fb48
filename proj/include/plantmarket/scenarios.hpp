#pragma once

// Experiment definitions and the scenario x market x solver x replication
// run matrix.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "plantmarket/errors.hpp"
#include "plantmarket/ga.hpp"
#include "plantmarket/model.hpp"
#include "plantmarket/pso.hpp"
#include "plantmarket/stats.hpp"

namespace plantmarket {

enum class SolverKind { Ga, Pso };

inline const char* to_string(SolverKind s) { return s == SolverKind::Ga ? "ga" : "pso"; }

inline SolverKind parse_solver(const std::string& s) {
  if (s == "ga") return SolverKind::Ga;
  if (s == "pso") return SolverKind::Pso;
  throw ConfigError("invalid solver '" + s + "' (expected ga or pso)");
}

struct ExperimentSpec {
  std::vector<std::string> pollutants;  // names, one per emission factor
  std::vector<PlantParams> plants;
  std::vector<FuelType> fuels;
  std::vector<PollutantScenario> scenarios;
  MarketParams market;

  std::vector<Market> markets{Market::Collusion, Market::Competitive};
  std::vector<SolverKind> solvers{SolverKind::Ga, SolverKind::Pso};
  std::size_t replications = 5;
  std::uint64_t seed = 1;
  bool slack_genes = false;
  std::string comparison_metric = "total_production";
  GaConfig ga;
  PsoConfig pso;

  /// Market instance for scenario `index` (1-based).
  Problem problem(std::size_t index) const {
    if (index < 1 || index > scenarios.size())
      throw ConfigError("scenario index out of range: " + std::to_string(index) + " (have " +
                        std::to_string(scenarios.size()) + ")");
    return Problem{plants, fuels, scenarios[index - 1], market};
  }

  void validate() const {
    if (scenarios.empty()) throw ConfigError("experiment needs at least one scenario");
    if (replications < 1) throw ConfigError("replications must be >= 1");
    if (markets.empty()) throw ConfigError("experiment needs at least one market");
    if (solvers.empty()) throw ConfigError("experiment needs at least one solver");
    for (const auto& s : scenarios)
      if (s.pollutants() != pollutants.size())
        throw ConfigError("scenario '" + s.name + "' does not have one entry per pollutant");
    for (std::size_t s = 1; s <= scenarios.size(); ++s) problem(s).validate();
    ga.validate();
    pso.validate();
  }

  bool operator==(const ExperimentSpec&) const = default;
};

enum class ExampleScale {
  Desk,   // population 60, 150 iterations, 5 replications
  Paper,  // population 400, 1000 iterations, 15 replications
};

/// Three plants, three fuels (fuel-oil, gas-oil, gas), three pollutants
/// (NOx, SO2, CO2) and six external-cost scenarios.
inline ExperimentSpec builtin_paper_example(ExampleScale scale = ExampleScale::Desk) {
  ExperimentSpec spec;
  spec.pollutants = {"NOx", "SO2", "CO2"};
  spec.plants = {
      {"PP1", 0.00041, 15.5, 1078.0, 1e-8, 2.75e6},
      {"PP2", 0.00031, 16.0, 14.0, 1e-8, 2.75e6},
      {"PP3", 0.00051, 14.0, 702.9, 1e-8, 2.75e6},
  };
  spec.fuels = {
      {"fuel-oil", 0.057, 0.108, 100e6, {5.0, 46.9, 2978.0}},
      {"gas-oil", 0.1, 0.116, 100e6, {5.2, 15.7, 2648.0}},
      {"gas", 0.022, 0.114, 100e6, {3.1, 0.0, 2133.0}},
  };
  const std::vector<double> caps{1240.0, 6000.0, 800000.0};
  const double ec[6][3] = {
      {0.0, 0.0, 0.0},
      {1.4e-3, 0.7e-3, 0.005e-3},
      {2.8e-3, 1.4e-3, 0.011e-3},
      {4.3e-3, 2.1e-3, 0.017e-3},
      {6.7e-3, 2.8e-3, 0.023e-3},
      {7.1e-3, 3.5e-3, 0.028e-3},
  };
  for (int s = 0; s < 6; ++s)
    spec.scenarios.push_back({std::to_string(s + 1), {ec[s][0], ec[s][1], ec[s][2]}, caps, 1e6});

  spec.market.delta = 0.039;
  spec.market.delta_prime = 1e-2;
  spec.market.subsidy_rate = 0.0;
  spec.market.fom_cost = 7.1e-3;
  spec.market.output_scale = 1e6;
  spec.market.price_mode = PriceMode::PerPlantNet;

  const bool paper = scale == ExampleScale::Paper;
  spec.replications = paper ? 15 : 5;
  spec.ga.population = paper ? 400 : 60;
  spec.ga.iterations = paper ? 1000 : 150;
  spec.pso.population = paper ? 400 : 60;
  spec.pso.iterations = paper ? 1000 : 150;
  return spec;
}

// ---------------------------------------------------------------------------
// Run matrix

struct CellKey {
  std::size_t scenario = 1;  // 1-based
  Market market = Market::Collusion;
  SolverKind solver = SolverKind::Pso;

  bool operator==(const CellKey&) const = default;
};

inline std::string describe(const CellKey& c) {
  return "scenario=" + std::to_string(c.scenario) + " market=" + to_string(c.market) +
         " solver=" + to_string(c.solver);
}

/// One replication of one cell.
struct RunRow {
  CellKey cell;
  std::size_t replication = 1;  // 1-based
  double total_profit = 0.0;    // USD
  std::vector<double> profit;      // USD per plant
  std::vector<double> production;  // MWh per plant
  std::vector<double> fuel_use;    // volume units per fuel
  std::vector<double> emission;    // grams per pollutant
  double penalty = 0.0;
  double wall_ms = 0.0;

  double total_production() const {
    double s = 0.0;
    for (double p : production) s += p;
    return s;
  }

  bool operator==(const RunRow&) const = default;
};

/// Numeric columns of a raw row, in CSV order.
inline std::vector<std::string> metric_columns(std::size_t plants, std::size_t fuels, std::size_t pollutants) {
  std::vector<std::string> cols{"total_profit"};
  for (std::size_t i = 1; i <= plants; ++i) cols.push_back("profit_plant_" + std::to_string(i));
  for (std::size_t i = 1; i <= plants; ++i) cols.push_back("production_plant_" + std::to_string(i));
  for (std::size_t j = 1; j <= fuels; ++j) cols.push_back("fuel_use_" + std::to_string(j));
  for (std::size_t k = 1; k <= pollutants; ++k) cols.push_back("emission_" + std::to_string(k));
  cols.push_back("penalty");
  cols.push_back("wall_ms");
  return cols;
}

inline std::vector<double> metric_values(const RunRow& r) {
  std::vector<double> v{r.total_profit};
  v.insert(v.end(), r.profit.begin(), r.profit.end());
  v.insert(v.end(), r.production.begin(), r.production.end());
  v.insert(v.end(), r.fuel_use.begin(), r.fuel_use.end());
  v.insert(v.end(), r.emission.begin(), r.emission.end());
  v.push_back(r.penalty);
  v.push_back(r.wall_ms);
  return v;
}

struct Moments {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation, 0 for a single replication
  double min = 0.0;
  double max = 0.0;

  bool operator==(const Moments&) const = default;
};

struct CellSummary {
  CellKey cell;
  std::size_t replications = 0;
  std::vector<Moments> metrics;  // summary_columns() order

  bool operator==(const CellSummary&) const = default;
};

struct RunReport {
  std::size_t plants = 0;
  std::size_t fuels = 0;
  std::size_t pollutants = 0;
  std::vector<RunRow> rows;
  std::vector<CellSummary> summaries;

  std::vector<std::string> raw_columns() const { return metric_columns(plants, fuels, pollutants); }

  /// Raw metric columns plus total_production.
  std::vector<std::string> summary_columns() const {
    auto cols = raw_columns();
    cols.push_back("total_production");
    return cols;
  }

  const CellSummary& summary(const CellKey& cell) const {
    for (const auto& s : summaries)
      if (s.cell == cell) return s;
    throw ConfigError("no such cell: " + describe(cell));
  }

  const Moments& summary(const CellKey& cell, const std::string& metric) const {
    const auto cols = summary_columns();
    const auto it = std::find(cols.begin(), cols.end(), metric);
    if (it == cols.end()) throw ConfigError("unknown metric '" + metric + "'");
    return summary(cell).metrics[static_cast<std::size_t>(it - cols.begin())];
  }

  /// Values of `metric` across the replications of `cell`, in replication order.
  std::vector<double> sample(const CellKey& cell, const std::string& metric) const {
    const auto cols = raw_columns();
    std::optional<std::size_t> col;
    if (metric != "total_production") {
      const auto it = std::find(cols.begin(), cols.end(), metric);
      if (it == cols.end()) throw ConfigError("unknown metric '" + metric + "'");
      col = static_cast<std::size_t>(it - cols.begin());
    }
    std::vector<double> out;
    for (const auto& r : rows) {
      if (!(r.cell == cell)) continue;
      out.push_back(col ? metric_values(r)[*col] : r.total_production());
    }
    return out;
  }

  bool operator==(const RunReport&) const = default;
};

inline Moments moments(std::span<const double> xs) {
  Moments m;
  m.mean = stats::mean(xs);
  m.std = stats::stddev(xs);
  m.min = *std::min_element(xs.begin(), xs.end());
  m.max = *std::max_element(xs.begin(), xs.end());
  return m;
}

/// Recomputes the per-cell summaries from the raw rows, in first-seen cell order.
inline void summarize(RunReport& report) {
  report.summaries.clear();
  std::vector<CellKey> cells;
  for (const auto& r : report.rows)
    if (std::find(cells.begin(), cells.end(), r.cell) == cells.end()) cells.push_back(r.cell);

  const auto cols = report.summary_columns();
  for (const auto& cell : cells) {
    CellSummary s;
    s.cell = cell;
    std::vector<std::vector<double>> columns(cols.size());
    for (const auto& r : report.rows) {
      if (!(r.cell == cell)) continue;
      ++s.replications;
      auto v = metric_values(r);
      v.push_back(r.total_production());
      for (std::size_t c = 0; c < v.size(); ++c) columns[c].push_back(v[c]);
    }
    for (const auto& col : columns) s.metrics.push_back(moments(col));
    report.summaries.push_back(std::move(s));
  }
}

/// Solves one replication of one cell and reduces it to a raw row.
inline RunRow run_cell(const ExperimentSpec& spec, const CellKey& cell, std::size_t replication,
                       unsigned solver_threads = 1) {
  const Problem problem = spec.problem(cell.scenario);
  const std::uint64_t seed = spec.seed + (replication - 1);

  SolveOutcome outcome;
  if (cell.solver == SolverKind::Ga) {
    GaConfig cfg = spec.ga;
    cfg.seed = seed;
    cfg.threads = solver_threads;
    outcome = ga_solve(problem, cell.market, cfg, spec.slack_genes);
  } else {
    PsoConfig cfg = spec.pso;
    cfg.seed = seed;
    cfg.threads = solver_threads;
    outcome = pso_solve(problem, cell.market, cfg, spec.slack_genes);
  }

  const EvaluationResult eval = evaluate(problem, outcome.best_plan);
  RunRow row;
  row.cell = cell;
  row.replication = replication;
  row.profit = eval.profit;
  row.total_profit = eval.total_profit();
  for (std::size_t i = 0; i < problem.plants.size(); ++i) row.production.push_back(outcome.best_plan.plant_total(i));
  row.fuel_use = eval.fuel_consumed;
  row.emission = eval.emissions;
  row.penalty = eval.penalty();
  return row;
}

struct RunOptions {
  unsigned threads = 1;  // concurrent replications
  bool timing = false;   // fill wall_ms; off keeps reports byte-reproducible
};

/// Runs every (scenario, market, solver, replication) job. Replication r
/// of every cell uses seed + r - 1. Rows are ordered by scenario, market,
/// solver, replication regardless of thread count.
inline RunReport run_matrix(const ExperimentSpec& spec, const RunOptions& options = {}) {
  spec.validate();

  struct Job {
    CellKey cell;
    std::size_t replication;
  };
  std::vector<Job> jobs;
  for (std::size_t s = 1; s <= spec.scenarios.size(); ++s)
    for (Market m : spec.markets)
      for (SolverKind k : spec.solvers)
        for (std::size_t r = 1; r <= spec.replications; ++r) jobs.push_back({{s, m, k}, r});

  RunReport report;
  report.plants = spec.plants.size();
  report.fuels = spec.fuels.size();
  report.pollutants = spec.pollutants.size();
  report.rows.resize(jobs.size());

  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const auto start = std::chrono::steady_clock::now();
      try {
        report.rows[i] = run_cell(spec, jobs[i].cell, jobs[i].replication);
      } catch (const std::exception& e) {
        errors[i] = std::make_exception_ptr(SolverError(describe(jobs[i].cell) + " replication=" +
                                                        std::to_string(jobs[i].replication) + ": " + e.what()));
        continue;
      }
      if (options.timing) {
        const auto stop = std::chrono::steady_clock::now();
        report.rows[i].wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
      }
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(jobs.size())));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  summarize(report);
  return report;
}

// ---------------------------------------------------------------------------
// Cell comparison

enum class Decision { Different, NotDifferent, Identical };

inline const char* to_string(Decision d) {
  switch (d) {
    case Decision::Different: return "different";
    case Decision::NotDifferent: return "not different";
    case Decision::Identical: return "identical";
  }
  return "?";
}

struct Comparison {
  std::string metric;
  std::size_t n_a = 0;
  std::size_t n_b = 0;
  double mean_a = 0.0;
  double mean_b = 0.0;
  std::optional<double> t;  // empty when both samples are constant
  std::optional<double> df;
  double p = 1.0;
  bool infinite_t = false;
  Decision decision = Decision::NotDifferent;
};

inline constexpr double kSignificance = 0.10;

/// Welch two-sample t test of `metric` between two cells at the 90% level.
///
/// Spreads below 1e-12 of the sample magnitude are treated as zero, since
/// decoded production totals can differ from p_max in the last bit.
inline Comparison compare_samples(std::span<const double> a, std::span<const double> b,
                                  const std::string& metric = "value") {
  if (a.size() < 2 || b.size() < 2)
    throw ConfigError("compare: each cell needs at least two replications (have " + std::to_string(a.size()) +
                      " and " + std::to_string(b.size()) + ")");
  Comparison c;
  c.metric = metric;
  c.n_a = a.size();
  c.n_b = b.size();
  c.mean_a = stats::mean(a);
  c.mean_b = stats::mean(b);

  const double magnitude = std::max({std::abs(c.mean_a), std::abs(c.mean_b), 1e-300});
  const double floor = 1e-12 * magnitude;
  const bool flat_a = stats::stddev(a) <= floor;
  const bool flat_b = stats::stddev(b) <= floor;
  if (flat_a && flat_b) {
    if (std::abs(c.mean_a - c.mean_b) <= floor) {
      c.decision = Decision::Identical;
      c.p = 1.0;
    } else {
      c.infinite_t = true;
      c.t = c.mean_a > c.mean_b ? INFINITY : -INFINITY;
      c.p = 0.0;
      c.decision = Decision::Different;
    }
    return c;
  }
  const stats::WelchT w = stats::welch_t(a, b);
  c.t = w.t;
  c.df = w.df;
  c.p = stats::t_tail(w.t, w.df);
  c.decision = c.p < kSignificance ? Decision::Different : Decision::NotDifferent;
  return c;
}

inline Comparison compare_cells(const RunReport& report, const CellKey& a, const CellKey& b,
                                const std::string& metric = "total_production") {
  const auto sa = report.sample(a, metric);
  const auto sb = report.sample(b, metric);
  if (sa.empty()) throw ConfigError("no rows for cell " + describe(a));
  if (sb.empty()) throw ConfigError("no rows for cell " + describe(b));
  return compare_samples(sa, sb, metric);
}

}  // namespace plantmarket
