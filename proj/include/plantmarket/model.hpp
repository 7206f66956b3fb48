#pragma once

// Production, price and profit model for a group of thermal power plants
// selling into one electricity market. Everything here is a pure function of
// its arguments; the solvers call evaluate() as their fitness oracle.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "plantmarket/errors.hpp"

namespace plantmarket {

enum class PriceMode {
  PerPlantNet,   // each plant's price responds to its own net output
  AggregateNet,  // one market price from the summed net output (textbook Cournot)
};

enum class Market { Collusion, Competitive };

/// Heat-rate curve, line-loss coefficient and capacity of one plant.
struct PlantParams {
  std::string name;
  double alpha = 0.0;  // Mcal / MWh^2
  double beta = 0.0;   // Mcal / MWh
  double gamma = 0.0;  // Mcal
  double mu = 0.0;     // 1 / MWh
  double p_max = 0.0;  // MWh / year

  void validate() const {
    if (!(alpha > 0.0) || !(beta > 0.0) || !(gamma >= 0.0) || !(mu >= 0.0) || !(p_max > 0.0))
      throw ConfigError("plant '" + name + "': require alpha>0, beta>0, gamma>=0, mu>=0, p_max>0");
    if (!(mu * p_max < 1.0))
      throw ConfigError("plant '" + name + "': mu * p_max must be < 1");
  }

  bool operator==(const PlantParams&) const = default;
};

/// A fuel: purchase price, volume per Mcal, yearly availability and
/// grams of each pollutant released per volume unit burnt.
struct FuelType {
  std::string name;
  double price = 0.0;         // USD / volume unit
  double inv_heating = 0.0;   // volume unit / Mcal
  double availability = 0.0;  // volume units / year
  std::vector<double> emission;

  void validate() const {
    if (!(price >= 0.0) || !(inv_heating > 0.0) || !(availability > 0.0))
      throw ConfigError("fuel '" + name + "': require price>=0, inv_heating>0, availability>0");
    for (double e : emission)
      if (!(e >= 0.0)) throw ConfigError("fuel '" + name + "': emission factors must be >= 0");
  }

  bool operator==(const FuelType&) const = default;
};

/// External-cost vector plus emission ceilings. Ceilings are kept in the
/// units they are tabulated in; cap_grams() applies the multiplier.
struct PollutantScenario {
  std::string name;
  std::vector<double> external_cost;  // USD / gram
  std::vector<double> cap;            // table units
  double cap_unit_multiplier = 1e6;   // grams per table unit

  std::size_t pollutants() const { return external_cost.size(); }
  double cap_grams(std::size_t k) const { return cap.at(k) * cap_unit_multiplier; }

  void validate() const {
    if (cap.size() != external_cost.size())
      throw ConfigError("scenario '" + name + "': external_cost and cap lengths differ");
    for (double ec : external_cost)
      if (!(ec >= 0.0)) throw ConfigError("scenario '" + name + "': external costs must be >= 0");
    if (!(cap_unit_multiplier > 0.0))
      throw ConfigError("scenario '" + name + "': cap_unit_multiplier must be > 0");
    for (double z : cap)
      if (!(z > 0.0)) throw ConfigError("scenario '" + name + "': caps must be > 0");
  }

  bool operator==(const PollutantScenario&) const = default;
};

/// Linear inverse demand, subsidy and per-unit fixed cost.
///
/// `output_scale` divides net output inside the demand term only, so the
/// price responds to output measured in units of `output_scale` MWh while
/// revenue, subsidy and costs stay in raw MWh.
struct MarketParams {
  double delta = 0.0;
  double delta_prime = 0.0;
  double subsidy_rate = 0.0;
  double fom_cost = 0.0;
  double output_scale = 1.0;
  PriceMode price_mode = PriceMode::PerPlantNet;

  void validate() const {
    if (!(delta > 0.0) || !(delta_prime >= 0.0) || !(subsidy_rate >= 0.0) || !(fom_cost >= 0.0))
      throw ConfigError("market: require delta>0, delta_prime>=0, subsidy_rate>=0, fom_cost>=0");
    if (!(output_scale > 0.0)) throw ConfigError("market: output_scale must be > 0");
  }

  bool operator==(const MarketParams&) const = default;
};

/// Production matrix, rows are plants and columns are fuels (MWh / year).
class ProductionPlan {
 public:
  ProductionPlan() = default;
  ProductionPlan(std::size_t plants, std::size_t fuels)
      : plants_(plants), fuels_(fuels), values_(plants * fuels, 0.0) {}

  static ProductionPlan from_rows(const std::vector<std::vector<double>>& rows) {
    const std::size_t fuels = rows.empty() ? 0 : rows.front().size();
    ProductionPlan plan(rows.size(), fuels);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != fuels) throw ConfigError("production plan rows must have equal length");
      for (std::size_t j = 0; j < fuels; ++j) plan(i, j) = rows[i][j];
    }
    return plan;
  }

  std::size_t plants() const { return plants_; }
  std::size_t fuels() const { return fuels_; }

  double& operator()(std::size_t i, std::size_t j) { return values_[i * fuels_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * fuels_ + j]; }

  std::span<double> row(std::size_t i) { return {values_.data() + i * fuels_, fuels_}; }
  std::span<const double> row(std::size_t i) const { return {values_.data() + i * fuels_, fuels_}; }
  std::span<const double> values() const { return values_; }

  double plant_total(std::size_t i) const {
    auto r = row(i);
    return std::accumulate(r.begin(), r.end(), 0.0);
  }

  bool operator==(const ProductionPlan&) const = default;

 private:
  std::size_t plants_ = 0;
  std::size_t fuels_ = 0;
  std::vector<double> values_;
};

/// One market instance: plants, fuels, the active external-cost scenario
/// and the demand side.
struct Problem {
  std::vector<PlantParams> plants;
  std::vector<FuelType> fuels;
  PollutantScenario scenario;
  MarketParams market;

  std::size_t pollutants() const { return scenario.pollutants(); }

  void validate() const {
    if (plants.empty()) throw ConfigError("problem needs at least one plant");
    if (fuels.empty()) throw ConfigError("problem needs at least one fuel");
    for (const auto& p : plants) p.validate();
    for (const auto& f : fuels) {
      f.validate();
      if (f.emission.size() != pollutants())
        throw ConfigError("fuel '" + f.name + "': emission vector length does not match pollutant count");
    }
    scenario.validate();
    market.validate();
  }
};

/// Everything evaluate() derives from a plan.
struct EvaluationResult {
  std::vector<double> fuel_energy;    // Mcal, plants x fuels row-major
  std::vector<double> fuel_consumed;  // volume units per fuel
  std::vector<double> net_output;     // MWh per plant
  std::vector<double> price;          // USD / unit, per plant (repeated under AggregateNet)
  std::vector<double> subsidy;        // USD per plant
  std::vector<double> profit;         // USD per plant
  std::vector<double> emissions;      // grams per pollutant
  std::vector<double> emission_violation;
  std::vector<double> fuel_violation;
  std::vector<double> capacity_violation;
  std::vector<double> capacity_slack;  // MWh per plant

  double total_profit() const { return std::accumulate(profit.begin(), profit.end(), 0.0); }

  double penalty() const {
    double total = 0.0;
    for (double v : emission_violation) total += v;
    for (double v : fuel_violation) total += v;
    for (double v : capacity_violation) total += v;
    return total;
  }

  bool operator==(const EvaluationResult&) const = default;
};

// ---------------------------------------------------------------------------
// Elementary terms

/// Heat needed to produce `p` MWh: alpha p^2 + beta p + gamma.
inline double fuel_energy(const PlantParams& plant, double p) {
  if (!(p >= 0.0)) throw std::domain_error("fuel_energy: production must be >= 0");
  return plant.alpha * p * p + plant.beta * p + plant.gamma;
}

/// Gross output minus quadratic line loss.
inline double net_output(const PlantParams& plant, std::span<const double> row) {
  double gross = 0.0;
  double squares = 0.0;
  for (double p : row) {
    gross += p;
    squares += p * p;
  }
  return gross - plant.mu * squares;
}

/// Not clamped; large output drives the price negative.
inline double market_price(const MarketParams& market, double net) {
  return market.delta - market.delta_prime * (net / market.output_scale);
}

/// Price faced by each plant given every plant's net output.
inline std::vector<double> market_prices(const MarketParams& market, std::span<const double> nets) {
  std::vector<double> prices(nets.size());
  if (market.price_mode == PriceMode::AggregateNet) {
    const double rho = market_price(market, std::accumulate(nets.begin(), nets.end(), 0.0));
    std::fill(prices.begin(), prices.end(), rho);
  } else {
    for (std::size_t i = 0; i < nets.size(); ++i) prices[i] = market_price(market, nets[i]);
  }
  return prices;
}

inline double subsidy(const MarketParams& market, double net) { return market.subsidy_rate * net; }

/// Fuel purchase plus external cost of burning one volume unit (USD).
inline double fuel_unit_cost(const FuelType& fuel, const PollutantScenario& scenario) {
  if (fuel.emission.size() != scenario.pollutants())
    throw ConfigError("fuel '" + fuel.name + "': emission vector length does not match pollutant count");
  double cost = fuel.price;
  for (std::size_t k = 0; k < fuel.emission.size(); ++k) cost += scenario.external_cost[k] * fuel.emission[k];
  return cost;
}

/// Profit of one plant. `market_net` is the net output that sets this
/// plant's price: its own net under PerPlantNet, the market total under
/// AggregateNet. Idle fuels still burn the gamma heat.
inline double plant_profit(const PlantParams& plant, std::span<const FuelType> fuels,
                           const PollutantScenario& scenario, const MarketParams& market,
                           std::span<const double> row, double market_net) {
  if (row.size() != fuels.size())
    throw ConfigError("plant_profit: production row has " + std::to_string(row.size()) + " entries, expected " +
                      std::to_string(fuels.size()));
  const double net = net_output(plant, row);
  double profit = net * market_price(market, market_net) + subsidy(market, net);
  double gross = 0.0;
  for (std::size_t j = 0; j < fuels.size(); ++j) {
    const double heat = fuel_energy(plant, row[j]);
    profit -= fuel_unit_cost(fuels[j], scenario) * fuels[j].inv_heating * heat;
    gross += row[j];
  }
  return profit - market.fom_cost * gross;
}

inline double plant_profit(const PlantParams& plant, std::span<const FuelType> fuels,
                           const PollutantScenario& scenario, const MarketParams& market,
                           std::span<const double> row) {
  return plant_profit(plant, fuels, scenario, market, row, net_output(plant, row));
}

// ---------------------------------------------------------------------------
// Constraints and penalties

inline constexpr double kPenaltyScale = 1e5;

/// Violation indicator times violation ratio, scaled by kPenaltyScale.
/// A value exactly at its limit is feasible.
inline double violation(double value, double limit) {
  if (!(limit > 0.0)) throw ConfigError("constraint limit must be > 0");
  return value > limit ? (value / limit) * kPenaltyScale : 0.0;
}

struct ConstraintState {
  std::vector<double> fuel_energy;     // plants x fuels
  std::vector<double> fuel_consumed;   // per fuel
  std::vector<double> emissions;       // per pollutant
  std::vector<double> capacity_slack;  // per plant
};

struct PenaltyBreakdown {
  std::vector<double> emission;
  std::vector<double> fuel;
  std::vector<double> capacity;

  double total() const {
    double t = 0.0;
    for (double v : emission) t += v;
    for (double v : fuel) t += v;
    for (double v : capacity) t += v;
    return t;
  }
};

inline void check_dimensions(const Problem& problem, const ProductionPlan& plan) {
  if (plan.plants() != problem.plants.size() || plan.fuels() != problem.fuels.size())
    throw ConfigError("production plan is " + std::to_string(plan.plants()) + "x" + std::to_string(plan.fuels()) +
                      ", problem is " + std::to_string(problem.plants.size()) + "x" +
                      std::to_string(problem.fuels.size()));
}

inline ConstraintState evaluate_constraints(const Problem& problem, const ProductionPlan& plan) {
  check_dimensions(problem, plan);
  const std::size_t n_plants = problem.plants.size();
  const std::size_t n_fuels = problem.fuels.size();
  const std::size_t n_poll = problem.pollutants();

  ConstraintState state;
  state.fuel_energy.resize(n_plants * n_fuels);
  state.fuel_consumed.assign(n_fuels, 0.0);
  state.emissions.assign(n_poll, 0.0);
  state.capacity_slack.resize(n_plants);

  for (std::size_t i = 0; i < n_plants; ++i) {
    const auto& plant = problem.plants[i];
    for (std::size_t j = 0; j < n_fuels; ++j) {
      const auto& fuel = problem.fuels[j];
      if (fuel.emission.size() != n_poll)
        throw ConfigError("fuel '" + fuel.name + "': emission vector length does not match pollutant count");
      const double heat = fuel_energy(plant, plan(i, j));
      const double volume = fuel.inv_heating * heat;
      state.fuel_energy[i * n_fuels + j] = heat;
      state.fuel_consumed[j] += volume;
      for (std::size_t k = 0; k < n_poll; ++k) state.emissions[k] += fuel.emission[k] * volume;
    }
    state.capacity_slack[i] = plant.p_max - plan.plant_total(i);
  }
  return state;
}

inline PenaltyBreakdown penalty(const ConstraintState& state, const Problem& problem) {
  PenaltyBreakdown out;
  out.emission.resize(state.emissions.size());
  for (std::size_t k = 0; k < state.emissions.size(); ++k)
    out.emission[k] = violation(state.emissions[k], problem.scenario.cap_grams(k));
  out.fuel.resize(state.fuel_consumed.size());
  for (std::size_t j = 0; j < state.fuel_consumed.size(); ++j)
    out.fuel[j] = violation(state.fuel_consumed[j], problem.fuels[j].availability);
  out.capacity.resize(state.capacity_slack.size());
  for (std::size_t i = 0; i < state.capacity_slack.size(); ++i) {
    const double p_max = problem.plants[i].p_max;
    out.capacity[i] = violation(p_max - state.capacity_slack[i], p_max);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Objectives

/// Magnitude separating "k plants lose money" from "k+1 plants lose money"
/// in the competitive objective. Must exceed any plausible total loss.
inline constexpr double kNashLossStep = 1e12;

/// Product of profits when all are positive. Otherwise a negative value
/// ordered first by the number of nonpositive profits, then by their sum,
/// so every all-positive plan outranks every plan with a loss.
inline double nash_product(std::span<const double> profits) {
  std::size_t losers = 0;
  double losses = 0.0;
  double product = 1.0;
  for (double p : profits) {
    if (p > 0.0) {
      product *= p;
    } else {
      ++losers;
      losses += p;
    }
  }
  if (losers == 0) return product;
  return -static_cast<double>(losers) * kNashLossStep + losses;
}

inline double objective_from_profits(Market market, std::span<const double> profits) {
  if (market == Market::Collusion) return std::accumulate(profits.begin(), profits.end(), 0.0);
  return nash_product(profits);
}

/// Full evaluation of a plan against one market instance.
inline EvaluationResult evaluate(const Problem& problem, const ProductionPlan& plan) {
  ConstraintState state = evaluate_constraints(problem, plan);
  const std::size_t n_plants = problem.plants.size();

  EvaluationResult r;
  r.net_output.resize(n_plants);
  for (std::size_t i = 0; i < n_plants; ++i) r.net_output[i] = net_output(problem.plants[i], plan.row(i));

  r.price = market_prices(problem.market, r.net_output);
  const double total_net = std::accumulate(r.net_output.begin(), r.net_output.end(), 0.0);

  r.subsidy.resize(n_plants);
  r.profit.resize(n_plants);
  for (std::size_t i = 0; i < n_plants; ++i) {
    const double market_net =
        problem.market.price_mode == PriceMode::AggregateNet ? total_net : r.net_output[i];
    r.subsidy[i] = subsidy(problem.market, r.net_output[i]);
    r.profit[i] = plant_profit(problem.plants[i], problem.fuels, problem.scenario, problem.market, plan.row(i),
                               market_net);
  }

  PenaltyBreakdown pen = penalty(state, problem);
  r.emission_violation = std::move(pen.emission);
  r.fuel_violation = std::move(pen.fuel);
  r.capacity_violation = std::move(pen.capacity);
  r.fuel_energy = std::move(state.fuel_energy);
  r.fuel_consumed = std::move(state.fuel_consumed);
  r.emissions = std::move(state.emissions);
  r.capacity_slack = std::move(state.capacity_slack);
  return r;
}

inline double collusion_objective(const Problem& problem, const ProductionPlan& plan) {
  return evaluate(problem, plan).total_profit();
}

inline double competitive_objective(const Problem& problem, const ProductionPlan& plan) {
  return nash_product(evaluate(problem, plan).profit);
}

inline double objective(const Problem& problem, const ProductionPlan& plan, Market market) {
  return objective_from_profits(market, evaluate(problem, plan).profit);
}

inline const char* to_string(Market m) { return m == Market::Collusion ? "collusion" : "competitive"; }

inline Market parse_market(const std::string& s) {
  if (s == "collusion") return Market::Collusion;
  if (s == "competitive") return Market::Competitive;
  throw ConfigError("invalid market name '" + s + "' (expected collusion or competitive)");
}

inline const char* to_string(PriceMode m) {
  return m == PriceMode::PerPlantNet ? "per_plant_net" : "aggregate_net";
}

inline PriceMode parse_price_mode(const std::string& s) {
  if (s == "per_plant_net") return PriceMode::PerPlantNet;
  if (s == "aggregate_net") return PriceMode::AggregateNet;
  throw ConfigError("invalid price_mode '" + s + "' (expected per_plant_net or aggregate_net)");
}

}  // namespace plantmarket
