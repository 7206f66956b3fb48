#pragma once

// Reference computations used by the tests. They share only the plain data
// structs with the library and recompute everything term by term.

#include <cmath>
#include <cstddef>
#include <vector>

#include "plantmarket/model.hpp"

namespace oracle {

// Profit of plant i written out as one expression per market term.
inline double plant_profit(const plantmarket::Problem& pb, std::size_t i, const std::vector<double>& row,
                           double price_net) {
  const auto& pl = pb.plants[i];
  double gross = 0.0, sq = 0.0;
  for (double p : row) {
    gross += p;
    sq += p * p;
  }
  const double net = gross - pl.mu * sq;
  const double income = net * (pb.market.delta - pb.market.delta_prime * price_net / pb.market.output_scale);
  const double subsidy = pb.market.subsidy_rate * net;
  double fuel = 0.0, external = 0.0;
  for (std::size_t j = 0; j < row.size(); ++j) {
    const double heat = pl.alpha * row[j] * row[j] + pl.beta * row[j] + pl.gamma;
    fuel += pb.fuels[j].price * pb.fuels[j].inv_heating * heat;
    for (std::size_t k = 0; k < pb.scenario.external_cost.size(); ++k)
      external += pb.scenario.external_cost[k] * pb.fuels[j].emission[k] * pb.fuels[j].inv_heating * heat;
  }
  return income + subsidy - fuel - external - pb.market.fom_cost * gross;
}

// Exhaustive search over the two-fuel capacity split p1 = k * p_max / steps,
// p2 = p_max - p1, for a single plant. Returns the best penalized objective.
inline double grid_optimum_one_plant_two_fuels(const plantmarket::Problem& pb, int steps = 200) {
  const double p_max = pb.plants.at(0).p_max;
  double best = -INFINITY;
  for (int k = 0; k <= steps; ++k) {
    const double p1 = p_max * k / steps;
    const std::vector<double> row{p1, p_max - p1};
    double gross = p_max, sq = p1 * p1 + (p_max - p1) * (p_max - p1);
    const double net = gross - pb.plants[0].mu * sq;
    const double value = plant_profit(pb, 0, row, net);
    // penalty: emissions, fuel use and capacity against their limits
    double pen = 0.0;
    std::vector<double> vol(2), em(pb.scenario.external_cost.size(), 0.0);
    for (int j = 0; j < 2; ++j) {
      const auto& pl = pb.plants[0];
      vol[j] = pb.fuels[j].inv_heating * (pl.alpha * row[j] * row[j] + pl.beta * row[j] + pl.gamma);
      if (vol[j] > pb.fuels[j].availability) pen += vol[j] / pb.fuels[j].availability * 1e5;
      for (std::size_t q = 0; q < em.size(); ++q) em[q] += pb.fuels[j].emission[q] * vol[j];
    }
    for (std::size_t q = 0; q < em.size(); ++q) {
      const double z = pb.scenario.cap[q] * pb.scenario.cap_unit_multiplier;
      if (em[q] > z) pen += em[q] / z * 1e5;
    }
    best = std::max(best, value - pen);
  }
  return best;
}

// Student t density integrated with composite Simpson's rule; two-sided
// tail P(|T| >= t) = 1 - 2 * integral_0^t f.
inline double t_two_sided_by_quadrature(double t, double df, int intervals = 20000) {
  const double c = std::exp(std::lgamma((df + 1) / 2) - std::lgamma(df / 2)) / std::sqrt(df * M_PI);
  auto f = [&](double x) { return c * std::pow(1.0 + x * x / df, -(df + 1) / 2); };
  const double h = t / intervals;
  double s = f(0.0) + f(t);
  for (int i = 1; i < intervals; ++i) s += f(i * h) * (i % 2 ? 4.0 : 2.0);
  return 1.0 - 2.0 * (s * h / 3.0);
}

// Welch t with the textbook formulas, written independently of stats.hpp.
struct Welch {
  double t, df;
};

inline Welch welch(const std::vector<double>& a, const std::vector<double>& b) {
  auto mean = [](const std::vector<double>& x) {
    double s = 0;
    for (double v : x) s += v;
    return s / x.size();
  };
  auto var = [&](const std::vector<double>& x) {
    const double m = mean(x);
    double s = 0;
    for (double v : x) s += (v - m) * (v - m);
    return s / (x.size() - 1);
  };
  const double qa = var(a) / a.size(), qb = var(b) / b.size();
  return {(mean(a) - mean(b)) / std::sqrt(qa + qb),
          (qa + qb) * (qa + qb) / (qa * qa / (a.size() - 1) + qb * qb / (b.size() - 1))};
}

}  // namespace oracle
