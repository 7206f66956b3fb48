#pragma once

#include <random>
#include <vector>

#include "plantmarket/plantmarket.hpp"

namespace fixtures {

// One plant, two fuels, one pollutant; interior optimum near 5/6 of the
// capacity on the cheap fuel. Same data as samples/toy_one_plant.json.
inline plantmarket::Problem toy_problem() {
  plantmarket::Problem pb;
  pb.plants = {{"toy", 0.001, 1.0, 0.0, 0.0, 1000.0}};
  pb.fuels = {{"cheap", 1.0, 1.0, 1e9, {1.0}}, {"dear", 2.0, 1.0, 1e9, {0.5}}};
  pb.scenario = {"1", {0.001}, {1e9}, 1.0};
  pb.market = {3.5, 0.0005, 0.0, 0.0, 1.0, plantmarket::PriceMode::PerPlantNet};
  return pb;
}

inline plantmarket::Problem paper_problem(std::size_t scenario) {
  return plantmarket::builtin_paper_example().problem(scenario);
}

// Random plan where each plant runs at a random fraction (up to
// `max_load`) of capacity, split at random between fuels.
inline plantmarket::ProductionPlan random_plan(const plantmarket::Problem& pb, std::mt19937_64& rng,
                                               double max_load = 1.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  plantmarket::ProductionPlan plan(pb.plants.size(), pb.fuels.size());
  for (std::size_t i = 0; i < pb.plants.size(); ++i) {
    std::vector<double> w(pb.fuels.size());
    double s = 0;
    for (double& x : w) s += (x = u(rng) + 1e-9);
    const double load = max_load * u(rng) * pb.plants[i].p_max;
    for (std::size_t j = 0; j < w.size(); ++j) plan(i, j) = load * w[j] / s;
  }
  return plan;
}

}  // namespace fixtures
