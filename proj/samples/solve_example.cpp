// Solves scenario 1 and scenario 6 of the built-in example with the PSO
// and prints how the fuel mix shifts as external costs rise.

#include <iostream>

#include "plantmarket/plantmarket.hpp"

int main() {
  namespace pm = plantmarket;
  const auto spec = pm::builtin_paper_example();

  for (std::size_t s : {1u, 6u}) {
    const auto problem = spec.problem(s);
    pm::PsoConfig cfg = spec.pso;
    const auto out = pm::pso_solve(problem, pm::Market::Collusion, cfg);
    const auto eval = pm::evaluate(problem, out.best_plan);
    std::cout << "scenario " << s << ": total profit " << eval.total_profit() << " USD\n";
    for (std::size_t j = 0; j < spec.fuels.size(); ++j)
      std::cout << "  " << spec.fuels[j].name << " consumed " << eval.fuel_consumed[j] << '\n';
  }
}
