#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <span>
#include <thread>
#include <vector>

#include "plantmarket/encoding.hpp"
#include "plantmarket/model.hpp"

namespace plantmarket {

/// Penalized fitness of one candidate. Maximized.
struct Scored {
  double fitness = 0.0;    // objective - penalty
  double objective = 0.0;  // raw collusion sum or competitive product
  double penalty = 0.0;

  bool operator==(const Scored&) const = default;
};

inline Scored fitness(const Problem& problem, const ProductionPlan& plan, Market market) {
  const EvaluationResult r = evaluate(problem, plan);
  Scored s;
  s.objective = objective_from_profits(market, r.profit);
  s.penalty = r.penalty();
  s.fitness = s.objective - s.penalty;
  return s;
}

/// Genome -> Scored adaptor over a Problem. Holds references; the problem
/// must outlive it.
class PlanFitness {
 public:
  PlanFitness(const Problem& problem, Market market, bool slack_gene)
      : problem_(problem), market_(market), encoding_(Encoding::for_problem(problem, slack_gene)) {}

  Scored operator()(std::span<const double> genes) const {
    return fitness(problem_, decode(genes, encoding_, problem_.plants), market_);
  }

  const Encoding& encoding() const { return encoding_; }
  const Problem& problem() const { return problem_; }
  Market market() const { return market_; }

 private:
  const Problem& problem_;
  Market market_;
  Encoding encoding_;
};

/// Result of a search over genomes.
struct SearchResult {
  Genome best;
  Scored best_score;
  std::vector<double> fitness_history;  // best-so-far after each iteration
  std::size_t evaluations = 0;

  bool operator==(const SearchResult&) const = default;
};

/// Result of solving a Problem: the search result plus the decoded plan.
struct SolveOutcome {
  ProductionPlan best_plan;
  Genome best_genome;
  double best_fitness = 0.0;
  double best_objective = 0.0;
  double best_penalty = 0.0;
  std::vector<double> fitness_history;
  std::size_t evaluations = 0;

  bool operator==(const SolveOutcome&) const = default;
};

inline SolveOutcome to_outcome(SearchResult&& search, const PlanFitness& f) {
  SolveOutcome out;
  out.best_plan = decode(search.best, f.encoding(), f.problem().plants);
  out.best_genome = std::move(search.best);
  out.best_fitness = search.best_score.fitness;
  out.best_objective = search.best_score.objective;
  out.best_penalty = search.best_score.penalty;
  out.fitness_history = std::move(search.fitness_history);
  out.evaluations = search.evaluations;
  return out;
}

namespace detail {

// Scores every genome. With threads > 1 the work is split into strided
// chunks; results land at fixed indices so the outcome does not depend on
// the thread count.
template <class Fitness>
void score_all(std::span<const Genome> genomes, std::span<Scored> out, const Fitness& f, unsigned threads) {
  const std::size_t n = genomes.size();
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) out[i] = f(std::span<const double>(genomes[i].genes));
    return;
  }
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < n; i += workers) out[i] = f(std::span<const double>(genomes[i].genes));
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace detail

}  // namespace plantmarket
