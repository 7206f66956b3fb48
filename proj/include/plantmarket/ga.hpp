#pragma once

// Generational genetic algorithm over [0,1] genomes: tournament selection,
// two-point crossover on the flat genome, swap mutation, elitist carryover.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "plantmarket/errors.hpp"
#include "plantmarket/fitness.hpp"
#include "plantmarket/rng.hpp"

namespace plantmarket {

struct GaConfig {
  std::size_t population = 400;
  std::size_t iterations = 1000;
  double crossover_rate = 0.7;
  double mutation_rate = 0.2;  // per chromosome
  std::size_t tournament_size = 2;
  std::size_t elite_count = 1;
  std::uint64_t seed = 1;
  unsigned threads = 1;

  void validate() const {
    if (population < 2 || population % 2 != 0) throw ConfigError("ga: population must be even and >= 2");
    if (iterations < 1) throw ConfigError("ga: iterations must be >= 1");
    if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0)) throw ConfigError("ga: crossover_rate must be in [0,1]");
    if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) throw ConfigError("ga: mutation_rate must be in [0,1]");
    if (tournament_size < 2) throw ConfigError("ga: tournament_size must be >= 2");
    if (elite_count >= population) throw ConfigError("ga: elite_count must be smaller than population");
  }

  bool operator==(const GaConfig&) const = default;
};

/// Children of a two-point crossover that exchanges genes [lo, hi).
inline std::pair<Genome, Genome> two_point_crossover(const Genome& a, const Genome& b, std::size_t lo,
                                                     std::size_t hi) {
  if (a.genes.size() != b.genes.size()) throw ConfigError("crossover: parents differ in length");
  if (lo > hi || hi > a.genes.size()) throw ConfigError("crossover: invalid cut points");
  Genome c1 = a;
  Genome c2 = b;
  for (std::size_t k = lo; k < hi; ++k) std::swap(c1.genes[k], c2.genes[k]);
  return {std::move(c1), std::move(c2)};
}

inline void swap_mutation(Genome& g, std::size_t i, std::size_t j) { std::swap(g.genes.at(i), g.genes.at(j)); }

namespace detail {

inline std::size_t tournament(std::span<const Scored> scores, std::size_t k, Rng& rng) {
  std::size_t best = rng.below(scores.size());
  for (std::size_t t = 1; t < k; ++t) {
    const std::size_t c = rng.below(scores.size());
    if (scores[c].fitness > scores[best].fitness) best = c;
  }
  return best;
}

// Indices sorted by descending fitness; ties keep population order.
inline std::vector<std::size_t> ranking(std::span<const Scored> scores) {
  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t x, std::size_t y) { return scores[x].fitness > scores[y].fitness; });
  return idx;
}

}  // namespace detail

/// Runs the GA for cfg.iterations generations on genomes of
/// `genome_length` genes. `f` maps a gene span to a Scored and must be
/// safe to call concurrently when cfg.threads > 1.
template <class Fitness>
SearchResult ga_search(std::size_t genome_length, const Fitness& f, const GaConfig& cfg) {
  cfg.validate();
  if (genome_length == 0) throw SolverError("ga: genome length is zero");

  Rng rng(cfg.seed);
  const std::size_t n = cfg.population;

  std::vector<Genome> pop(n);
  for (auto& g : pop) {
    g.genes.resize(genome_length);
    for (double& x : g.genes) x = rng.uniform();
  }
  std::vector<Scored> scores(n);
  detail::score_all<Fitness>(pop, scores, f, cfg.threads);

  SearchResult result;
  result.evaluations = n;
  {
    const std::size_t top = detail::ranking(scores).front();
    result.best = pop[top];
    result.best_score = scores[top];
  }
  result.fitness_history.reserve(cfg.iterations);

  std::vector<Genome> next;
  std::vector<Scored> next_scores;
  for (std::size_t gen = 0; gen < cfg.iterations; ++gen) {
    next.clear();
    next_scores.clear();

    const auto order = detail::ranking(scores);
    for (std::size_t e = 0; e < cfg.elite_count; ++e) {
      next.push_back(pop[order[e]]);
      next_scores.push_back(scores[order[e]]);
    }
    const std::size_t first_child = next.size();

    while (next.size() < n) {
      const Genome& pa = pop[detail::tournament(scores, cfg.tournament_size, rng)];
      const Genome& pb = pop[detail::tournament(scores, cfg.tournament_size, rng)];
      std::pair<Genome, Genome> kids;
      if (rng.uniform() < cfg.crossover_rate) {
        std::size_t lo = rng.below(genome_length + 1);
        std::size_t hi = rng.below(genome_length + 1);
        if (lo > hi) std::swap(lo, hi);
        kids = two_point_crossover(pa, pb, lo, hi);
      } else {
        kids = {pa, pb};
      }
      for (Genome* kid : {&kids.first, &kids.second}) {
        if (next.size() == n) break;
        if (genome_length >= 2 && rng.uniform() < cfg.mutation_rate) {
          const std::size_t i = rng.below(genome_length);
          std::size_t j = rng.below(genome_length - 1);
          if (j >= i) ++j;
          swap_mutation(*kid, i, j);
        }
        next.push_back(std::move(*kid));
      }
    }

    next_scores.resize(n);
    detail::score_all<Fitness>(std::span<const Genome>(next).subspan(first_child),
                               std::span<Scored>(next_scores).subspan(first_child), f, cfg.threads);
    result.evaluations += n - first_child;

    std::swap(pop, next);
    std::swap(scores, next_scores);

    for (std::size_t i = 0; i < n; ++i) {
      if (scores[i].fitness > result.best_score.fitness) {
        result.best = pop[i];
        result.best_score = scores[i];
      }
    }
    result.fitness_history.push_back(result.best_score.fitness);
  }
  return result;
}

inline SolveOutcome ga_solve(const Problem& problem, Market market, const GaConfig& cfg, bool slack_gene = false) {
  problem.validate();
  PlanFitness f(problem, market, slack_gene);
  return to_outcome(ga_search(f.encoding().length(), f, cfg), f);
}

}  // namespace plantmarket
