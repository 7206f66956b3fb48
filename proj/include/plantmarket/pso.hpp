#pragma once

// Constriction-coefficient particle swarm over [0,1] genomes.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "plantmarket/errors.hpp"
#include "plantmarket/fitness.hpp"
#include "plantmarket/rng.hpp"

namespace plantmarket {

struct PsoConfig {
  std::size_t population = 400;
  std::size_t iterations = 1000;
  double phi1 = 2.05;
  double phi2 = 2.05;
  std::uint64_t seed = 1;
  unsigned threads = 1;

  void validate() const {
    if (population < 2) throw ConfigError("pso: population must be >= 2");
    if (iterations < 1) throw ConfigError("pso: iterations must be >= 1");
    if (!(phi1 >= 0.0) || !(phi2 >= 0.0)) throw ConfigError("pso: phi1 and phi2 must be >= 0");
    if (!(phi1 + phi2 > 4.0)) throw ConfigError("pso: phi1 + phi2 must exceed 4");
  }

  bool operator==(const PsoConfig&) const = default;
};

/// chi = 2 / |2 - phi - sqrt(phi^2 - 4 phi)|, defined for phi > 4.
inline double constriction(double phi) {
  if (!(phi > 4.0)) throw ConfigError("constriction: phi must exceed 4");
  return 2.0 / std::abs(2.0 - phi - std::sqrt(phi * phi - 4.0 * phi));
}

/// Synchronous swarm: every particle moves, then all are scored, then the
/// personal and global bests are updated. Velocities start at zero and
/// positions are clamped to [0,1] after each move.
template <class Fitness>
class ParticleSwarm {
 public:
  ParticleSwarm(std::size_t dimension, const Fitness& f, const PsoConfig& cfg)
      : f_(f), cfg_(cfg), rng_(cfg.seed), chi_(0.0) {
    cfg_.validate();
    chi_ = constriction(cfg_.phi1 + cfg_.phi2);
    if (dimension == 0) throw SolverError("pso: genome length is zero");
    std::vector<Genome> start(cfg_.population);
    for (auto& g : start) {
      g.genes.resize(dimension);
      for (double& x : g.genes) x = rng_.uniform();
    }
    reset(std::move(start));
  }

  /// Replaces all positions, zeroes velocities and rescores.
  void reset(std::vector<Genome> positions) {
    if (positions.empty()) throw SolverError("pso: empty swarm");
    x_ = std::move(positions);
    const std::size_t dim = x_.front().genes.size();
    for (const auto& g : x_)
      if (g.genes.size() != dim) throw SolverError("pso: particles differ in dimension");
    v_.assign(x_.size(), std::vector<double>(dim, 0.0));
    scores_.assign(x_.size(), Scored{});
    detail::score_all<Fitness>(x_, scores_, f_, cfg_.threads);
    evaluations_ += x_.size();
    pbest_ = x_;
    pbest_scores_ = scores_;
    gbest_ = 0;
    for (std::size_t i = 1; i < x_.size(); ++i)
      if (pbest_scores_[i].fitness > pbest_scores_[gbest_].fitness) gbest_ = i;
    gbest_genome_ = pbest_[gbest_];
    gbest_score_ = pbest_scores_[gbest_];
  }

  void step() {
    const double c1 = cfg_.phi1;
    const double c2 = cfg_.phi2;
    for (std::size_t i = 0; i < x_.size(); ++i) {
      auto& x = x_[i].genes;
      auto& v = v_[i];
      const auto& pb = pbest_[i].genes;
      const auto& gb = gbest_genome_.genes;
      for (std::size_t d = 0; d < x.size(); ++d) {
        const double r1 = rng_.uniform();
        const double r2 = rng_.uniform();
        v[d] = chi_ * (v[d] + c1 * r1 * (pb[d] - x[d]) + c2 * r2 * (gb[d] - x[d]));
        x[d] = std::clamp(x[d] + v[d], 0.0, 1.0);
      }
    }
    detail::score_all<Fitness>(x_, scores_, f_, cfg_.threads);
    evaluations_ += x_.size();
    for (std::size_t i = 0; i < x_.size(); ++i) {
      if (scores_[i].fitness > pbest_scores_[i].fitness) {
        pbest_[i] = x_[i];
        pbest_scores_[i] = scores_[i];
      }
    }
    for (std::size_t i = 0; i < x_.size(); ++i) {
      if (pbest_scores_[i].fitness > gbest_score_.fitness) {
        gbest_genome_ = pbest_[i];
        gbest_score_ = pbest_scores_[i];
      }
    }
  }

  double chi() const { return chi_; }
  const Genome& best() const { return gbest_genome_; }
  const Scored& best_score() const { return gbest_score_; }
  std::span<const Genome> positions() const { return x_; }
  std::size_t evaluations() const { return evaluations_; }

 private:
  const Fitness& f_;
  PsoConfig cfg_;
  Rng rng_;
  double chi_;
  std::vector<Genome> x_;
  std::vector<std::vector<double>> v_;
  std::vector<Scored> scores_;
  std::vector<Genome> pbest_;
  std::vector<Scored> pbest_scores_;
  std::size_t gbest_ = 0;
  Genome gbest_genome_;
  Scored gbest_score_;
  std::size_t evaluations_ = 0;
};

template <class Fitness>
SearchResult pso_search(std::size_t genome_length, const Fitness& f, const PsoConfig& cfg) {
  ParticleSwarm<Fitness> swarm(genome_length, f, cfg);
  SearchResult result;
  result.fitness_history.reserve(cfg.iterations);
  for (std::size_t it = 0; it < cfg.iterations; ++it) {
    swarm.step();
    result.fitness_history.push_back(swarm.best_score().fitness);
  }
  result.best = swarm.best();
  result.best_score = swarm.best_score();
  result.evaluations = swarm.evaluations();
  return result;
}

inline SolveOutcome pso_solve(const Problem& problem, Market market, const PsoConfig& cfg, bool slack_gene = false) {
  problem.validate();
  PlanFitness f(problem, market, slack_gene);
  return to_outcome(pso_search(f.encoding().length(), f, cfg), f);
}

}  // namespace plantmarket
