#pragma once

// Genome layout shared by the GA and the PSO. A genome holds one section
// per plant; each section has one gene per fuel plus, optionally, a slack
// gene. Decoding splits the plant's capacity in proportion to its genes.

#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include "plantmarket/errors.hpp"
#include "plantmarket/model.hpp"

namespace plantmarket {

struct Genome {
  std::vector<double> genes;  // each in [0, 1]

  bool operator==(const Genome&) const = default;
};

struct Encoding {
  std::size_t plants = 0;
  std::size_t fuels = 0;
  // With a slack gene a plant may run below capacity; without one every
  // plant produces exactly p_max.
  bool slack_gene = false;

  std::size_t section() const { return fuels + (slack_gene ? 1 : 0); }
  std::size_t length() const { return plants * section(); }

  static Encoding for_problem(const Problem& problem, bool slack_gene) {
    return {problem.plants.size(), problem.fuels.size(), slack_gene};
  }
};

/// Proportional split of each plant's capacity. An all-zero section is
/// split uniformly (including the slack share when present).
inline ProductionPlan decode(std::span<const double> genes, const Encoding& enc,
                             std::span<const PlantParams> plants) {
  if (genes.size() != enc.length())
    throw ConfigError("decode: genome has " + std::to_string(genes.size()) + " genes, expected " +
                      std::to_string(enc.length()));
  if (plants.size() != enc.plants) throw ConfigError("decode: plant count does not match encoding");

  ProductionPlan plan(enc.plants, enc.fuels);
  const std::size_t width = enc.section();
  for (std::size_t i = 0; i < enc.plants; ++i) {
    auto section = genes.subspan(i * width, width);
    const double sum = std::accumulate(section.begin(), section.end(), 0.0);
    const double p_max = plants[i].p_max;
    for (std::size_t j = 0; j < enc.fuels; ++j)
      plan(i, j) = sum > 0.0 ? (section[j] / sum) * p_max : p_max / static_cast<double>(width);
  }
  return plan;
}

inline ProductionPlan decode(const Genome& genome, const Encoding& enc, std::span<const PlantParams> plants) {
  return decode(std::span<const double>(genome.genes), enc, plants);
}

}  // namespace plantmarket
