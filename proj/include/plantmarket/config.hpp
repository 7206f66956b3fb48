#pragma once

// JSON form of ExperimentSpec. Unknown keys are rejected so that a typo
// in a config file fails loudly instead of silently using a default.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "plantmarket/errors.hpp"
#include "plantmarket/scenarios.hpp"

namespace plantmarket {

using json = nlohmann::json;

namespace detail {

inline void expect_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
}

inline void allow_keys(const json& j, std::initializer_list<const char*> keys, const std::string& where) {
  expect_object(j, where);
  for (const auto& [key, _] : j.items()) {
    bool known = false;
    for (const char* k : keys) known = known || key == k;
    if (!known) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

template <class T>
T get(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing key '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

template <class T>
T get_or(const json& j, const char* key, T fallback, const std::string& where) {
  return j.contains(key) ? get<T>(j, key, where) : fallback;
}

}  // namespace detail

inline json to_json(const ExperimentSpec& spec) {
  json j;
  j["pollutants"] = spec.pollutants;

  json plants = json::array();
  for (const auto& p : spec.plants)
    plants.push_back({{"name", p.name},
                      {"alpha", p.alpha},
                      {"beta", p.beta},
                      {"gamma", p.gamma},
                      {"mu", p.mu},
                      {"p_max", p.p_max}});
  j["plants"] = plants;

  json fuels = json::array();
  for (const auto& f : spec.fuels)
    fuels.push_back({{"name", f.name},
                     {"price", f.price},
                     {"inv_heating", f.inv_heating},
                     {"availability", f.availability},
                     {"emission", f.emission}});
  j["fuels"] = fuels;

  json scenarios = json::array();
  for (const auto& s : spec.scenarios)
    scenarios.push_back({{"name", s.name},
                         {"external_cost", s.external_cost},
                         {"cap", s.cap},
                         {"cap_unit_multiplier", s.cap_unit_multiplier}});
  j["scenarios"] = scenarios;

  j["market"] = {{"delta", spec.market.delta},
                 {"delta_prime", spec.market.delta_prime},
                 {"subsidy_rate", spec.market.subsidy_rate},
                 {"fom_cost", spec.market.fom_cost},
                 {"output_scale", spec.market.output_scale},
                 {"price_mode", to_string(spec.market.price_mode)}};

  std::vector<std::string> markets;
  for (Market m : spec.markets) markets.emplace_back(to_string(m));
  std::vector<std::string> solvers;
  for (SolverKind s : spec.solvers) solvers.emplace_back(to_string(s));
  j["run"] = {{"markets", markets},
              {"solvers", solvers},
              {"replications", spec.replications},
              {"seed", spec.seed},
              {"slack_genes", spec.slack_genes},
              {"comparison_metric", spec.comparison_metric}};

  j["ga"] = {{"population", spec.ga.population},
             {"iterations", spec.ga.iterations},
             {"crossover_rate", spec.ga.crossover_rate},
             {"mutation_rate", spec.ga.mutation_rate},
             {"tournament_size", spec.ga.tournament_size},
             {"elite_count", spec.ga.elite_count}};
  j["pso"] = {{"population", spec.pso.population},
              {"iterations", spec.pso.iterations},
              {"phi1", spec.pso.phi1},
              {"phi2", spec.pso.phi2}};
  return j;
}

/// Parses and validates a spec. Sections "run", "ga" and "pso" and a few
/// fields (noted below) are optional; everything else is required.
inline ExperimentSpec spec_from_json(const json& j) {
  using detail::allow_keys;
  using detail::get;
  using detail::get_or;

  allow_keys(j, {"pollutants", "plants", "fuels", "scenarios", "market", "run", "ga", "pso"}, "spec");
  ExperimentSpec spec;
  spec.pollutants = get<std::vector<std::string>>(j, "pollutants", "spec");

  for (const auto& p : get<json>(j, "plants", "spec")) {
    const std::string w = "plants[]";
    allow_keys(p, {"name", "alpha", "beta", "gamma", "mu", "p_max"}, w);
    spec.plants.push_back({get<std::string>(p, "name", w), get<double>(p, "alpha", w), get<double>(p, "beta", w),
                           get<double>(p, "gamma", w), get_or<double>(p, "mu", 0.0, w),
                           get<double>(p, "p_max", w)});
  }
  for (const auto& f : get<json>(j, "fuels", "spec")) {
    const std::string w = "fuels[]";
    allow_keys(f, {"name", "price", "inv_heating", "availability", "emission"}, w);
    spec.fuels.push_back({get<std::string>(f, "name", w), get<double>(f, "price", w),
                          get<double>(f, "inv_heating", w), get<double>(f, "availability", w),
                          get<std::vector<double>>(f, "emission", w)});
  }
  for (const auto& s : get<json>(j, "scenarios", "spec")) {
    const std::string w = "scenarios[]";
    allow_keys(s, {"name", "external_cost", "cap", "cap_unit_multiplier"}, w);
    spec.scenarios.push_back({get<std::string>(s, "name", w), get<std::vector<double>>(s, "external_cost", w),
                              get<std::vector<double>>(s, "cap", w),
                              get_or<double>(s, "cap_unit_multiplier", 1e6, w)});
  }

  {
    const json& m = get<json>(j, "market", "spec");
    const std::string w = "market";
    allow_keys(m, {"delta", "delta_prime", "subsidy_rate", "fom_cost", "output_scale", "price_mode"}, w);
    spec.market.delta = get<double>(m, "delta", w);
    spec.market.delta_prime = get<double>(m, "delta_prime", w);
    spec.market.subsidy_rate = get_or<double>(m, "subsidy_rate", 0.0, w);
    spec.market.fom_cost = get<double>(m, "fom_cost", w);
    spec.market.output_scale = get_or<double>(m, "output_scale", 1.0, w);
    spec.market.price_mode = parse_price_mode(get_or<std::string>(m, "price_mode", "per_plant_net", w));
  }

  if (j.contains("run")) {
    const json& r = j.at("run");
    const std::string w = "run";
    allow_keys(r, {"markets", "solvers", "replications", "seed", "slack_genes", "comparison_metric"}, w);
    if (r.contains("markets")) {
      spec.markets.clear();
      for (const auto& m : get<std::vector<std::string>>(r, "markets", w)) spec.markets.push_back(parse_market(m));
    }
    if (r.contains("solvers")) {
      spec.solvers.clear();
      for (const auto& s : get<std::vector<std::string>>(r, "solvers", w)) spec.solvers.push_back(parse_solver(s));
    }
    spec.replications = get_or<std::size_t>(r, "replications", spec.replications, w);
    spec.seed = get_or<std::uint64_t>(r, "seed", spec.seed, w);
    spec.slack_genes = get_or<bool>(r, "slack_genes", spec.slack_genes, w);
    spec.comparison_metric = get_or<std::string>(r, "comparison_metric", spec.comparison_metric, w);
  }
  if (j.contains("ga")) {
    const json& g = j.at("ga");
    const std::string w = "ga";
    allow_keys(g, {"population", "iterations", "crossover_rate", "mutation_rate", "tournament_size", "elite_count"},
               w);
    spec.ga.population = get_or<std::size_t>(g, "population", spec.ga.population, w);
    spec.ga.iterations = get_or<std::size_t>(g, "iterations", spec.ga.iterations, w);
    spec.ga.crossover_rate = get_or<double>(g, "crossover_rate", spec.ga.crossover_rate, w);
    spec.ga.mutation_rate = get_or<double>(g, "mutation_rate", spec.ga.mutation_rate, w);
    spec.ga.tournament_size = get_or<std::size_t>(g, "tournament_size", spec.ga.tournament_size, w);
    spec.ga.elite_count = get_or<std::size_t>(g, "elite_count", spec.ga.elite_count, w);
  }
  if (j.contains("pso")) {
    const json& p = j.at("pso");
    const std::string w = "pso";
    allow_keys(p, {"population", "iterations", "phi1", "phi2"}, w);
    spec.pso.population = get_or<std::size_t>(p, "population", spec.pso.population, w);
    spec.pso.iterations = get_or<std::size_t>(p, "iterations", spec.pso.iterations, w);
    spec.pso.phi1 = get_or<double>(p, "phi1", spec.pso.phi1, w);
    spec.pso.phi2 = get_or<double>(p, "phi2", spec.pso.phi2, w);
  }

  spec.validate();
  return spec;
}

inline ExperimentSpec load_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open spec file '" + path.string() + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return spec_from_json(j);
}

/// Writes the spec. Refuses to replace an existing file unless `overwrite`.
inline void save_spec(const ExperimentSpec& spec, const std::filesystem::path& path, bool overwrite = false) {
  if (!overwrite && std::filesystem::exists(path))
    throw IoError("'" + path.string() + "' already exists (use --force to overwrite)");
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << to_json(spec).dump(2) << '\n';
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

/// 64-bit FNV-1a of the canonical JSON text, as 16 hex digits.
inline std::string spec_hash(const ExperimentSpec& spec) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : to_json(spec).dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

}  // namespace plantmarket
