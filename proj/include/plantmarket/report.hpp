#pragma once

// CSV and JSON emission for run reports. Numbers are written in their
// shortest round-trip form so identical runs give byte-identical files.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

#include "plantmarket/config.hpp"
#include "plantmarket/errors.hpp"
#include "plantmarket/scenarios.hpp"

namespace plantmarket {

inline constexpr const char* kVersion = "0.1.0";

inline std::string format_number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline double parse_number(std::string_view s) {
  double x = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw ConfigError("not a number: '" + std::string(s) + "'");
  return x;
}

inline void write_raw_csv(std::ostream& out, const RunReport& report) {
  out << "scenario,market,solver,replication";
  for (const auto& c : report.raw_columns()) out << ',' << c;
  out << '\n';
  for (const auto& r : report.rows) {
    out << r.cell.scenario << ',' << to_string(r.cell.market) << ',' << to_string(r.cell.solver) << ','
        << r.replication;
    for (double v : metric_values(r)) out << ',' << format_number(v);
    out << '\n';
  }
}

inline void write_summary_csv(std::ostream& out, const RunReport& report) {
  out << "scenario,market,solver,replications";
  for (const auto& c : report.summary_columns()) out << ',' << c << "_mean," << c << "_std," << c << "_min," << c << "_max";
  out << '\n';
  for (const auto& s : report.summaries) {
    out << s.cell.scenario << ',' << to_string(s.cell.market) << ',' << to_string(s.cell.solver) << ','
        << s.replications;
    for (const auto& m : s.metrics)
      out << ',' << format_number(m.mean) << ',' << format_number(m.std) << ',' << format_number(m.min) << ','
          << format_number(m.max);
    out << '\n';
  }
}

namespace detail {

inline std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline std::size_t count_prefix(const std::vector<std::string_view>& header, std::string_view prefix) {
  std::size_t n = 0;
  for (auto h : header)
    if (h.substr(0, prefix.size()) == prefix) ++n;
  return n;
}

}  // namespace detail

/// Reads a raw CSV written by write_raw_csv and rebuilds the summaries.
inline RunReport read_raw_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("raw CSV is empty");
  const auto header = detail::split_csv(line);

  RunReport report;
  report.plants = detail::count_prefix(header, "profit_plant_");
  report.fuels = detail::count_prefix(header, "fuel_use_");
  report.pollutants = detail::count_prefix(header, "emission_");

  std::vector<std::string> expected{"scenario", "market", "solver", "replication"};
  for (auto& c : report.raw_columns()) expected.push_back(c);
  if (header.size() != expected.size()) throw ConfigError("raw CSV header has unexpected columns");
  for (std::size_t i = 0; i < expected.size(); ++i)
    if (header[i] != expected[i]) throw ConfigError("raw CSV header: expected '" + expected[i] + "'");

  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = detail::split_csv(line);
    if (f.size() != expected.size()) throw ConfigError("raw CSV line " + std::to_string(lineno) + ": wrong field count");
    RunRow r;
    r.cell.scenario = static_cast<std::size_t>(parse_number(f[0]));
    r.cell.market = parse_market(std::string(f[1]));
    r.cell.solver = parse_solver(std::string(f[2]));
    r.replication = static_cast<std::size_t>(parse_number(f[3]));
    std::size_t k = 4;
    r.total_profit = parse_number(f[k++]);
    for (std::size_t i = 0; i < report.plants; ++i) r.profit.push_back(parse_number(f[k++]));
    for (std::size_t i = 0; i < report.plants; ++i) r.production.push_back(parse_number(f[k++]));
    for (std::size_t j = 0; j < report.fuels; ++j) r.fuel_use.push_back(parse_number(f[k++]));
    for (std::size_t p = 0; p < report.pollutants; ++p) r.emission.push_back(parse_number(f[k++]));
    r.penalty = parse_number(f[k++]);
    r.wall_ms = parse_number(f[k++]);
    report.rows.push_back(std::move(r));
  }
  summarize(report);
  return report;
}

inline RunReport read_raw_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return read_raw_csv(in);
}

/// Unit labels for every reported quantity.
inline json units_json() {
  return {{"total_profit", "USD"},         {"profit_plant", "USD"},      {"production_plant", "MWh/year"},
          {"fuel_use", "fuel volume unit/year (lit or m3)"}, {"emission", "g/year"},
          {"penalty", "penalty units"},    {"wall_ms", "ms"}};
}

struct ManifestTimes {
  std::string started;
  std::string finished;
};

inline json manifest_json(const ExperimentSpec& spec, const RunReport& report, const ManifestTimes* times) {
  json j;
  j["software"] = "plantmarket";
  j["version"] = kVersion;
  j["spec_hash"] = spec_hash(spec);
  j["seed"] = spec.seed;
  j["output_scale"] = spec.market.output_scale;
  j["price_mode"] = to_string(spec.market.price_mode);
  j["slack_genes"] = spec.slack_genes;
  j["replications"] = spec.replications;
  j["rows"] = report.rows.size();
  j["cells"] = report.summaries.size();
  j["units"] = units_json();
  if (times) j["timestamps"] = {{"started", times->started}, {"finished", times->finished}};
  return j;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc | std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

/// Writes raw.csv, summary.csv and manifest.json into `dir`.
inline void write_report(const std::filesystem::path& dir, const ExperimentSpec& spec, const RunReport& report,
                         const ManifestTimes* times = nullptr) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
  std::ostringstream raw, summary;
  write_raw_csv(raw, report);
  write_summary_csv(summary, report);
  write_text(dir / "raw.csv", raw.str());
  write_text(dir / "summary.csv", summary.str());
  write_text(dir / "manifest.json", manifest_json(spec, report, times).dump(2) + "\n");
}

}  // namespace plantmarket
