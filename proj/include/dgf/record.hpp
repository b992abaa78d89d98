#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dgf/config.hpp"
#include "dgf/errors.hpp"
#include "dgf/ibm.hpp"
#include "dgf/pde.hpp"

#ifndef DGF_VERSION
#define DGF_VERSION "0.1.0"
#endif

namespace dgf {

inline constexpr int kCsvVersion = 1;

inline std::string tool_version() { return DGF_VERSION; }

/// Rectangular table written as CSV; the header fixes the column order.
struct CsvTable {
  std::string name;  // file stem
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add(std::vector<double> row) {
    if (row.size() != columns.size()) throw Error("CsvTable: row width does not match header");
    rows.push_back(std::move(row));
  }

  std::string str() const {
    std::ostringstream os;
    os << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
    os << '\n';
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
      os << '\n';
    }
    return os.str();
  }
};

struct RunRecord {
  std::string verb;
  std::string config_name;
  std::string config_hash;
  std::vector<std::uint64_t> seeds;
  std::string version = tool_version();
  double wall_clock = 0.0;  // seconds
  nlohmann::json tolerances = nlohmann::json::object();
  nlohmann::json summary = nlohmann::json::object();
  std::string right_boundary = "zero-flux";
  std::vector<std::string> dictionary;
  std::vector<CsvTable> tables;
  nlohmann::json config = nlohmann::json::object();
};

/// Every tolerance a run depends on, taken from the configuration.
inline nlohmann::json tolerances_of(const RunConfig& c) {
  const Numerics& n = c.numerics;
  return {{"cfl_max", n.cfl_max},
          {"negativity_tol", n.negativity_tol},
          {"truncation_tol", n.truncation_tol},
          {"initial_tail_tol", n.initial_tail_tol},
          {"ibm_rate_max", 0.1},
          {"ibm_max_clamp_fraction", 1e-6},
          {"resource_bracket_tol", 1e-6},
          {"dt_ibm", n.dt_ibm},
          {"dt_pde", n.dt_pde},
          {"dt_sde", n.dt_sde},
          {"dx", n.dx},
          {"x_max", n.x_max},
          {"n_quad", n.n_quad},
          {"h_points", n.h_points},
          {"h_max", n.h_max},
          {"h_floor", n.h_floor}};
}

inline RunRecord make_record(const std::string& verb, const RunConfig& c) {
  RunRecord r;
  r.verb = verb;
  r.config_name = c.name;
  r.config_hash = config_hash(c);
  r.seeds = c.experiment.seeds;
  r.tolerances = tolerances_of(c);
  r.config = to_json(c);
  return r;
}

inline CsvTable ibm_table(const IbmTrajectory& traj) {
  CsvTable t{"ibm_K" + std::to_string(traj.K) + "_seed" + std::to_string(traj.seed),
             {"time", "mass", "moment1", "resource", "moment2", "count", "min_trait"},
             {}};
  for (const auto& s : traj.summaries)
    t.add({s.time, s.mass, s.moment1, s.resource, s.moment2, static_cast<double>(s.count), s.min_trait});
  return t;
}

inline CsvTable pde_table(const PdeTrajectory& traj, const std::string& name = "pde") {
  CsvTable t{name, {"time", "mass", "moment1", "resource", "tail"}, {}};
  for (std::size_t i = 0; i < traj.times.size(); ++i)
    t.add({traj.times[i], traj.mass[i], traj.moment1[i], traj.R[i], traj.tail[i]});
  return t;
}

inline nlohmann::json manifest(const RunRecord& r, const std::vector<std::string>& files) {
  return {{"tool", "dgf"},
          {"version", r.version},
          {"csv_version", kCsvVersion},
          {"schema_version", kSchemaVersion},
          {"verb", r.verb},
          {"config_name", r.config_name},
          {"config_hash", r.config_hash},
          {"seeds", r.seeds},
          {"wall_clock_seconds", r.wall_clock},
          {"tolerances", r.tolerances},
          {"right_boundary", r.right_boundary},
          {"dictionary", r.dictionary},
          {"outputs", files},
          {"summary", r.summary},
          {"config", r.config}};
}

/// Writes the tables as CSV and a manifest.json into dir; returns the manifest path.
inline std::filesystem::path persist_record(const RunRecord& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> files;
  for (const auto& t : r.tables) {
    const std::string file = t.name + ".csv";
    std::ofstream os(dir / file);
    if (!os) throw Error("persist_record: cannot write " + (dir / file).string());
    os << t.str();
    files.push_back(file);
  }
  const auto path = dir / "manifest.json";
  std::ofstream os(path);
  if (!os) throw Error("persist_record: cannot write " + path.string());
  os << manifest(r, files).dump(2) << '\n';
  return path;
}

/// Wall-clock stopwatch in seconds.
class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace dgf
