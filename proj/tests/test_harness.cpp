#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "dgf/record.hpp"
#include "support.hpp"

using namespace dgf;

namespace {

nlohmann::json reference_json() { return to_json(support::load_shipped("reference")); }

std::string schema_field(const nlohmann::json& j) {
  try {
    parse_config(j);
  } catch (const SchemaError& e) {
    return e.field();
  }
  return "";
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Config, ShippedConfigsLoad) {
  for (const char* name : {"reference", "death_only", "birth_only", "reaction_free", "conservative", "point_mass"}) {
    const RunConfig c = support::load_shipped(name);
    EXPECT_EQ(c.name, name);
    EXPECT_TRUE(check_config(c).passed()) << name;
  }
}

TEST(Config, RoundTripPreservesHash) {
  const RunConfig a = support::load_shipped("reference");
  const RunConfig b = parse_config(to_json(a));
  EXPECT_EQ(config_hash(a), config_hash(b));
  EXPECT_EQ(to_json(a), to_json(b));
  EXPECT_EQ(config_hash(a), config_hash(support::load_shipped("reference")));
  EXPECT_NE(config_hash(a), config_hash(support::load_shipped("reaction_free")));
  const RunConfig c = parse_config_text(to_json(a).dump());
  EXPECT_EQ(config_hash(a), config_hash(c));
}

TEST(Config, ReferenceValues) {
  const RunConfig c = support::load_shipped("reference");
  EXPECT_EQ(c.R0, 1.0);
  EXPECT_EQ(c.r_bar(), 2.0);
  EXPECT_EQ(c.n_cells(), 1600u);
  EXPECT_EQ(c.experiment.K, (std::vector<std::size_t>{100, 400, 1600}));
  EXPECT_EQ(c.kernel.n_quad, 32u);
  const CoefficientSet k = c.coefficients();
  EXPECT_NEAR(k.zeta(3.0, 1.0), 1.0, 1e-15);
  EXPECT_NEAR(k.diff(2.0, 1.0), 0.2 * 2.0 * 1.5, 1e-15);
  EXPECT_NEAR(k.birth(1.0, 0.5), 2.5 * 0.5 * 0.5, 1e-15);
  EXPECT_NEAR(k.death(4.0), 1.0, 1e-15);
  EXPECT_NEAR(k.chi(7.0, 1.5), 0.75, 1e-15);
}

TEST(Config, SchemaErrorsNameTheField) {
  auto j = reference_json();
  j["model"].erase("r_in");
  EXPECT_EQ(schema_field(j), "model.r_in");

  j = reference_json();
  j["numerics"]["bogus"] = 1;
  EXPECT_EQ(schema_field(j), "numerics.bogus");

  j = reference_json();
  j["model"]["R0"] = -1.0;
  EXPECT_EQ(schema_field(j), "model.R0");

  j = reference_json();
  j["experiment"]["snapshot_times"] = {1.5, 1.0};
  EXPECT_EQ(schema_field(j), "experiment.snapshot_times");

  j = reference_json();
  j["schema_version"] = 99;
  EXPECT_EQ(schema_field(j), "schema_version");
}

TEST(Config, SyntaxErrorReportsLine) {
  try {
    parse_config_text("{\n  \"name\": \"x\",\n  oops\n}");
    FAIL();
  } catch (const SchemaError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
  EXPECT_THROW(load_config("/nonexistent/file.json"), SchemaError);
}

TEST(Config, GuardsDetectBadNumerics) {
  auto j = reference_json();
  j["numerics"]["dt_ibm"] = 0.05;
  ConfigReport rep = check_config(parse_config(j));
  EXPECT_FALSE(rep.passed());
  bool saw = false;
  for (const auto& g : rep.guards)
    if (g.name == "ibm_step_rate") {
      saw = true;
      EXPECT_FALSE(g.pass);
      // sup b = 2.5 * (2 / 2.5) * (40 / 41) at r = r_bar, x = x_max
      EXPECT_NEAR(g.value, 0.05 * (2.0 * 40.0 / 41.0 + 1.0), 1e-9);
    }
  EXPECT_TRUE(saw);

  j = reference_json();
  j["numerics"]["dt_pde"] = 0.05;
  rep = check_config(parse_config(j));
  EXPECT_FALSE(rep.passed());

  j = reference_json();
  j["experiment"]["snapshot_times"] = {1.0021, 2.0};
  rep = check_config(parse_config(j));
  EXPECT_FALSE(rep.passed());
}

TEST(Harness, JobSeedsAreDeterministicAndDistinct) {
  const RunConfig c = support::load_shipped("reference");
  EXPECT_EQ(job_seed(c, 100, 1), job_seed(c, 100, 1));
  EXPECT_NE(job_seed(c, 100, 1), job_seed(c, 100, 2));
  EXPECT_NE(job_seed(c, 100, 1), job_seed(c, 400, 1));
  RunConfig d = c;
  d.experiment.run_seed = 2;
  EXPECT_NE(job_seed(c, 100, 1), job_seed(d, 100, 1));

  d = c;
  d.experiment.T = 0.1;
  d.experiment.snapshot_times = {0.1};
  const auto a = run_ibm(d, 50, 3), b = run_ibm(d, 50, 3);
  EXPECT_EQ(a.snapshots.back().traits, b.snapshots.back().traits);
  EXPECT_EQ(a.snapshots.back().resource, b.snapshots.back().resource);
}

TEST(Harness, ConvergePreconditions) {
  RunConfig c = support::load_shipped("reference");
  c.experiment.K = {100, 400};
  EXPECT_THROW(converge_experiment(c), ParamOutOfRange);
  c.experiment.K = {100, 400, 1000};
  EXPECT_THROW(converge_experiment(c), ParamOutOfRange);
  c.experiment.K = {100, 400, 1600};
  c.experiment.seeds = {1, 2};
  EXPECT_THROW(converge_experiment(c), ParamOutOfRange);
}

TEST(Harness, ConvergeSmallRun) {
  RunConfig c = support::load_shipped("reference");
  c.experiment.T = 0.2;
  c.experiment.snapshot_times = {0.1, 0.2};
  c.experiment.K = {10, 20, 40};
  c.experiment.seeds = {1, 2, 3};
  const ConvergeReport r = converge_experiment(c);
  EXPECT_EQ(r.pde_self_distance, 0.0);
  EXPECT_EQ(r.rows.size(), 9u);
  EXPECT_EQ(r.mean_bl.size(), 3u);
  EXPECT_EQ(r.fitted_rate.size(), 2u);
  EXPECT_EQ(r.dictionary.size(), 64u);
  EXPECT_TRUE(r.pde_bracket.pass);
  for (const auto& row : r.rows) {
    EXPECT_TRUE(row.bracket.pass);
    for (double v : row.bl) EXPECT_GE(v, 0.0);
  }
}

TEST(Harness, WeakBatteryStaysInsideDomain) {
  for (double L : {10.0, 40.0, 80.0})
    for (const auto& [name, tf] : weak_test_battery(L)) {
      EXPECT_EQ(tf.f(L), 0.0) << name;
      EXPECT_EQ(tf.f(0.99 * L), 0.0) << name;
    }
}

TEST(Record, PersistWritesCsvAndManifest) {
  const RunConfig c = support::load_shipped("point_mass");
  RunRecord rec = make_record("solve-pde", c);
  RunConfig small = c;
  small.experiment.T = 0.05;
  const PdeTrajectory traj = run_pde(small);
  rec.tables.push_back(pde_table(traj));
  rec.dictionary = {"const(0.5)"};
  rec.summary = {{"final_mass", traj.mass.back()}};
  const auto dir = std::filesystem::temp_directory_path() / "dgf_record_test";
  std::filesystem::remove_all(dir);
  const auto path = persist_record(rec, dir);
  const auto m = nlohmann::json::parse(slurp(path));
  EXPECT_EQ(m.at("config_hash"), config_hash(c));
  EXPECT_EQ(m.at("verb"), "solve-pde");
  EXPECT_EQ(m.at("csv_version"), kCsvVersion);
  EXPECT_EQ(m.at("right_boundary"), "zero-flux");
  EXPECT_EQ(m.at("dictionary").size(), 1u);
  EXPECT_TRUE(m.at("tolerances").contains("cfl_max"));
  EXPECT_TRUE(m.at("tolerances").contains("negativity_tol"));
  EXPECT_EQ(parse_config(m.at("config")).name, "point_mass");
  const std::string csv = slurp(dir / "pde.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "time,mass,moment1,resource,tail");
  std::size_t lines = 0;
  for (char ch : csv) lines += ch == '\n' ? 1 : 0;
  EXPECT_EQ(lines, traj.times.size() + 1);
  std::filesystem::remove_all(dir);
}

TEST(Record, CsvRowWidthChecked) {
  CsvTable t{"x", {"a", "b"}, {}};
  t.add({1.0, 2.0});
  EXPECT_THROW(t.add({1.0}), Error);
  EXPECT_EQ(t.str(), "a,b\n1,2\n");
}
