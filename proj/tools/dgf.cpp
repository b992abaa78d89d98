#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "dgf/dgf.hpp"

namespace {

using nlohmann::json;

struct Globals {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  bool strict = false;
};

json bracket_json(const dgf::ResourceBracket& b) {
  return {{"min", b.min}, {"max", b.max}, {"upper", b.upper}, {"lower_bound", b.lower_bound}, {"rho", b.rho},
          {"pass", b.pass}};
}

json profile_json(const dgf::DifferenceProfile& p) {
  return {{"m", p.m}, {"slope", p.slope}, {"ci_low", p.ci_low}, {"ci_high", p.ci_high}, {"h", p.h}, {"l1", p.l1}};
}

std::string short_number(double t) {
  std::ostringstream os;
  os << t;
  return os.str();
}

dgf::RunConfig load(const Globals& g) {
  dgf::RunConfig c = dgf::load_config(g.config);
  if (g.seed) c.experiment.run_seed = *g.seed;
  return c;
}

int finish(dgf::RunRecord& rec, const Globals& g, const dgf::Stopwatch& sw, bool ok) {
  rec.wall_clock = sw.seconds();
  rec.summary["checks_passed"] = ok;
  if (!g.out.empty()) {
    const auto path = dgf::persist_record(rec, g.out);
    std::cerr << "wrote " << path.string() << '\n';
  }
  std::cout << rec.summary.dump(2) << '\n';
  return (g.strict && !ok) ? 4 : 0;
}

int cmd_validate(const Globals& g) {
  const dgf::Stopwatch sw;
  const dgf::RunConfig c = load(g);
  const dgf::ConfigReport rep = dgf::check_config(c);
  dgf::RunRecord rec = dgf::make_record("validate", c);
  json entries = json::array();
  for (const auto& e : rep.coefficients.entries) {
    const char* st = e.status == dgf::ValidationEntry::Status::Pass   ? "pass"
                     : e.status == dgf::ValidationEntry::Status::Fail ? "fail"
                                                                      : "warn";
    entries.push_back({{"id", e.id}, {"clause", e.clause}, {"status", st}, {"witness_x", e.witness_x},
                       {"witness_r", e.witness_r}, {"magnitude", e.magnitude}});
  }
  json guards = json::array();
  bool guards_ok = true;
  for (const auto& gc : rep.guards) {
    guards.push_back({{"name", gc.name}, {"pass", gc.pass}, {"value", gc.value}, {"limit", gc.limit}});
    guards_ok = guards_ok && gc.pass;
  }
  rec.summary = {{"config_hash", rec.config_hash}, {"coefficients", entries}, {"guards", guards},
                 {"c_lower", rep.coefficients.c_lower}, {"coefficients_pass", rep.coefficients.passed()}};
  const int code = finish(rec, g, sw, rep.passed());
  if (!guards_ok) return 3;
  return code;
}

int cmd_simulate_ibm(const Globals& g, std::size_t K, std::uint64_t replicate) {
  const dgf::Stopwatch sw;
  const dgf::RunConfig c = load(g);
  if (K == 0) K = c.experiment.K.front();
  const dgf::IbmTrajectory traj = dgf::run_ibm(c, K, replicate);
  dgf::RunRecord rec = dgf::make_record("simulate-ibm", c);
  rec.seeds = {replicate};
  rec.tables.push_back(dgf::ibm_table(traj));
  const dgf::ResourceBracket b = dgf::resource_bracket(traj, c);
  const auto& last = traj.summaries.back();
  rec.summary = {{"config_hash", rec.config_hash}, {"K", K}, {"replicate", replicate},
                 {"job_seed", dgf::job_seed(c, K, replicate)}, {"final_mass", last.mass},
                 {"final_resource", last.resource}, {"final_count", last.count}, {"births", traj.counters.births},
                 {"deaths", traj.counters.deaths}, {"resource_clamps", traj.counters.resource_clamps},
                 {"resource_bracket", bracket_json(b)}};
  return finish(rec, g, sw, b.pass);
}

int cmd_solve_pde(const Globals& g, double refine) {
  const dgf::Stopwatch sw;
  const dgf::RunConfig c = load(g);
  const dgf::PdeTrajectory traj = dgf::run_pde(c, refine);
  dgf::RunRecord rec = dgf::make_record("solve-pde", c);
  rec.seeds.clear();
  rec.right_boundary = traj.right_boundary;
  rec.tables.push_back(dgf::pde_table(traj));
  dgf::CsvTable profile{"pde_profile_T", {"x", "u"}, {}};
  const dgf::GridFunction& u = traj.u.back();
  for (std::size_t j = 0; j < u.size(); ++j) profile.add({u.center(j), u.values[j]});
  rec.tables.push_back(profile);
  const dgf::ResourceBracket b = dgf::resource_bracket(traj, c);
  rec.summary = {{"config_hash", rec.config_hash}, {"refine", refine}, {"final_mass", traj.mass.back()},
                 {"final_resource", traj.R.back()}, {"clipped_mass", traj.clipped_mass},
                 {"max_tail", dgf::max_of(traj.tail)}, {"resource_bracket", bracket_json(b)}};
  return finish(rec, g, sw, b.pass);
}

int cmd_converge(const Globals& g) {
  const dgf::Stopwatch sw;
  const dgf::RunConfig c = load(g);
  const dgf::ConvergeReport rep = dgf::converge_experiment(c, g.threads);
  dgf::RunRecord rec = dgf::make_record("converge", c);
  rec.dictionary = rep.dictionary;
  dgf::CsvTable rows{"converge_runs", {"K", "seed"}, {}};
  for (double t : rep.times) rows.columns.push_back("bl_t" + short_number(t));
  rows.columns.push_back("resource_error_T");
  bool brackets = rep.pde_bracket.pass;
  for (const auto& r : rep.rows) {
    std::vector<double> row{static_cast<double>(r.K), static_cast<double>(r.seed)};
    row.insert(row.end(), r.bl.begin(), r.bl.end());
    row.push_back(r.resource_error);
    rows.add(row);
    brackets = brackets && r.bracket.pass;
  }
  rec.tables.push_back(rows);
  json perK = json::array();
  for (std::size_t i = 0; i < rep.K.size(); ++i)
    perK.push_back({{"K", rep.K[i]}, {"mean_bl", rep.mean_bl[i]}, {"se_bl", rep.se_bl[i]},
                    {"mean_resource_error", rep.mean_resource_error[i]}});
  const bool ok = rep.bl_strictly_decreasing() && rep.worst_ratio() <= 0.5 && rep.resource_strictly_decreasing() &&
                  brackets;
  rec.summary = {{"config_hash", rec.config_hash}, {"times", rep.times}, {"per_K", perK},
                 {"fitted_rate", rep.fitted_rate}, {"worst_ratio", rep.worst_ratio()},
                 {"bl_strictly_decreasing", rep.bl_strictly_decreasing()},
                 {"resource_strictly_decreasing", rep.resource_strictly_decreasing()},
                 {"pde_self_distance", rep.pde_self_distance}, {"resource_brackets_pass", brackets}};
  return finish(rec, g, sw, ok);
}

int cmd_agree(const Globals& g) {
  const dgf::Stopwatch sw;
  const dgf::RunConfig c = load(g);
  const dgf::AgreementReport rep = dgf::agreement_experiment(c, g.threads);
  dgf::RunRecord rec = dgf::make_record("agree", c);
  rec.seeds = {c.experiment.run_seed};
  json weak = json::array();
  for (const auto& w : rep.weak)
    weak.push_back({{"test_function", w.test_function}, {"coarse", w.coarse}, {"fine", w.fine}, {"ratio", w.ratio}});
  const auto& m = rep.mild;
  dgf::CsvTable bins{"mild_bins", {"lo", "hi", "lhs", "rhs", "rhs_sd"}, {}};
  for (std::size_t k = 0; k < m.lhs.size(); ++k) bins.add({m.bin_edges[k], m.bin_edges[k + 1], m.lhs[k], m.rhs[k], m.rhs_sd[k]});
  rec.tables.push_back(bins);
  rec.summary = {{"config_hash", rec.config_hash},
                 {"weak_residuals", weak},
                 {"min_weak_ratio", rep.min_weak_ratio()},
                 {"mild",
                  {{"t", m.t}, {"residual", m.residual}, {"mc_se", m.mc_se}, {"noise_floor", m.noise_floor},
                   {"histogram_bias", m.histogram_bias}, {"quadrature_bound", m.quadrature_bound},
                   {"sde_bias", m.sde_bias}, {"pde_error", m.pde_error}, {"budget", m.budget},
                   {"within_budget", m.within_budget}}},
                 {"resource_bracket", bracket_json(rep.bracket)}};
  return finish(rec, g, sw, rep.min_weak_ratio() >= 2.0 && m.within_budget && rep.bracket.pass);
}

int cmd_diagnose(const Globals& g) {
  const dgf::Stopwatch sw;
  const dgf::RunConfig c = load(g);
  const dgf::DensityReport rep = dgf::density_diagnostics(c, g.threads);
  dgf::RunRecord rec = dgf::make_record("diagnose-density", c);
  rec.seeds = {c.experiment.run_seed};
  bool atoms_ok = true;
  for (std::size_t i = 0; i < rep.eps.size(); ++i)
    atoms_ok = atoms_ok && rep.pde_atom_fraction[i] < 1e-3 && rep.sde_atom_fraction[i] < 1e-3;
  const auto& p = rep.predicted_at_optimum;
  rec.summary = {{"config_hash", rec.config_hash},
                 {"t", rep.t},
                 {"c_lower", rep.c_lower},
                 {"resource_at_t", rep.resource_at_t},
                 {"eps", rep.eps},
                 {"pde_atom_fraction", rep.pde_atom_fraction},
                 {"sde_atom_fraction", rep.sde_atom_fraction},
                 {"weighted_profile", profile_json(rep.weighted_profile)},
                 {"weighted_l1", rep.weighted_l1},
                 {"weighted_besov_norm_at_lambda_max", rep.weighted_besov_lambda_max},
                 {"transition_start", rep.transition_start},
                 {"transition_profile", profile_json(rep.transition_profile)},
                 {"lambda_max", rep.lambda_max},
                 {"predicted", {{"alpha", p.alpha}, {"beta", p.beta}, {"m", p.m}, {"k", p.k}, {"eta", p.eta}, {"s", p.s}}}};
  const bool ok = atoms_ok && rep.weighted_profile.ci_low > 0.0;
  return finish(rec, g, sw, ok);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Growth-fragmentation chemostat toolkit"};
  app.set_version_flag("--version", dgf::tool_version());
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "Run configuration (JSON)");
  app.add_option("--out", g.out, "Output directory for CSV and manifest");
  app.add_option("--seed", g.seed, "Override the run seed");
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--strict", g.strict, "Exit with 4 if a run's checks fail");

  auto* validate = app.add_subcommand("validate", "Check the configuration and coefficient assumptions");
  auto* ibm = app.add_subcommand("simulate-ibm", "Run one individual-based trajectory");
  std::size_t K = 0;
  std::uint64_t replicate = 1;
  ibm->add_option("--K", K, "Carrying capacity (default: first K of the config)");
  ibm->add_option("--replicate", replicate, "Replicate index mixed into the run seed");
  auto* pde = app.add_subcommand("solve-pde", "Solve the deterministic limit");
  double refine = 1.0;
  pde->add_option("--refine", refine, "Grid refinement factor")->check(CLI::PositiveNumber);
  auto* conv = app.add_subcommand("converge", "Large-K convergence sweep");
  auto* agree = app.add_subcommand("agree", "PDE resolution and mild-formulation agreement");
  auto* diag = app.add_subcommand("diagnose-density", "Atom and smoothness diagnostics");
  for (auto* s : {validate, ibm, pde, conv, agree, diag}) {
    s->fallthrough();
  }

  CLI11_PARSE(app, argc, argv);
  if (g.config.empty()) {
    std::cerr << "error: --config is required\n";
    return 2;
  }
  try {
    if (*validate) return cmd_validate(g);
    if (*ibm) return cmd_simulate_ibm(g, K, replicate);
    if (*pde) return cmd_solve_pde(g, refine);
    if (*conv) return cmd_converge(g);
    if (*agree) return cmd_agree(g);
    if (*diag) return cmd_diagnose(g);
  } catch (const dgf::SchemaError& e) {
    std::cerr << "schema error: " << e.what() << '\n';
    return 2;
  } catch (const dgf::NumericalGuardError& e) {
    std::cerr << "numerical guard: " << e.what() << '\n';
    return 3;
  } catch (const dgf::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
