#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dgf/coefficients.hpp"
#include "dgf/errors.hpp"
#include "dgf/ibm.hpp"
#include "dgf/initial.hpp"
#include "dgf/kernel.hpp"
#include "dgf/pde.hpp"

namespace dgf {

inline constexpr int kSchemaVersion = 1;

struct KernelSpec {
  FragmentationKernel::Variant variant = FragmentationKernel::Variant::Uniform01;
  double shape = 1.0;
  std::vector<std::pair<double, double>> atoms;
  int n_quad = 32;

  FragmentationKernel build() const {
    switch (variant) {
      case FragmentationKernel::Variant::DiracHalf:
        return FragmentationKernel::dirac_half();
      case FragmentationKernel::Variant::Uniform01:
        return FragmentationKernel::uniform(n_quad);
      case FragmentationKernel::Variant::SymmetricBeta:
        return FragmentationKernel::symmetric_beta(shape, n_quad);
      case FragmentationKernel::Variant::DiscreteSymmetric:
        return FragmentationKernel::discrete(atoms);
    }
    return FragmentationKernel::uniform(n_quad);
  }
};

struct Numerics {
  double dt_ibm = 0.005;
  double dt_pde = 0.005;
  double dt_sde = 0.005;
  double dx = 0.025;
  double x_max = 40.0;
  int n_quad = 32;
  std::size_t dictionary_size = 64;
  double dictionary_scale = 10.0;
  std::size_t h_points = 16;
  double h_max = 0.5;
  double h_floor = 1e-3;
  std::size_t validation_grid = 201;
  double cfl_max = 0.9;
  double negativity_tol = 1e-8;
  double truncation_tol = 1e-6;
  double initial_tail_tol = 1e-8;
};

struct MildSettings {
  std::size_t s_nodes = 8;
  std::size_t strata = 16;
  std::size_t paths_per_node = 10000;
  std::size_t initial_paths = 100000;
  std::size_t bin_cells = 8;
  double range = 12.0;
};

struct DiagnosticSettings {
  double time = 1.0;
  std::vector<double> eps{1e-3};
  std::size_t n_paths = 100000;
  std::size_t bins = 400;
  int m = 1;
};

struct Experiment {
  double T = 2.0;
  std::vector<std::size_t> K{100, 400, 1600};
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  std::vector<double> snapshot_times{1.0, 2.0};
  std::uint64_t run_seed = 1;
  MildSettings mild{};
  DiagnosticSettings diagnostics{};
};

struct RunConfig {
  std::string name = "unnamed";
  FamilySpec family{};
  double R0 = 1.0;
  KernelSpec kernel{};
  InitialLaw initial{};
  Numerics numerics{};
  Experiment experiment{};

  double r_bar() const { return std::max(family.r_in, R0); }
  std::size_t n_cells() const { return static_cast<std::size_t>(std::llround(numerics.x_max / numerics.dx)); }
  CoefficientSet coefficients() const { return make_coefficients(family, numerics.x_max, r_bar()); }

  IbmSetup ibm_setup(std::size_t K) const {
    IbmSetup s;
    s.coefficients = coefficients();
    s.kernel = kernel.build();
    s.initial = initial;
    s.R0 = R0;
    s.T = experiment.T;
    s.dt = numerics.dt_ibm;
    s.K = K;
    s.snapshot_times = experiment.snapshot_times;
    return s;
  }

  /// PDE setup with the grid refined (refine > 1) or coarsened (refine < 1) in both dx and dt.
  PdeSetup pde_setup(double refine = 1.0) const {
    PdeSetup s;
    s.coefficients = coefficients();
    s.kernel = kernel.build();
    s.initial = initial;
    s.R0 = R0;
    s.T = experiment.T;
    s.dt = numerics.dt_pde / refine;
    s.x_max = numerics.x_max;
    s.n_cells = static_cast<std::size_t>(std::llround(static_cast<double>(n_cells()) * refine));
    s.guards = {numerics.cfl_max, numerics.negativity_tol, numerics.truncation_tol};
    return s;
  }
};

namespace detail {

using nlohmann::json;

class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw SchemaError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  bool has(const std::string& key) const { return j_.contains(key); }

  Reader sub(const std::string& key) const {
    if (!has(key)) throw SchemaError(field(key), "missing required section");
    return Reader(j_.at(key), field(key));
  }

  double number(const std::string& key) const {
    if (!has(key)) throw SchemaError(field(key), "missing required field");
    const json& v = j_.at(key);
    if (!v.is_number()) throw SchemaError(field(key), "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw SchemaError(field(key), "must be finite");
    return x;
  }
  double number(const std::string& key, double fallback) const { return has(key) ? number(key) : fallback; }

  double positive(const std::string& key) const {
    const double x = number(key);
    if (!(x > 0.0)) throw SchemaError(field(key), "must be > 0");
    return x;
  }
  double positive(const std::string& key, double fallback) const { return has(key) ? positive(key) : fallback; }

  std::size_t count(const std::string& key, std::size_t fallback) const {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) throw SchemaError(field(key), "expected a non-negative integer");
    return v.get<std::size_t>();
  }

  std::string text(const std::string& key) const {
    if (!has(key)) throw SchemaError(field(key), "missing required field");
    if (!j_.at(key).is_string()) throw SchemaError(field(key), "expected a string");
    return j_.at(key).get<std::string>();
  }
  std::string text(const std::string& key, const std::string& fallback) const { return has(key) ? text(key) : fallback; }

  std::vector<double> numbers(const std::string& key) const {
    if (!has(key)) throw SchemaError(field(key), "missing required field");
    const json& v = j_.at(key);
    if (!v.is_array()) throw SchemaError(field(key), "expected an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) throw SchemaError(field(key), "expected an array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  void only(std::initializer_list<const char*> allowed) const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      bool ok = false;
      for (const char* a : allowed) ok = ok || it.key() == a;
      if (!ok) throw SchemaError(field(it.key()), "unknown field");
    }
  }

  const json& raw() const { return j_; }

 private:
  const json& j_;
  std::string path_;
};

inline ShapeSpec read_shape(const Reader& r) {
  r.only({"kind", "theta"});
  ShapeSpec s;
  const std::string k = r.text("kind");
  if (k == "one") {
    s.kind = ShapeSpec::Kind::One;
  } else if (k == "saturating") {
    s.kind = ShapeSpec::Kind::Saturating;
    s.theta = r.positive("theta");
  } else {
    throw SchemaError(r.field("kind"), "expected 'one' or 'saturating'");
  }
  return s;
}

inline MonodSpec read_monod(const Reader& r) {
  r.only({"kind", "kappa"});
  MonodSpec s;
  const std::string k = r.text("kind");
  if (k == "constant") {
    s.kind = MonodSpec::Kind::Constant;
  } else if (k == "monod") {
    s.kind = MonodSpec::Kind::Monod;
    s.kappa = r.positive("kappa");
  } else {
    throw SchemaError(r.field("kind"), "expected 'constant' or 'monod'");
  }
  return s;
}

inline double non_negative(const Reader& r, const std::string& key, double fallback) {
  const double x = r.number(key, fallback);
  if (x < 0.0) throw SchemaError(r.field(key), "must be >= 0");
  return x;
}

inline FamilySpec read_family(const Reader& m) {
  FamilySpec f;
  f.r_in = m.positive("r_in");
  {
    const Reader d = m.sub("drift");
    d.only({"z0", "z1", "zx"});
    f.drift.z0 = d.positive("z0");
    f.drift.z1 = d.number("z1", 0.0);
    f.drift.zx = d.number("zx", 0.0);
  }
  {
    const Reader d = m.sub("diffusion");
    d.only({"kind", "delta0", "delta1", "s1", "offset"});
    const std::string k = d.text("kind");
    if (k == "multiplicative") {
      f.diffusion.kind = DiffusionSpec::Kind::Multiplicative;
      f.diffusion.delta0 = non_negative(d, "delta0", 0.0);
      f.diffusion.delta1 = non_negative(d, "delta1", 0.0);
    } else if (k == "resource_free") {
      f.diffusion.kind = DiffusionSpec::Kind::ResourceFree;
      f.diffusion.delta0 = non_negative(d, "delta0", 0.0);
      f.diffusion.s1 = non_negative(d, "s1", 0.0);
    } else if (k == "zero") {
      f.diffusion.kind = DiffusionSpec::Kind::Zero;
    } else {
      throw SchemaError(d.field("kind"), "expected 'multiplicative', 'resource_free' or 'zero'");
    }
    f.diffusion.offset = non_negative(d, "offset", 0.0);
  }
  {
    const Reader b = m.sub("birth");
    b.only({"b0", "resource", "shape"});
    f.birth.b0 = non_negative(b, "b0", 0.0);
    if (b.has("resource")) f.birth.resource = read_monod(b.sub("resource"));
    if (b.has("shape")) f.birth.shape = read_shape(b.sub("shape"));
  }
  {
    const Reader d = m.sub("death");
    d.only({"d0", "d1", "shape"});
    f.death.d0 = non_negative(d, "d0", 0.0);
    f.death.d1 = non_negative(d, "d1", 0.0);
    if (d.has("shape")) f.death.shape = read_shape(d.sub("shape"));
  }
  {
    const Reader c = m.sub("consumption");
    c.only({"chi0", "resource", "shape", "offset"});
    f.consumption.chi0 = non_negative(c, "chi0", 0.0);
    if (c.has("resource")) f.consumption.resource = read_monod(c.sub("resource"));
    if (c.has("shape")) f.consumption.shape = read_shape(c.sub("shape"));
    f.consumption.offset = non_negative(c, "offset", 0.0);
  }
  return f;
}

inline KernelSpec read_kernel(const Reader& r) {
  r.only({"variant", "shape", "atoms", "n_quad"});
  KernelSpec k;
  const std::string v = r.text("variant");
  k.n_quad = static_cast<int>(r.count("n_quad", 32));
  if (k.n_quad < 1) throw SchemaError(r.field("n_quad"), "must be >= 1");
  if (v == "dirac_half") {
    k.variant = FragmentationKernel::Variant::DiracHalf;
  } else if (v == "uniform") {
    k.variant = FragmentationKernel::Variant::Uniform01;
  } else if (v == "beta") {
    k.variant = FragmentationKernel::Variant::SymmetricBeta;
    k.shape = r.positive("shape");
  } else if (v == "discrete") {
    k.variant = FragmentationKernel::Variant::DiscreteSymmetric;
    if (!r.has("atoms") || !r.raw().at("atoms").is_array() || r.raw().at("atoms").empty())
      throw SchemaError(r.field("atoms"), "expected a non-empty array of [alpha, weight] pairs");
    for (const auto& a : r.raw().at("atoms")) {
      if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number())
        throw SchemaError(r.field("atoms"), "expected [alpha, weight] pairs");
      const double al = a[0].get<double>(), w = a[1].get<double>();
      if (!(al > 0.0 && al < 1.0)) throw SchemaError(r.field("atoms"), "alpha must lie in (0,1)");
      if (!(w > 0.0)) throw SchemaError(r.field("atoms"), "weights must be > 0");
      k.atoms.emplace_back(al, w);
    }
  } else {
    throw SchemaError(r.field("variant"), "expected 'dirac_half', 'uniform', 'beta' or 'discrete'");
  }
  return k;
}

inline InitialLaw read_initial(const Reader& r) {
  r.only({"shape", "mass", "x0", "mean", "sd", "x_max", "values"});
  const std::string s = r.text("shape");
  const double mass = r.number("mass");
  if (mass < 0.0) throw SchemaError(r.field("mass"), "must be >= 0");
  if (s == "point_mass") {
    const double x0 = r.number("x0");
    if (x0 < 0.0) throw SchemaError(r.field("x0"), "must be >= 0");
    return InitialLaw::point_mass(mass, x0);
  }
  if (s == "truncated_gaussian") return InitialLaw::truncated_gaussian(mass, r.number("mean"), r.positive("sd"));
  if (s == "grid_profile") {
    std::vector<double> v = r.numbers("values");
    if (v.empty()) throw SchemaError(r.field("values"), "must not be empty");
    double tot = 0.0;
    for (double x : v) {
      if (x < 0.0) throw SchemaError(r.field("values"), "values must be >= 0");
      tot += x;
    }
    if (!(tot > 0.0)) throw SchemaError(r.field("values"), "profile has zero mass");
    return InitialLaw::grid_profile(mass, r.positive("x_max"), std::move(v));
  }
  throw SchemaError(r.field("shape"), "expected 'point_mass', 'truncated_gaussian' or 'grid_profile'");
}

inline Numerics read_numerics(const Reader& r) {
  r.only({"dt_ibm", "dt_pde", "dt_sde", "dx", "x_max", "n_quad", "dictionary_size", "dictionary_scale", "h_points",
          "h_max", "h_floor", "validation_grid", "cfl_max", "negativity_tol", "truncation_tol", "initial_tail_tol"});
  Numerics n;
  n.dt_ibm = r.positive("dt_ibm");
  n.dt_pde = r.positive("dt_pde");
  n.dt_sde = r.positive("dt_sde", n.dt_pde);
  n.dx = r.positive("dx");
  n.x_max = r.positive("x_max");
  n.n_quad = static_cast<int>(r.count("n_quad", 32));
  n.dictionary_size = r.count("dictionary_size", 64);
  n.dictionary_scale = r.positive("dictionary_scale", 10.0);
  n.h_points = r.count("h_points", 16);
  n.h_max = r.positive("h_max", 0.5);
  n.h_floor = r.positive("h_floor", 1e-3);
  n.validation_grid = r.count("validation_grid", 201);
  n.cfl_max = r.positive("cfl_max", 0.9);
  n.negativity_tol = r.positive("negativity_tol", 1e-8);
  n.truncation_tol = r.positive("truncation_tol", 1e-6);
  n.initial_tail_tol = r.positive("initial_tail_tol", 1e-8);
  if (n.dx > n.x_max) throw SchemaError(r.field("dx"), "must not exceed x_max");
  if (n.validation_grid < 2) throw SchemaError(r.field("validation_grid"), "must be >= 2");
  if (n.dictionary_size < 1) throw SchemaError(r.field("dictionary_size"), "must be >= 1");
  return n;
}

inline Experiment read_experiment(const Reader& r) {
  r.only({"T", "K", "seeds", "snapshot_times", "run_seed", "mild", "diagnostics"});
  Experiment e;
  e.T = r.positive("T");
  if (r.has("K")) {
    e.K.clear();
    for (double k : r.numbers("K")) {
      if (!(k >= 1.0) || k != std::floor(k)) throw SchemaError(r.field("K"), "entries must be positive integers");
      e.K.push_back(static_cast<std::size_t>(k));
    }
  }
  if (r.has("seeds")) {
    e.seeds.clear();
    for (double s : r.numbers("seeds")) {
      if (s < 0.0 || s != std::floor(s)) throw SchemaError(r.field("seeds"), "entries must be non-negative integers");
      e.seeds.push_back(static_cast<std::uint64_t>(s));
    }
  }
  if (r.has("snapshot_times")) {
    e.snapshot_times = r.numbers("snapshot_times");
    for (std::size_t i = 0; i < e.snapshot_times.size(); ++i) {
      const double t = e.snapshot_times[i];
      if (t < 0.0 || t > e.T + 1e-12) throw SchemaError(r.field("snapshot_times"), "times must lie in [0, T]");
      if (i > 0 && !(t > e.snapshot_times[i - 1])) throw SchemaError(r.field("snapshot_times"), "times must increase");
    }
  }
  e.run_seed = r.count("run_seed", 1);
  if (r.has("mild")) {
    const Reader m = r.sub("mild");
    m.only({"s_nodes", "strata", "paths_per_node", "initial_paths", "bin_cells", "range"});
    e.mild.s_nodes = m.count("s_nodes", 8);
    e.mild.strata = m.count("strata", 16);
    e.mild.paths_per_node = m.count("paths_per_node", 10000);
    e.mild.initial_paths = m.count("initial_paths", 100000);
    e.mild.bin_cells = m.count("bin_cells", 8);
    e.mild.range = m.positive("range", 12.0);
  }
  if (r.has("diagnostics")) {
    const Reader d = r.sub("diagnostics");
    d.only({"time", "eps", "n_paths", "bins", "m"});
    e.diagnostics.time = d.positive("time", 1.0);
    if (d.has("eps")) e.diagnostics.eps = d.numbers("eps");
    e.diagnostics.n_paths = d.count("n_paths", 100000);
    e.diagnostics.bins = d.count("bins", 400);
    e.diagnostics.m = static_cast<int>(d.count("m", 1));
  }
  return e;
}

}  // namespace detail

/// Parses and schema-checks a configuration document.
inline RunConfig parse_config(const nlohmann::json& j) {
  const detail::Reader root(j, "");
  root.only({"schema_version", "name", "model", "kernel", "initial", "numerics", "experiment"});
  if (root.has("schema_version")) {
    const auto& v = j.at("schema_version");
    if (!v.is_number_integer() || v.get<int>() != kSchemaVersion)
      throw SchemaError("schema_version", "unsupported version (expected " + std::to_string(kSchemaVersion) + ")");
  }
  RunConfig c;
  c.name = root.text("name", "unnamed");
  {
    const detail::Reader m = root.sub("model");
    m.only({"r_in", "R0", "drift", "diffusion", "birth", "death", "consumption"});
    c.family = detail::read_family(m);
    c.R0 = m.number("R0");
    if (c.R0 < 0.0) throw SchemaError("model.R0", "must be >= 0");
  }
  c.kernel = detail::read_kernel(root.sub("kernel"));
  c.initial = detail::read_initial(root.sub("initial"));
  c.numerics = detail::read_numerics(root.sub("numerics"));
  if (!root.raw().at("kernel").contains("n_quad")) c.kernel.n_quad = c.numerics.n_quad;
  c.experiment = detail::read_experiment(root.sub("experiment"));
  return c;
}

inline RunConfig parse_config_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // Translate the byte offset into a line number for the message.
    std::size_t line = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i) line += text[i] == '\n' ? 1 : 0;
    throw SchemaError("<syntax>", "line " + std::to_string(line) + ": " + e.what());
  }
  return parse_config(j);
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("<file>", "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

namespace detail {

inline nlohmann::json shape_json(const ShapeSpec& s) {
  if (s.kind == ShapeSpec::Kind::One) return {{"kind", "one"}};
  return {{"kind", "saturating"}, {"theta", s.theta}};
}
inline nlohmann::json monod_json(const MonodSpec& s) {
  if (s.kind == MonodSpec::Kind::Constant) return {{"kind", "constant"}};
  return {{"kind", "monod"}, {"kappa", s.kappa}};
}

}  // namespace detail

/// Canonical document for a configuration: every field explicit, keys sorted.
inline nlohmann::json to_json(const RunConfig& c) {
  using nlohmann::json;
  json model;
  model["r_in"] = c.family.r_in;
  model["R0"] = c.R0;
  model["drift"] = {{"z0", c.family.drift.z0}, {"z1", c.family.drift.z1}, {"zx", c.family.drift.zx}};
  {
    const auto& d = c.family.diffusion;
    json dj;
    switch (d.kind) {
      case DiffusionSpec::Kind::Multiplicative:
        dj = {{"kind", "multiplicative"}, {"delta0", d.delta0}, {"delta1", d.delta1}};
        break;
      case DiffusionSpec::Kind::ResourceFree:
        dj = {{"kind", "resource_free"}, {"delta0", d.delta0}, {"s1", d.s1}};
        break;
      case DiffusionSpec::Kind::Zero:
        dj = {{"kind", "zero"}};
        break;
    }
    dj["offset"] = d.offset;
    model["diffusion"] = dj;
  }
  model["birth"] = {{"b0", c.family.birth.b0},
                    {"resource", detail::monod_json(c.family.birth.resource)},
                    {"shape", detail::shape_json(c.family.birth.shape)}};
  model["death"] = {{"d0", c.family.death.d0}, {"d1", c.family.death.d1}, {"shape", detail::shape_json(c.family.death.shape)}};
  model["consumption"] = {{"chi0", c.family.consumption.chi0},
                          {"resource", detail::monod_json(c.family.consumption.resource)},
                          {"shape", detail::shape_json(c.family.consumption.shape)},
                          {"offset", c.family.consumption.offset}};
  json kernel;
  switch (c.kernel.variant) {
    case FragmentationKernel::Variant::DiracHalf:
      kernel = {{"variant", "dirac_half"}};
      break;
    case FragmentationKernel::Variant::Uniform01:
      kernel = {{"variant", "uniform"}};
      break;
    case FragmentationKernel::Variant::SymmetricBeta:
      kernel = {{"variant", "beta"}, {"shape", c.kernel.shape}};
      break;
    case FragmentationKernel::Variant::DiscreteSymmetric: {
      json atoms = json::array();
      for (auto [a, w] : c.kernel.atoms) atoms.push_back({a, w});
      kernel = {{"variant", "discrete"}, {"atoms", atoms}};
      break;
    }
  }
  kernel["n_quad"] = c.kernel.n_quad;
  json initial;
  switch (c.initial.shape) {
    case InitialLaw::Shape::PointMass:
      initial = {{"shape", "point_mass"}, {"x0", c.initial.x0}};
      break;
    case InitialLaw::Shape::TruncatedGaussian:
      initial = {{"shape", "truncated_gaussian"}, {"mean", c.initial.mean}, {"sd", c.initial.sd}};
      break;
    case InitialLaw::Shape::GridProfile:
      initial = {{"shape", "grid_profile"}, {"x_max", c.initial.profile_x_max}, {"values", c.initial.profile}};
      break;
  }
  initial["mass"] = c.initial.mass;
  const Numerics& n = c.numerics;
  json numerics = {{"dt_ibm", n.dt_ibm},
                   {"dt_pde", n.dt_pde},
                   {"dt_sde", n.dt_sde},
                   {"dx", n.dx},
                   {"x_max", n.x_max},
                   {"n_quad", n.n_quad},
                   {"dictionary_size", n.dictionary_size},
                   {"dictionary_scale", n.dictionary_scale},
                   {"h_points", n.h_points},
                   {"h_max", n.h_max},
                   {"h_floor", n.h_floor},
                   {"validation_grid", n.validation_grid},
                   {"cfl_max", n.cfl_max},
                   {"negativity_tol", n.negativity_tol},
                   {"truncation_tol", n.truncation_tol},
                   {"initial_tail_tol", n.initial_tail_tol}};
  const Experiment& e = c.experiment;
  json experiment = {{"T", e.T},
                     {"K", e.K},
                     {"seeds", e.seeds},
                     {"snapshot_times", e.snapshot_times},
                     {"run_seed", e.run_seed},
                     {"mild",
                      {{"s_nodes", e.mild.s_nodes},
                       {"strata", e.mild.strata},
                       {"paths_per_node", e.mild.paths_per_node},
                       {"initial_paths", e.mild.initial_paths},
                       {"bin_cells", e.mild.bin_cells},
                       {"range", e.mild.range}}},
                     {"diagnostics",
                      {{"time", e.diagnostics.time},
                       {"eps", e.diagnostics.eps},
                       {"n_paths", e.diagnostics.n_paths},
                       {"bins", e.diagnostics.bins},
                       {"m", e.diagnostics.m}}}};
  return {{"schema_version", kSchemaVersion}, {"name", c.name},           {"model", model},
          {"kernel", kernel},                 {"initial", initial},       {"numerics", numerics},
          {"experiment", experiment}};
}

/// FNV-1a (64-bit) of the canonical document, as 16 hex digits.
inline std::string config_hash(const RunConfig& c) {
  const std::string s = to_json(c).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

}  // namespace dgf
