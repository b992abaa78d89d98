#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "dgf/coefficients.hpp"
#include "dgf/errors.hpp"
#include "dgf/fragmentation.hpp"
#include "dgf/grid.hpp"
#include "dgf/initial.hpp"
#include "dgf/kernel.hpp"
#include "dgf/sde.hpp"

namespace dgf {

struct PdeGuards {
  double cfl_max = 0.9;            // dt * max|zeta| / dx
  double negativity_tol = 1e-8;    // clipped mass per step, relative to current mass
  double truncation_tol = 1e-6;    // <u, 1_{x > x_max/2}> / <u, 1>
};

namespace detail {

inline double van_leer(double a, double b) { return a * b > 0.0 ? 2.0 * a * b / (a + b) : 0.0; }

/// Solves the tridiagonal system lo[j] v[j-1] + di[j] v[j] + up[j] v[j+1] = rhs[j] in place.
inline void thomas(std::vector<double>& lo, std::vector<double>& di, std::vector<double>& up,
                   std::vector<double>& rhs) {
  const std::size_t n = di.size();
  for (std::size_t j = 1; j < n; ++j) {
    const double m = lo[j] / di[j - 1];
    di[j] -= m * up[j - 1];
    rhs[j] -= m * rhs[j - 1];
  }
  rhs[n - 1] /= di[n - 1];
  for (std::size_t j = n - 1; j-- > 0;) rhs[j] = (rhs[j] - up[j] * rhs[j + 1]) / di[j];
}

}  // namespace detail

/// Explicit part of the right-hand side: conservative MUSCL upwind transport (zero flux on
/// both boundary faces) plus the reaction G+[b u] - d u.
inline std::vector<double> explicit_rhs(const GridFunction& u, double R, const CoefficientSet& c,
                                        const FragmentationKernel& kernel) {
  const std::size_t n = u.size();
  const double h = u.dx();
  const auto& v = u.values;
  std::vector<double> slope(n, 0.0);
  for (std::size_t j = 1; j + 1 < n; ++j) slope[j] = detail::van_leer(v[j] - v[j - 1], v[j + 1] - v[j]);
  std::vector<double> flux(n + 1, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    const double z = c.zeta(static_cast<double>(i) * h, R);
    flux[i] = z >= 0.0 ? z * (v[i - 1] + 0.5 * slope[i - 1]) : z * (v[i] - 0.5 * slope[i]);
  }
  GridFunction bu(u.x_max, n);
  for (std::size_t j = 0; j < n; ++j) bu.values[j] = c.birth(u.center(j), R) * v[j];
  const GridFunction gain = fragment_primal(bu, kernel);
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j)
    out[j] = -(flux[j + 1] - flux[j]) / h + gain.values[j] - c.death(u.center(j)) * v[j];
  return out;
}

/// Solves (gamma I - tau A) v = rhs where A v = d^2/dx^2 (D v) with zero diffusive flux on
/// both boundary faces. Columns of A sum to zero, so the solve conserves sum(v).
inline std::vector<double> implicit_diffusion_solve(const GridFunction& grid, double R, const CoefficientSet& c,
                                                    double gamma, double tau, std::vector<double> rhs) {
  const std::size_t n = grid.size();
  const double h = grid.dx();
  const double k = tau / (h * h);
  std::vector<double> D(n);
  for (std::size_t j = 0; j < n; ++j) D[j] = std::max(0.0, c.diff(grid.center(j), R));
  std::vector<double> lo(n, 0.0), di(n, gamma), up(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const double faces = (j > 0 ? 1.0 : 0.0) + (j + 1 < n ? 1.0 : 0.0);
    di[j] += k * faces * D[j];
    if (j > 0) lo[j] = -k * D[j - 1];
    if (j + 1 < n) up[j] = -k * D[j + 1];
  }
  detail::thomas(lo, di, up, rhs);
  return rhs;
}

/// r_in - R - <u, chi(., R)> with midpoint quadrature of the cell averages.
inline double pde_resource_rate(const GridFunction& u, double R, const CoefficientSet& c) {
  return c.r_in - R - u.integrate([&](double x) { return c.chi(x, R); });
}

namespace detail {

inline void check_cfl(const GridFunction& u, double R, const CoefficientSet& c, double dt, double cfl_max) {
  double zmax = 0.0;
  for (std::size_t i = 0; i <= u.size(); ++i) zmax = std::max(zmax, std::abs(c.zeta(static_cast<double>(i) * u.dx(), R)));
  if (dt * zmax / u.dx() > cfl_max)
    throw CflViolation("pde: dt * max|zeta| / dx = " + std::to_string(dt * zmax / u.dx()) + " exceeds " +
                       std::to_string(cfl_max));
}

/// Clips negative values; returns the clipped mass.
inline double clip_negative(std::vector<double>& v, double h) {
  double clipped = 0.0;
  for (double& x : v)
    if (x < 0.0) {
      clipped -= x;
      x = 0.0;
    }
  return clipped * h;
}

inline double heun_resource(const GridFunction& u_old, const GridFunction& u_new, double R, const CoefficientSet& c,
                            double dt) {
  const double k1 = pde_resource_rate(u_old, R, c);
  const double k2 = pde_resource_rate(u_new, R + dt * k1, c);
  return R + 0.5 * dt * (k1 + k2);
}

}  // namespace detail

/// One IMEX Euler step: implicit diffusion, explicit transport and reaction, Heun step of the
/// resource. Negative undershoot is clipped and bounded by the guard.
inline std::pair<GridFunction, double> pde_step(const GridFunction& u, double R, const CoefficientSet& c,
                                                const FragmentationKernel& kernel, double dt,
                                                const PdeGuards& guards = {}) {
  detail::check_cfl(u, R, c, dt, guards.cfl_max);
  const std::vector<double> E = explicit_rhs(u, R, c, kernel);
  std::vector<double> rhs(u.size());
  for (std::size_t j = 0; j < u.size(); ++j) rhs[j] = u.values[j] + dt * E[j];
  GridFunction next(u.x_max, u.size());
  next.values = implicit_diffusion_solve(u, R, c, 1.0, dt, std::move(rhs));
  const double clipped = detail::clip_negative(next.values, u.dx());
  if (clipped > guards.negativity_tol * std::max(u.mass(), 1e-300))
    throw NegativityOverflow("pde_step: clipped mass exceeds tolerance");
  const double R_next = detail::heun_resource(u, next, R, c, dt);
  return {std::move(next), R_next};
}

/// Second-order stepper: SBDF2 (IMEX Euler for the first step) for the density, Heun for the
/// resource. The implicit diffusion uses D at the linearly extrapolated resource.
class PdeStepper {
 public:
  PdeStepper(GridFunction u0, double R0, const CoefficientSet& c, const FragmentationKernel& kernel,
             PdeGuards guards = {})
      : c_(c), kernel_(kernel), guards_(guards), u_(std::move(u0)), R_(R0) {}

  const GridFunction& u() const { return u_; }
  double R() const { return R_; }
  double clipped_mass() const { return clipped_; }

  void step(double dt) {
    detail::check_cfl(u_, R_, c_, dt, guards_.cfl_max);
    std::vector<double> E = explicit_rhs(u_, R_, c_, kernel_);
    const std::size_t n = u_.size();
    std::vector<double> rhs(n);
    GridFunction next(u_.x_max, n);
    if (!has_prev_ || dt != dt_prev_) {
      for (std::size_t j = 0; j < n; ++j) rhs[j] = u_.values[j] + dt * E[j];
      next.values = implicit_diffusion_solve(u_, R_, c_, 1.0, dt, std::move(rhs));
    } else {
      for (std::size_t j = 0; j < n; ++j)
        rhs[j] = 4.0 * u_.values[j] - u_prev_.values[j] + 2.0 * dt * (2.0 * E[j] - E_prev_[j]);
      const double R_star = std::max(0.0, 2.0 * R_ - R_prev_);
      next.values = implicit_diffusion_solve(u_, R_star, c_, 3.0, 2.0 * dt, std::move(rhs));
    }
    const double clipped = detail::clip_negative(next.values, u_.dx());
    if (clipped > guards_.negativity_tol * std::max(u_.mass(), 1e-300))
      throw NegativityOverflow("pde: clipped mass exceeds tolerance");
    clipped_ += clipped;
    const double R_next = detail::heun_resource(u_, next, R_, c_, dt);
    u_prev_ = std::move(u_);
    E_prev_ = std::move(E);
    R_prev_ = R_;
    dt_prev_ = dt;
    has_prev_ = true;
    u_ = std::move(next);
    R_ = R_next;
  }

 private:
  const CoefficientSet& c_;
  const FragmentationKernel& kernel_;
  PdeGuards guards_;
  GridFunction u_;
  double R_;
  GridFunction u_prev_;
  std::vector<double> E_prev_;
  double R_prev_ = 0.0;
  double dt_prev_ = 0.0;
  bool has_prev_ = false;
  double clipped_ = 0.0;
};

struct PdeSetup {
  CoefficientSet coefficients;
  FragmentationKernel kernel = FragmentationKernel::uniform();
  InitialLaw initial;
  double R0 = 1.0;
  double T = 1.0;
  double dt = 5e-3;
  double x_max = 40.0;
  std::size_t n_cells = 1600;
  std::size_t store_every = 1;
  PdeGuards guards{};
};

struct PdeTrajectory {
  std::vector<double> times;
  std::vector<GridFunction> u;
  std::vector<double> R;
  std::vector<double> mass;
  std::vector<double> moment1;
  std::vector<double> tail;  // <u, 1_{x > x_max/2}> / mass
  double clipped_mass = 0.0;
  double dt = 0.0;
  std::string right_boundary = "zero-flux";

  /// Density at time t, linearly interpolated between stored times.
  GridFunction at(double t) const {
    if (t <= times.front()) return u.front();
    if (t >= times.back()) return u.back();
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    const std::size_t k = static_cast<std::size_t>(it - times.begin());
    const double w = (t - times[k - 1]) / (times[k] - times[k - 1]);
    GridFunction g = u[k - 1];
    for (std::size_t j = 0; j < g.size(); ++j) g.values[j] = (1.0 - w) * u[k - 1].values[j] + w * u[k].values[j];
    return g;
  }

  ResourcePath resource_path() const { return {times, R}; }
};

inline double tail_fraction(const GridFunction& u) {
  const double m = u.mass();
  if (!(m > 0.0)) return 0.0;
  const std::size_t half = u.size() / 2;
  double s = 0.0;
  for (std::size_t j = half; j < u.size(); ++j) s += u.values[j];
  return s * u.dx() / m;
}

inline PdeTrajectory solve_pde(const PdeSetup& setup) {
  if (!(setup.dt > 0.0) || !(setup.T >= 0.0)) throw ParamOutOfRange("solve_pde: need dt > 0 and T >= 0");
  const auto n_steps = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(setup.T / setup.dt)));
  const double dt = setup.T > 0.0 ? setup.T / static_cast<double>(n_steps) : setup.dt;
  const std::size_t stride = std::max<std::size_t>(1, setup.store_every);
  PdeStepper stepper(setup.initial.project(setup.x_max, setup.n_cells), setup.R0, setup.coefficients, setup.kernel,
                     setup.guards);
  PdeTrajectory traj;
  traj.dt = dt;
  auto record = [&](double t) {
    const GridFunction& u = stepper.u();
    const double tail = tail_fraction(u);
    if (tail > setup.guards.truncation_tol)
      throw TruncationTolExceeded("solve_pde: mass fraction beyond x_max/2 is " + std::to_string(tail));
    traj.times.push_back(t);
    traj.u.push_back(u);
    traj.R.push_back(stepper.R());
    traj.mass.push_back(u.mass());
    traj.moment1.push_back(u.moment(1.0));
    traj.tail.push_back(tail);
  };
  record(0.0);
  if (setup.T > 0.0)
    for (std::size_t k = 1; k <= n_steps; ++k) {
      stepper.step(dt);
      if (k % stride == 0 || k == n_steps) record(static_cast<double>(k) * dt);
    }
  traj.clipped_mass = stepper.clipped_mass();
  return traj;
}

/// Twice-differentiable test function with its first two derivatives.
struct TestFunction {
  std::function<double(double)> f, df, d2f;
};

/// (1 - z^2)^4 on (a, b) with z the affine map of (a, b) onto (-1, 1); zero outside. C^3.
inline TestFunction bump(double a, double b) {
  const double s = 2.0 / (b - a), m = 0.5 * (a + b);
  TestFunction t;
  t.f = [=](double x) {
    const double z = (x - m) * s;
    if (std::abs(z) >= 1.0) return 0.0;
    const double q = 1.0 - z * z;
    return q * q * q * q;
  };
  t.df = [=](double x) {
    const double z = (x - m) * s;
    if (std::abs(z) >= 1.0) return 0.0;
    const double q = 1.0 - z * z;
    return -8.0 * z * q * q * q * s;
  };
  t.d2f = [=](double x) {
    const double z = (x - m) * s;
    if (std::abs(z) >= 1.0) return 0.0;
    const double q = 1.0 - z * z;
    return (-8.0 * q * q * q + 48.0 * z * z * q * q) * s * s;
  };
  return t;
}

/// |<u_t, f> - <u_0, f> - int_0^t <u_s, zeta f' + D f'' + b G[f] - d f> ds| at every stored time,
/// the time integral by the trapezoidal rule over the stored times.
inline std::vector<double> weak_form_residual(const PdeTrajectory& traj, const TestFunction& tf,
                                              const CoefficientSet& c, const FragmentationKernel& kernel) {
  const std::size_t n = traj.times.size();
  std::vector<double> out(n, 0.0);
  if (n == 0) return out;
  const std::size_t cells = traj.u.front().size();
  std::vector<double> xs(cells), fx(cells), gfx(cells), dfx(cells), d2fx(cells), dx_(cells);
  for (std::size_t j = 0; j < cells; ++j) {
    const double x = traj.u.front().center(j);
    xs[j] = x;
    fx[j] = tf.f(x);
    dfx[j] = tf.df(x);
    d2fx[j] = tf.d2f(x);
    gfx[j] = fragment_dual(tf.f, kernel, x);
    dx_[j] = c.death(x);
  }
  auto pairing = [&](std::size_t k) {
    const GridFunction& u = traj.u[k];
    const double R = traj.R[k];
    double s = 0.0;
    for (std::size_t j = 0; j < cells; ++j) {
      const double v = u.values[j];
      if (v == 0.0) continue;
      const double x = xs[j];
      s += v * (c.zeta(x, R) * dfx[j] + c.diff(x, R) * d2fx[j] + c.birth(x, R) * gfx[j] - dx_[j] * fx[j]);
    }
    return s * u.dx();
  };
  auto value = [&](std::size_t k) {
    double s = 0.0;
    for (std::size_t j = 0; j < cells; ++j) s += traj.u[k].values[j] * fx[j];
    return s * traj.u[k].dx();
  };
  const double f0 = value(0);
  double integral = 0.0;
  double g_prev = pairing(0);
  for (std::size_t k = 1; k < n; ++k) {
    const double g = pairing(k);
    integral += 0.5 * (traj.times[k] - traj.times[k - 1]) * (g_prev + g);
    g_prev = g;
    out[k] = std::abs(value(k) - f0 - integral);
  }
  return out;
}

}  // namespace dgf
