#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "dgf/coefficients.hpp"

namespace dgf {

struct ValidationEntry {
  enum class Status { Pass, Fail, Warn };
  std::string id;
  std::string clause;
  Status status = Status::Pass;
  double witness_x = std::numeric_limits<double>::quiet_NaN();
  double witness_r = std::numeric_limits<double>::quiet_NaN();
  double magnitude = 0.0;  // worst violation (0 when passing)
};

/// Grid-measured sup-norms and Lipschitz constants of the coefficients.
struct MeasuredBounds {
  FunctionBounds zeta, diff, birth, death, chi;
};

struct ValidationReport {
  std::vector<ValidationEntry> entries;
  MeasuredBounds measured{};
  double c_lower = 0.0;  // largest c with zeta >= c and D >= c x on the grid

  bool passed() const {
    return std::none_of(entries.begin(), entries.end(),
                        [](const ValidationEntry& e) { return e.status == ValidationEntry::Status::Fail; });
  }
  const ValidationEntry* find(const std::string& id) const {
    for (const auto& e : entries)
      if (e.id == id) return &e;
    return nullptr;
  }
};

namespace detail {

struct Worst {
  double value = 0.0;
  double x = std::numeric_limits<double>::quiet_NaN();
  double r = std::numeric_limits<double>::quiet_NaN();
  void offer(double v, double xx, double rr) {
    if (v > value) {
      value = v;
      x = xx;
      r = rr;
    }
  }
};

inline ValidationEntry make_entry(std::string id, std::string clause, const Worst& w,
                                  ValidationEntry::Status fail_status = ValidationEntry::Status::Fail) {
  ValidationEntry e;
  e.id = std::move(id);
  e.clause = std::move(clause);
  if (w.value > 0.0) {
    e.status = fail_status;
    e.witness_x = w.x;
    e.witness_r = w.r;
    e.magnitude = w.value;
  }
  return e;
}

// Smoothness probe: first and second derivatives by central differences at two step sizes.
// A C2 function gives consistent values; a kink shows up as a large disagreement.
template <class F>
void probe_derivatives(F&& f, double x, double h, double& d1, double& d2, double& inconsistency) {
  const double a1 = (f(x + h) - f(x - h)) / (2 * h);
  const double b1 = (f(x + 2 * h) - f(x - 2 * h)) / (4 * h);
  const double a2 = (f(x + h) - 2 * f(x) + f(x - h)) / (h * h);
  const double b2 = (f(x + 2 * h) - 2 * f(x) + f(x - 2 * h)) / (4 * h * h);
  d1 = a1;
  d2 = a2;
  inconsistency = std::max(std::abs(a1 - b1) / (1.0 + std::abs(a1)), std::abs(a2 - b2) / (1.0 + std::abs(a2)));
}

}  // namespace detail

/// Checks the standing assumptions on a grid of grid_n x grid_n points over [0, x_max] x [0, r_bar].
/// Failures become report entries with a witness point; nothing is thrown.
inline ValidationReport validate_coefficients(const CoefficientSet& c, double x_max, double r_bar, std::size_t grid_n) {
  using detail::Worst;
  using Status = ValidationEntry::Status;
  if (grid_n < 2) grid_n = 2;
  ValidationReport rep;
  const double hx = x_max / static_cast<double>(grid_n - 1);
  const double hr = r_bar / static_cast<double>(grid_n - 1);
  auto X = [&](std::size_t i) { return hx * static_cast<double>(i); };
  auto Rv = [&](std::size_t k) { return hr * static_cast<double>(k); };
  const double rel = 1e-6, abs_tol = 1e-9;
  const CoefficientBounds& decl = c.bounds;

  // Measured bounds.
  MeasuredBounds& m = rep.measured;
  auto measure2 = [&](const Field2& f, FunctionBounds& out) {
    for (std::size_t i = 0; i < grid_n; ++i)
      for (std::size_t k = 0; k < grid_n; ++k) {
        const double v = f(X(i), Rv(k));
        out.sup = std::max(out.sup, std::abs(v));
        if (i + 1 < grid_n) out.lip_x = std::max(out.lip_x, std::abs(f(X(i + 1), Rv(k)) - v) / hx);
        if (k + 1 < grid_n) out.lip_r = std::max(out.lip_r, std::abs(f(X(i), Rv(k + 1)) - v) / hr);
      }
  };
  measure2(c.zeta, m.zeta);
  measure2(c.diff, m.diff);
  measure2(c.birth, m.birth);
  measure2(c.chi, m.chi);
  for (std::size_t i = 0; i < grid_n; ++i) {
    const double v = c.death(X(i));
    m.death.sup = std::max(m.death.sup, std::abs(v));
    if (i + 1 < grid_n) m.death.lip_x = std::max(m.death.lip_x, std::abs(c.death(X(i + 1)) - v) / hx);
  }

  // A1.1 Lipschitz constants hold.
  {
    Worst w;
    auto check = [&](const FunctionBounds& meas, const FunctionBounds& d) {
      w.offer(meas.lip_x - (d.lip_x * (1 + rel) + abs_tol), NAN, NAN);
      w.offer(meas.lip_r - (d.lip_r * (1 + rel) + abs_tol), NAN, NAN);
    };
    check(m.zeta, decl.zeta);
    check(m.diff, decl.diff);
    check(m.birth, decl.birth);
    check(m.death, decl.death);
    check(m.chi, decl.chi);
    rep.entries.push_back(detail::make_entry("A1.1", "coefficients Lipschitz with the declared constants", w));
  }
  // A1.2 b, d, chi non-negative and bounded by their declared sup-norms.
  {
    Worst w;
    for (std::size_t i = 0; i < grid_n; ++i) {
      const double x = X(i);
      const double dv = c.death(x);
      w.offer(-dv, x, NAN);
      w.offer(dv - (decl.death.sup * (1 + rel) + abs_tol), x, NAN);
      for (std::size_t k = 0; k < grid_n; ++k) {
        const double r = Rv(k);
        const double bv = c.birth(x, r), cv = c.chi(x, r);
        w.offer(-bv, x, r);
        w.offer(-cv, x, r);
        w.offer(bv - (decl.birth.sup * (1 + rel) + abs_tol), x, r);
        w.offer(cv - (decl.chi.sup * (1 + rel) + abs_tol), x, r);
      }
    }
    rep.entries.push_back(detail::make_entry("A1.2", "b, d, chi non-negative and bounded", w));
  }
  // A1.3 D >= 0, zeta(0, r) > 0, D(0, r) = 0.
  {
    Worst nonneg, drift0, diff0;
    for (std::size_t k = 0; k < grid_n; ++k) {
      const double r = Rv(k);
      const double z = c.zeta(0.0, r);
      if (!(z > 0.0)) drift0.offer(std::max(-z, std::numeric_limits<double>::min()), 0.0, r);
      diff0.offer(std::abs(c.diff(0.0, r)), 0.0, r);
      for (std::size_t i = 0; i < grid_n; ++i) nonneg.offer(-c.diff(X(i), r), X(i), r);
    }
    rep.entries.push_back(detail::make_entry("A1.3a", "D(x,r) >= 0", nonneg));
    rep.entries.push_back(detail::make_entry("A1.3b", "zeta(0,r) > 0", drift0));
    rep.entries.push_back(detail::make_entry("A1.3c", "D(0,r) = 0", diff0));
  }
  // A1.4 chi(x, 0) = 0.
  {
    Worst w;
    for (std::size_t i = 0; i < grid_n; ++i) w.offer(std::abs(c.chi(X(i), 0.0)), X(i), 0.0);
    rep.entries.push_back(detail::make_entry("A1.4", "chi(x,0) = 0", w));
  }
  // A3.1-A3.5 bounded first/second derivatives, probed by finite differences.
  {
    const double h = 1e-4 * std::max(1.0, x_max);
    const double hrr = 1e-4 * std::max(1.0, r_bar);
    auto probe2 = [&](const Field2& f, const char* id, const char* clause) {
      Worst w;
      for (std::size_t i = 1; i + 1 < grid_n; ++i)
        for (std::size_t k = 1; k + 1 < grid_n; ++k) {
          const double x = X(i), r = Rv(k);
          double d1, d2, inc, e1, e2, incr;
          detail::probe_derivatives([&](double y) { return f(y, r); }, x, h, d1, d2, inc);
          detail::probe_derivatives([&](double s) { return f(x, s); }, r, hrr, e1, e2, incr);
          const double worst = std::max(inc, incr);
          if (!std::isfinite(d1) || !std::isfinite(d2) || !std::isfinite(e1))
            w.offer(std::numeric_limits<double>::infinity(), x, r);
          else if (worst > 1e-2)
            w.offer(worst, x, r);
        }
      rep.entries.push_back(detail::make_entry(id, clause, w));
    };
    probe2(c.zeta, "A3.1", "zeta is C2 with bounded derivatives");
    probe2(c.diff, "A3.2", "D is C2 with bounded derivatives");
    probe2(c.birth, "A3.3", "b is C2,1 with bounded derivatives");
    probe2(c.chi, "A3.4", "chi is C2,1 with bounded derivatives");
    {
      Worst w;
      for (std::size_t i = 1; i + 1 < grid_n; ++i) {
        double d1, d2, inc;
        detail::probe_derivatives(c.death, X(i), h, d1, d2, inc);
        if (!std::isfinite(d1) || !std::isfinite(d2))
          w.offer(std::numeric_limits<double>::infinity(), X(i), NAN);
        else if (inc > 1e-2)
          w.offer(inc, X(i), NAN);
      }
      rep.entries.push_back(detail::make_entry("A3.5", "d is C2 with bounded derivatives", w));
    }
  }
  // A3.6 D > 0 on (0, inf) x (0, r_bar].
  {
    Worst w;
    for (std::size_t i = 1; i < grid_n; ++i)
      for (std::size_t k = 1; k < grid_n; ++k) {
        const double v = c.diff(X(i), Rv(k));
        if (!(v > 0.0)) w.offer(std::max(-v, std::numeric_limits<double>::min()), X(i), Rv(k));
      }
    rep.entries.push_back(detail::make_entry("A3.6", "D(x,r) > 0 for x > 0, r > 0", w));
  }
  // A4.1 zeta >= c and D >= c x; report the largest feasible c.
  {
    double cl = std::numeric_limits<double>::infinity();
    double wx = NAN, wr = NAN;
    for (std::size_t k = 0; k < grid_n; ++k)
      for (std::size_t i = 0; i < grid_n; ++i) {
        const double x = X(i), r = Rv(k);
        double v = c.zeta(x, r);
        if (i > 0) v = std::min(v, c.diff(x, r) / x);
        if (v < cl) {
          cl = v;
          wx = x;
          wr = r;
        }
      }
    rep.c_lower = cl;
    Worst w;
    if (!(cl > 0.0)) w.offer(std::max(-cl, std::numeric_limits<double>::min()), wx, wr);
    rep.entries.push_back(detail::make_entry("A4.1", "zeta >= c and D >= c x for some c > 0", w));
  }
  // A4.2 D vanishes at 0 only; r-increments bounded by C (1 + x) |r - r'|.
  {
    Worst w;
    for (std::size_t k = 1; k < grid_n; ++k) {
      const double r = Rv(k);
      w.offer(std::abs(c.diff(0.0, r)), 0.0, r);
      for (std::size_t i = 1; i < grid_n; ++i)
        if (!(c.diff(X(i), r) > 0.0)) w.offer(std::numeric_limits<double>::min(), X(i), r);
    }
    rep.entries.push_back(detail::make_entry("A4.2", "D null at 0 only, Holder in r", w));
  }
  // A4.3 zeta, D Lipschitz in x uniformly in r.
  {
    Worst w;
    w.offer(m.zeta.lip_x - (decl.zeta.lip_x * (1 + rel) + abs_tol), NAN, NAN);
    w.offer(m.diff.lip_x - (decl.diff.lip_x * (1 + rel) + abs_tol), NAN, NAN);
    rep.entries.push_back(detail::make_entry("A4.3", "zeta, D Lipschitz in x uniformly in r", w));
  }
  // Natural chemostat condition d >= 1: warn only.
  {
    Worst w;
    for (std::size_t i = 0; i < grid_n; ++i) w.offer(1.0 - c.death(X(i)), X(i), NAN);
    rep.entries.push_back(detail::make_entry("assd", "d(x) >= 1 (extraction at rate 1)", w, Status::Warn));
  }
  return rep;
}

}  // namespace dgf
