// Global solutions on the 2-sphere: normalization of admissible
// elliptic parameter sets, the profile on t in (0, inf) in the x = log t
// coordinate, Cartesian-chart evaluators near the poles, and the
// closed-geodesic check.
#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "supint/curvature.hpp"
#include "supint/geodesic.hpp"
#include "supint/integrals.hpp"
#include "supint/profile.hpp"

namespace supint {

struct ConditionsFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct RootNotUnique : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NoReturnDetected : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GlobalConditions {
  bool ok = false;
  std::string reason;
};

// Admissibility for the sphere extension: elliptic case, mu > 0,
// A0 > 0, mu*A4 > |A3|.
inline GlobalConditions check_global_conditions(const PrincipalParams& p) {
  if (p.kind != PrincipalCase::Elliptic)
    return {false, "case must be (ii)"};
  if (!(p.mu > 0.0)) return {false, "mu must be positive"};
  if (!(p.A0 > 0.0)) return {false, "A0 must be positive"};
  if (!(p.mu * p.A4 > std::abs(p.A3))) return {false, "mu*A4 <= |A3|"};
  return {true, ""};
}

// Normal form h_x(h_x^2 - h^2 + A2) = Ae (e^x + e^-x) plus the record
// of the affine state transform that got there.
struct SphereParams {
  double Ae = 1.0;
  double A2 = 0.0;
  double h0 = 0.0;  // h at t = 1 (x = 0)

  std::optional<PrincipalParams> original;
  std::vector<std::string> transcript;
  double mu = 1.0;       // x_hat = mu*x - delta
  double delta = 0.0;
  double h_shift = 0.0;  // h_hat = h + h_shift

  double to_normalized_x(double x) const { return mu * x - delta; }
  double to_normalized_h(double h) const { return h + h_shift; }
  double to_normalized_hx(double hx) const { return hx / mu; }

  PrincipalParams equation() const {
    return {PrincipalCase::Elliptic, 1.0, 1.0, 0.0, A2, 0.0, 2.0 * Ae};
  }
};

inline SphereParams normalize(const PrincipalParams& p,
                              bool verify = true) {
  const GlobalConditions gc = check_global_conditions(p);
  if (!gc.ok) throw ConditionsFailed("not admissible: " + gc.reason);

  SphereParams sp;
  sp.original = p;
  auto log = [&](const std::string& s) { sp.transcript.push_back(s); };

  // divide by A0
  double A1 = p.A1 / p.A0, A2 = p.A2 / p.A0, A3 = p.A3 / p.A0,
         A4 = p.A4 / p.A0;
  log("divide by A0=" + std::to_string(p.A0));
  // absorb A1 by shifting h
  sp.h_shift = A1 / (2.0 * p.mu * p.mu);
  A2 += A1 * A1 / (4.0 * p.mu * p.mu);
  log("shift h by " + std::to_string(sp.h_shift) + " to remove A1");
  // rescale x to make mu = 1
  sp.mu = p.mu;
  A2 /= p.mu * p.mu;
  A3 /= p.mu * p.mu * p.mu * p.mu;
  A4 /= p.mu * p.mu * p.mu;
  log("rescale x by mu=" + std::to_string(p.mu));
  // exponential form and the centering translation
  const double Ap = 0.5 * (A4 + A3), Am = 0.5 * (A4 - A3);
  sp.delta = 0.5 * std::log(Am / Ap);
  sp.Ae = std::sqrt(Ap * Am);
  sp.A2 = A2;
  log("translate x by " + std::to_string(sp.delta) + ": A+=" +
      std::to_string(Ap) + " A-=" + std::to_string(Am) + " Ae=" +
      std::to_string(sp.Ae));

  if (verify) {
    // Transform a short solved profile of the original equation and
    // confirm it satisfies the normalized one.
    const double x0 = 0.0, h0 = 0.25;
    const std::vector<RealRoot> roots = hx_candidates(p, x0, h0);
    if (roots.empty()) throw ConditionsFailed("no branch for verification");
    HProfile prof = solve_profile(
        p, x0, h0, RootSelector::NearestTo(roots.back().value), -0.3, 0.3,
        65);
    const PrincipalParams norm_eq = sp.equation();
    double worst = 0.0;
    for (std::size_t i = 0; i < prof.size(); ++i) {
      const double xn = sp.to_normalized_x(prof.grid[i]);
      const double hn = sp.to_normalized_h(prof.h[i]);
      const double hxn = sp.to_normalized_hx(prof.hx[i]);
      const double r = residual(norm_eq, xn, hn, hxn) /
                       residual_scale(norm_eq, xn, hn, hxn);
      worst = std::max(worst, std::abs(r));
    }
    if (worst > 1e-10)
      throw ConditionsFailed("normalization verification failed, residual " +
                             std::to_string(worst));
    log("verified transform, max normalized residual " +
        std::to_string(worst));
  }
  return sp;
}

// Unique positive root of c0 (4 c0^2 + A2) = Ae.
inline double c0_of(double Ae, double A2) {
  if (!(Ae > 0.0)) throw InvalidParams("Ae must be positive");
  const std::vector<RealRoot> roots = solve_cubic_real(4.0, 0.0, A2, -Ae);
  double best = -1.0;
  int count = 0;
  for (const RealRoot& r : roots)
    if (r.value > 0.0) {
      ++count;
      best = r.value;
    }
  if (count != 1) throw RootNotUnique("positive root of c0 cubic not unique");
  return best;
}

// The comparison solutions C_h(-A-/t + A+ t): C_h is the unique
// positive root of C_h (4 A+ A- C_h^2 + A2) = 1.
inline double bounding_constant(double Ap, double Am, double A2) {
  const std::vector<RealRoot> roots =
      solve_cubic_real(4.0 * Ap * Am, 0.0, A2, -1.0);
  for (const RealRoot& r : roots)
    if (r.value > 0.0) return r.value;
  throw RootNotUnique("no positive bounding constant");
}

struct SphereModel {
  SphereParams sp;
  HProfile profile;  // over x = log t
  double c0 = 0.0;
  double t_min = 0.0, t_max = 0.0;

  // Measured series data of the solved profile.  Near t = 0 the
  // solution has h = -p0/t + c1*t + O(t^3); p0 equals c0 only for the
  // special profiles h(1) = 0 (for general h0 the pole coefficient is a
  // free parameter of the equation, constrained by
  // p0*(4*p0*c1 + A2) = Ae).  Near t = inf, h = p_inf*t + O(1/t).
  double p0 = 0.0, c1 = 0.0;
  double p_inf = 0.0, c1_inf = 0.0;

  // u = t * h_x = t^2 h_t; analytic in t^2 near 0 with u -> p0, and
  // u/t^2 -> p_inf as t -> inf.  Series fallback off both grid ends.
  double u_of_t(double t) const {
    if (t <= 0.0) return p0;
    const double x = std::log(t);
    if (x < profile.x_min()) return p0 + c1 * t * t;
    if (x > profile.x_max()) return p_inf * t * t + c1_inf;
    return t * profile.eval(x).hx;
  }

  double conformal_factor(double xi, double eta) const {
    const double u = u_of_t(std::hypot(xi, eta));
    return 1.0 / (u * u);
  }

  // The case-(ii) cubic integral (phase 0) pushed to the Cartesian
  // chart near the origin; below the grid the quadratic expansion in
  // (xi, eta) built from the measured pole data (p0, c1) is used.  For
  // the special profiles with c1 = p0 = c0 it reduces to the familiar
  // c0-only form.
  double integral_cartesian(double xi, double eta, double pxi,
                            double peta) const {
    const double t = std::hypot(xi, eta);
    const double px = xi * pxi + eta * peta;
    const double py = xi * peta - eta * pxi;
    if (t > 0.0 && std::log(t) >= profile.x_min()) {
      const double x = std::log(t);
      const Coeffs a = coeffs(profile, x);
      const double cy = xi / t, sy = eta / t;
      return cy * (a.a0 * px * px * px + a.a2 * px * py * py) +
             sy * (a.a1 * px * px * py + a.a3 * py * py * py);
    }
    const double A2 = sp.A2, p3 = p0 * p0 * p0, cp2 = c1 * p0 * p0;
    return p3 * pxi * (pxi * pxi + peta * peta) +
           (3.0 * cp2 * xi * xi +
            (0.5 * A2 * p0 + 3.0 * cp2) * eta * eta) *
               pxi * pxi * pxi -
           (A2 * p0 + 2.0 * cp2) * eta * xi * pxi * pxi * peta +
           ((0.5 * A2 * p0 + 5.0 * cp2) * xi * xi +
            cp2 * eta * eta) *
               pxi * peta * peta +
           2.0 * cp2 * eta * xi * peta * peta * peta;
  }
};

inline SphereModel solve_sphere_profile(const SphereParams& sp,
                                        double t_min = 1e-4,
                                        double t_max = 1e4,
                                        std::size_t n = 4001,
                                        SolveOptions opt = {}) {
  if (!(t_min > 0.0) || !(t_min < 1.0) || !(t_max > 1.0))
    throw InvalidParams("t range must contain 1 inside (0, inf)");
  SphereModel m;
  m.sp = sp;
  m.t_min = t_min;
  m.t_max = t_max;
  m.c0 = c0_of(sp.Ae, sp.A2);
  m.profile = solve_profile(sp.equation(), 0.0, sp.h0,
                            RootSelector::UniquePositive(), std::log(t_min),
                            std::log(t_max), n, opt);
  if (m.profile.truncated_left || m.profile.truncated_right)
    throw StepFailure("sphere profile unexpectedly truncated");

  // Pole data by two-point extrapolation of u = t*h_x at the grid ends:
  // u = p0 + c1*t^2 + O(t^4) near 0, u = p_inf*t^2 + c1_inf + O(1/t^2)
  // near inf.  The partner node sits a factor ~4 inside so that the
  // neglected order stays below round-off at the default t range.
  const std::size_t last = m.profile.size() - 1;
  const double dx = (m.profile.x_max() - m.profile.x_min()) /
                    static_cast<double>(last);
  const std::size_t j = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::lround(std::log(4.0) / dx)));
  auto u_at = [&](std::size_t i) {
    return std::exp(m.profile.grid[i]) * m.profile.hx[i];
  };
  auto t2_at = [&](std::size_t i) {
    return std::exp(2.0 * m.profile.grid[i]);
  };
  {
    const double ta = t2_at(0), tb = t2_at(j);
    m.c1 = (u_at(j) - u_at(0)) / (tb - ta);
    m.p0 = u_at(0) - m.c1 * ta;
  }
  {
    const double ta = t2_at(last), tb = t2_at(last - j);
    m.p_inf = (u_at(last) - u_at(last - j)) / (ta - tb);
    m.c1_inf = u_at(last) - m.p_inf * ta;
  }
  return m;
}

// classify() on the central subrange t in [0.1, 10], where the profile
// magnitudes are O(1) and the curvature spread is meaningful.
inline CurvatureReport sphere_curvature_report(const SphereModel& m,
                                               double tol_R = 1e-7) {
  HProfile sub;
  sub.params = m.profile.params;
  sub.options = m.profile.options;
  sub.root_branch = m.profile.root_branch;
  const double lim = std::log(10.0);
  for (std::size_t i = 0; i < m.profile.size(); ++i) {
    if (std::abs(m.profile.grid[i]) > lim) continue;
    sub.grid.push_back(m.profile.grid[i]);
    sub.h.push_back(m.profile.h[i]);
    sub.hx.push_back(m.profile.hx[i]);
    sub.hxx.push_back(m.profile.hxx[i]);
    sub.hxxx.push_back(m.profile.hxxx[i]);
  }
  return classify(sub, tol_R);
}

struct ZollGeodesic {
  PhasePoint P0;
  double period = 0.0;
  double return_distance = std::numeric_limits<double>::infinity();
  int crossings = 0;
};

struct ZollReport {
  std::vector<ZollGeodesic> geodesics;
  double tol = 0.0;
  bool pass = false;
};

// Closed-geodesic test: unit-energy initial conditions with the angular
// momentum bounded away from zero (such orbits stay in a band of the
// (x, y) chart), Poincare section at y = 2 pi k.
inline ZollReport zoll_check(const SphereModel& m, int n_geodesics = 5,
                             double tol = 1e-4, std::uint64_t seed = 7,
                             int max_crossings = 64) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(-0.8, 0.8);
  std::uniform_real_distribution<double> uth(0.25, 0.5 * kPi);

  ZollReport rep;
  rep.tol = tol;
  const double two_pi = 2.0 * kPi;

  for (int gi = 0; gi < n_geodesics; ++gi) {
    const double x0 = ux(rng), th = uth(rng);
    const double hx0 = m.profile.eval(x0).hx;
    const PhasePoint P0{x0, 0.0, std::cos(th) / hx0, std::sin(th) / hx0};

    ZollGeodesic g;
    g.P0 = P0;
    int k = 1;
    Dopri5<4>::Options oopt;
    oopt.rtol = 1e-12;
    oopt.atol = 1e-14;
    Dopri5<4> ode(
        [&](double, const State<4>& y) -> State<4> {
          const HProfile::Values v = m.profile.eval(y[0]);
          const double p2 = y[2] * y[2] + y[3] * y[3];
          return {v.hx * v.hx * y[2], v.hx * v.hx * y[3],
                  -v.hx * v.hxx * p2, 0.0};
        },
        oopt);
    ode.integrate(
        0.0, {P0.x, P0.y, P0.px, P0.py}, 1e9,
        [&](const Dopri5<4>::Segment& seg) {
          while (seg.y1[1] >= k * two_pi && k <= max_crossings) {
            // solve y(t) = 2 pi k on this segment by bisection
            double ta = seg.t0, tb = seg.t1;
            for (int it = 0; it < 80; ++it) {
              const double tm = 0.5 * (ta + tb);
              if (seg.eval(tm)[1] < k * two_pi)
                ta = tm;
              else
                tb = tm;
            }
            const State<4> s = seg.eval(0.5 * (ta + tb));
            const double d = std::sqrt((s[0] - P0.x) * (s[0] - P0.x) +
                                       (s[2] - P0.px) * (s[2] - P0.px) +
                                       (s[3] - P0.py) * (s[3] - P0.py));
            if (d < g.return_distance) {
              g.return_distance = d;
              g.period = 0.5 * (ta + tb);
              g.crossings = k;
            }
            ++k;
          }
          return g.return_distance > tol && k <= max_crossings;
        });
    if (!std::isfinite(g.return_distance))
      throw NoReturnDetected("no section crossing found");
    rep.geodesics.push_back(g);
  }
  rep.pass = true;
  for (const ZollGeodesic& g : rep.geodesics)
    if (!(g.return_distance <= tol)) rep.pass = false;
  return rep;
}

}  // namespace supint
