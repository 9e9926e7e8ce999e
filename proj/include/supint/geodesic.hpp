// Hamiltonian flow of H = (1/2) h_x^2 (px^2 + py^2) with per-integral
// conservation diagnostics and functional-independence rank tests.
#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "supint/integrals.hpp"
#include "supint/linalg.hpp"
#include "supint/ode.hpp"
#include "supint/profile.hpp"

namespace supint {

inline double hamiltonian(const HProfile& prof, const PhasePoint& P) {
  const double hx = prof.eval(P.x).hx;
  return 0.5 * hx * hx * (P.px * P.px + P.py * P.py);
}

// (dx/dt, dy/dt, dpx/dt, dpy/dt); dpy = 0 is the linear integral L = py.
inline std::array<double, 4> hamilton_rhs(const HProfile& prof,
                                          const PhasePoint& P) {
  const HProfile::Values v = prof.eval(P.x);
  const double p2 = P.px * P.px + P.py * P.py;
  return {v.hx * v.hx * P.px, v.hx * v.hx * P.py, -v.hx * v.hxx * p2, 0.0};
}

enum class Termination { Completed, LeftChart, StepFailure };

inline const char* to_string(Termination t) {
  switch (t) {
    case Termination::Completed: return "completed";
    case Termination::LeftChart: return "left_chart";
    case Termination::StepFailure: return "step_failure";
  }
  return "?";
}

struct GeodesicTrace {
  std::vector<double> t;
  std::vector<PhasePoint> samples;
  std::vector<std::string> integral_names;
  std::vector<std::vector<double>> values;  // [integral][sample]
  std::vector<std::vector<double>> drift;   // relative, same layout
  std::vector<double> max_drift;            // per integral
  Termination termination = Termination::Completed;

  double max_drift_of(const std::string& name) const {
    for (std::size_t i = 0; i < integral_names.size(); ++i)
      if (integral_names[i] == name) return max_drift[i];
    return -1.0;
  }
};

inline GeodesicTrace integrate_geodesic(const HProfile& prof,
                                        const CubicIntegralBasis& basis,
                                        const PhasePoint& P0, double T,
                                        double tol = 1e-12) {
  using Eval = std::function<double(const PhasePoint&)>;
  std::vector<std::pair<std::string, Eval>> ints;
  ints.emplace_back("H", [&](const PhasePoint& P) {
    return hamiltonian(prof, P);
  });
  ints.emplace_back("L", [](const PhasePoint& P) { return P.py; });
  for (const BasisElement& e : basis.elements)
    ints.emplace_back(e.name,
                      [&e](const PhasePoint& P) { return e.eval(P); });
  if (auto q = darboux_factorization(basis))
    ints.emplace_back("Q", [q](const PhasePoint& P) { return q->eval(P); });

  GeodesicTrace tr;
  for (auto& [name, fn] : ints) tr.integral_names.push_back(name);
  tr.values.resize(ints.size());
  tr.drift.resize(ints.size());
  tr.max_drift.assign(ints.size(), 0.0);

  std::vector<double> I0(ints.size());
  for (std::size_t i = 0; i < ints.size(); ++i) I0[i] = ints[i].second(P0);

  auto record = [&](double t, const PhasePoint& P) {
    tr.t.push_back(t);
    tr.samples.push_back(P);
    for (std::size_t i = 0; i < ints.size(); ++i) {
      const double v = ints[i].second(P);
      // 1 + |I0| in the denominator keeps the diagnostic finite for
      // integrals that vanish identically along the orbit
      const double d = std::abs(v - I0[i]) / (1.0 + std::abs(I0[i]));
      tr.values[i].push_back(v);
      tr.drift[i].push_back(d);
      tr.max_drift[i] = std::max(tr.max_drift[i], d);
    }
  };
  record(0.0, P0);

  const double cell =
      (prof.x_max() - prof.x_min()) / static_cast<double>(prof.size() - 1);
  const double lo = prof.x_min(), hi = prof.x_max();

  Dopri5<4>::Options oopt;
  oopt.rtol = tol;
  oopt.atol = tol * 1e-2;
  Dopri5<4> ode(
      [&](double, const State<4>& y) -> State<4> {
        return hamilton_rhs(prof, {y[0], y[1], y[2], y[3]});
      },
      oopt);
  try {
    ode.integrate(0.0, {P0.x, P0.y, P0.px, P0.py}, T,
                  [&](const Dopri5<4>::Segment& seg) {
                    const PhasePoint P{seg.y1[0], seg.y1[1], seg.y1[2],
                                       seg.y1[3]};
                    if (P.x >= lo && P.x <= hi) record(seg.t1, P);
                    if (P.x < lo + cell || P.x > hi - cell) {
                      tr.termination = Termination::LeftChart;
                      return false;
                    }
                    return true;
                  });
  } catch (const StepFailure&) {
    const double x_last = tr.samples.back().x;
    tr.termination = (x_last < lo + 2 * cell || x_last > hi - 2 * cell)
                         ? Termination::LeftChart
                         : Termination::StepFailure;
  }
  return tr;
}

// Numerical rank of the 3 x 4 Jacobian of (L, F1, H) in (x, y, px, py),
// centered differences with step fd_step.
inline int independence_rank(const HProfile& prof,
                             const CubicIntegralBasis& basis,
                             const PhasePoint& P, double fd_step,
                             double sv_tol = 1e-7) {
  using Eval = std::function<double(const PhasePoint&)>;
  const std::array<Eval, 3> fns = {
      Eval([](const PhasePoint& Q) { return Q.py; }),
      Eval([&](const PhasePoint& Q) { return basis.f1().eval(Q); }),
      Eval([&](const PhasePoint& Q) { return hamiltonian(prof, Q); })};
  Matrix J(3, 4);
  for (int j = 0; j < 4; ++j) {
    PhasePoint Pp = P, Pm = P;
    double* fields_p[4] = {&Pp.x, &Pp.y, &Pp.px, &Pp.py};
    double* fields_m[4] = {&Pm.x, &Pm.y, &Pm.px, &Pm.py};
    *fields_p[j] += fd_step;
    *fields_m[j] -= fd_step;
    for (int i = 0; i < 3; ++i)
      J(i, j) = (fns[i](Pp) - fns[i](Pm)) / (2.0 * fd_step);
  }
  return numerical_rank(J, sv_tol);
}

}  // namespace supint
