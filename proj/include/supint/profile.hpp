// Solving a Principal equation as an explicit ODE h' = lambda(x, h) with
// branch continuation, and the resulting dense-output profile object.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "supint/ode.hpp"
#include "supint/principal.hpp"

namespace supint {

struct MetricDegenerate : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NoRootAtStart : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct RootCollision : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RootSelector {
  enum class Kind { Index, NearestTo, UniquePositive };
  Kind kind = Kind::UniquePositive;
  int index = 0;
  double value = 0.0;

  static RootSelector Index(int k) {
    return {Kind::Index, k, 0.0};
  }
  static RootSelector NearestTo(double v) {
    return {Kind::NearestTo, 0, v};
  }
  static RootSelector UniquePositive() {
    return {Kind::UniquePositive, 0, 0.0};
  }
};

// The h_x branch chosen at the anchor point.
struct RootBranch {
  double x0 = 0.0;
  double h0 = 0.0;
  double hx0 = 0.0;
  int index = 0;        // position in the ascending root list
  int n_roots = 0;
  std::string selector; // human-readable record of the selection rule
};

struct SolveOptions {
  double tol_alg = 1e-11;  // relative algebraic-residual bound
  double eps_D = 1e-10;    // relative root-collision guard
  double rtol = 1e-12;
  double atol = 1e-14;
};

class HProfile {
public:
  PrincipalParams params;
  std::vector<double> grid, h, hx, hxx, hxxx;
  RootBranch root_branch;
  bool truncated_left = false, truncated_right = false;
  std::string truncation_reason_left, truncation_reason_right;
  SolveOptions options;

  double x_min() const { return grid.front(); }
  double x_max() const { return grid.back(); }
  std::size_t size() const { return grid.size(); }

  bool contains(double x) const { return x >= x_min() && x <= x_max(); }

  struct Values {
    double h = 0, hx = 0, hxx = 0, hxxx = 0;
  };

  // Quintic-Hermite interpolation of h and h_x; the higher derivatives
  // come from the implicit-derivative formulas at the interpolated state,
  // so the algebraic constraint stays satisfied to interpolation accuracy.
  Values eval(double x) const {
    const std::size_t i = locate(x);
    const double x0 = grid[i], x1 = grid[i + 1];
    const double s = x1 - x0;
    const double t = (x - x0) / s;
    Values v;
    v.h = quintic(t, h[i], hx[i] * s, hxx[i] * s * s, h[i + 1],
                  hx[i + 1] * s, hxx[i + 1] * s * s);
    v.hx = quintic(t, hx[i], hxx[i] * s, hxxx[i] * s * s, hx[i + 1],
                   hxx[i + 1] * s, hxxx[i + 1] * s * s);
    const ImplicitDerivs d =
        implicit_derivatives(params, x, v.h, v.hx, options.eps_D);
    v.hxx = d.hxx;
    v.hxxx = d.hxxx;
    return v;
  }

  double eval_h(double x) const { return eval(x).h; }
  double eval_hx(double x) const { return eval(x).hx; }

private:
  std::size_t locate(double x) const {
    if (grid.size() < 2 || !contains(x))
      throw OutOfRange("x=" + std::to_string(x) + " outside profile range [" +
                       std::to_string(x_min()) + ", " +
                       std::to_string(x_max()) + "]");
    auto it = std::upper_bound(grid.begin(), grid.end(), x);
    std::size_t i = static_cast<std::size_t>(it - grid.begin());
    if (i > 0) --i;
    if (i + 1 >= grid.size()) i = grid.size() - 2;
    return i;
  }

  static double quintic(double t, double v0, double d0, double c0, double v1,
                        double d1, double c1) {
    const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
    const double H0 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
    const double H1 = t - 6 * t3 + 8 * t4 - 3 * t5;
    const double H2 = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5;
    const double H3 = 10 * t3 - 15 * t4 + 6 * t5;
    const double H4 = -4 * t3 + 7 * t4 - 3 * t5;
    const double H5 = 0.5 * t3 - t4 + 0.5 * t5;
    return v0 * H0 + d0 * H1 + c0 * H2 + v1 * H3 + d1 * H4 + c1 * H5;
  }
};

namespace detail {

// Newton iteration onto the cubic constraint; the seed carries the branch.
inline double project_root(const PrincipalParams& p, double x, double h,
                           double seed, double eps_D) {
  double lam = seed;
  for (int it = 0; it < 50; ++it) {
    const double q = q_of(p, h);
    const double f = lam * (p.A0 * lam * lam + q) - rhs_lambda(p, x);
    const double df = 3.0 * p.A0 * lam * lam + q;
    const double dscale = 1.0 + std::abs(3.0 * p.A0 * lam * lam) + std::abs(q);
    if (std::abs(df) <= eps_D * dscale)
      throw SingularBranch("branch derivative vanished at x=" +
                           std::to_string(x));
    const double step = f / df;
    lam -= step;
    if (std::abs(step) <= 1e-15 * (1.0 + std::abs(lam))) return lam;
  }
  const double res = residual(p, x, h, lam);
  if (std::abs(res) > 1e-9 * residual_scale(p, x, h, lam))
    throw SingularBranch("root projection failed to converge at x=" +
                         std::to_string(x));
  return lam;
}

}  // namespace detail

inline double select_root(const PrincipalParams& p, double x0, double h0,
                          const RootSelector& sel, RootBranch* branch_out) {
  const std::vector<RealRoot> roots = hx_candidates(p, x0, h0);
  if (roots.empty())
    throw NoRootAtStart("no real h_x branch at (x0, h0)");
  int chosen = -1;
  std::string desc;
  switch (sel.kind) {
    case RootSelector::Kind::Index:
      if (sel.index < 0 || sel.index >= static_cast<int>(roots.size()))
        throw NoRootAtStart("root index " + std::to_string(sel.index) +
                            " out of range (have " +
                            std::to_string(roots.size()) + " roots)");
      chosen = sel.index;
      desc = "index:" + std::to_string(sel.index);
      break;
    case RootSelector::Kind::NearestTo: {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < roots.size(); ++i) {
        const double d = std::abs(roots[i].value - sel.value);
        if (d < best) {
          best = d;
          chosen = static_cast<int>(i);
        }
      }
      desc = "nearest:" + std::to_string(sel.value);
      break;
    }
    case RootSelector::Kind::UniquePositive: {
      int count = 0;
      for (std::size_t i = 0; i < roots.size(); ++i)
        if (roots[i].value > 0.0) {
          ++count;
          chosen = static_cast<int>(i);
        }
      if (count == 0)
        throw NoRootAtStart("no positive h_x branch at (x0, h0)");
      if (count > 1)
        throw NoRootAtStart("positive h_x branch is not unique at (x0, h0)");
      desc = "positive";
      break;
    }
  }
  if (roots[chosen].multiplicity != 1)
    throw RootCollision("selected h_x branch is a multiple root at x0");
  if (branch_out) {
    branch_out->x0 = x0;
    branch_out->h0 = h0;
    branch_out->hx0 = roots[chosen].value;
    branch_out->index = chosen;
    branch_out->n_roots = static_cast<int>(roots.size());
    branch_out->selector = desc;
  }
  return roots[chosen].value;
}

// Integrate the Principal equation outward from (x0, h0) over [a, b] with
// n uniformly spaced grid nodes.  Hits a root collision or h_x -> 0 are
// handled by truncating the profile on that side and flagging it.
inline HProfile solve_profile(const PrincipalParams& params, double x0,
                              double h0, const RootSelector& sel,
                              double a, double b, std::size_t n,
                              SolveOptions opt = {}) {
  params.validate();
  if (!(a < b) || n < 4) throw InvalidParams("bad range or grid size");
  if (x0 < a || x0 > b) throw InvalidParams("x0 outside requested range");

  HProfile prof;
  prof.params = params;
  prof.options = opt;
  const double lam0 = select_root(params, x0, h0, sel, &prof.root_branch);
  const double sign0 = (lam0 > 0) ? 1.0 : -1.0;
  if (lam0 == 0.0) throw MetricDegenerate("h_x = 0 at the anchor point");

  const double dx = (b - a) / static_cast<double>(n - 1);
  auto node_x = [&](std::size_t i) { return a + dx * static_cast<double>(i); };

  // One-sided sweep; returns nodes covered (ascending x order regardless
  // of direction) and a truncation reason ("" if the range edge was hit).
  struct Side {
    std::vector<double> xs, hs, lams;
    std::string reason;
  };
  auto sweep = [&](double x_end, bool rightward) {
    Side out;
    double lam_state = lam0;
    Dopri5<1>::Options oopt;
    oopt.rtol = opt.rtol;
    oopt.atol = opt.atol;
    oopt.h_max = std::max(1e-3, (b - a) / 64.0);
    oopt.h_init = 1e-4;
    Dopri5<1> ode(
        [&](double x, const State<1>& y) -> State<1> {
          lam_state = detail::project_root(params, x, y[0], lam_state,
                                           opt.eps_D);
          return {lam_state};
        },
        oopt);

    // node indices to fill, in sweep order
    std::vector<std::size_t> pending;
    for (std::size_t i = 0; i < n; ++i) {
      const double xi = node_x(i);
      if (rightward ? (xi >= x0) : (xi <= x0)) pending.push_back(i);
    }
    if (!rightward) std::reverse(pending.begin(), pending.end());
    std::size_t next = 0;

    try {
      ode.integrate(x0, {h0}, x_end, [&](const Dopri5<1>::Segment& seg) {
        const double lo = std::min(seg.t0, seg.t1);
        const double hi = std::max(seg.t0, seg.t1);
        const double lam_a = detail::project_root(params, seg.t0, seg.y0[0],
                                                  lam_state, opt.eps_D);
        while (next < pending.size()) {
          const double xi = node_x(pending[next]);
          if (xi < lo - 1e-12 || xi > hi + 1e-12) break;
          const double hh = seg.eval(std::clamp(xi, lo, hi))[0];
          const double frac = (xi - seg.t0) / (seg.t1 - seg.t0);
          const double seed = lam_a + frac * (lam_state - lam_a);
          const double lam = detail::project_root(params, xi, hh, seed,
                                                  opt.eps_D);
          out.xs.push_back(xi);
          out.hs.push_back(hh);
          out.lams.push_back(lam);
          ++next;
        }
        if (lam_state * sign0 <= 0.0)
          throw MetricDegenerate("h_x crossed zero at x=" +
                                 std::to_string(seg.t1));
        return true;
      });
    } catch (const SingularBranch& e) {
      out.reason = std::string("RootCollision: ") + e.what();
    } catch (const MetricDegenerate& e) {
      out.reason = std::string("MetricDegenerate: ") + e.what();
    } catch (const StepFailure& e) {
      out.reason = std::string("StepFailure: ") + e.what();
    }
    if (!rightward) {
      std::reverse(out.xs.begin(), out.xs.end());
      std::reverse(out.hs.begin(), out.hs.end());
      std::reverse(out.lams.begin(), out.lams.end());
    }
    return out;
  };

  Side left = (x0 > a) ? sweep(a, false) : Side{};
  Side right = sweep(b, true);

  prof.truncated_left = !left.reason.empty();
  prof.truncation_reason_left = left.reason;
  prof.truncated_right = !right.reason.empty();
  prof.truncation_reason_right = right.reason;

  auto append = [&](const Side& s) {
    for (std::size_t i = 0; i < s.xs.size(); ++i) {
      if (!prof.grid.empty() && s.xs[i] <= prof.grid.back() + 1e-14) continue;
      prof.grid.push_back(s.xs[i]);
      prof.h.push_back(s.hs[i]);
      prof.hx.push_back(s.lams[i]);
    }
  };
  append(left);
  append(right);
  if (prof.grid.size() < 4)
    throw RootCollision("profile truncated before covering any usable range" +
                        (right.reason.empty() ? left.reason : right.reason));

  prof.hxx.resize(prof.grid.size());
  prof.hxxx.resize(prof.grid.size());
  for (std::size_t i = 0; i < prof.grid.size(); ++i) {
    const ImplicitDerivs d = implicit_derivatives(
        params, prof.grid[i], prof.h[i], prof.hx[i], opt.eps_D);
    prof.hxx[i] = d.hxx;
    prof.hxxx[i] = d.hxxx;
    const double res = residual(params, prof.grid[i], prof.h[i], prof.hx[i]);
    const double sc =
        residual_scale(params, prof.grid[i], prof.h[i], prof.hx[i]);
    if (std::abs(res) > opt.tol_alg * sc)
      throw StepFailure("algebraic residual above tolerance at grid node x=" +
                        std::to_string(prof.grid[i]));
  }
  return prof;
}

}  // namespace supint
