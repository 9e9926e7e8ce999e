// Two independent verifications that the cubic basis elements commute
// with H: the five momentum-monomial coefficient identities of {F,H},
// and a finite-difference canonical Poisson bracket.  Also the ladder
// structure of F -> dF/dy.
#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "supint/geodesic.hpp"
#include "supint/integrals.hpp"
#include "supint/profile.hpp"

namespace supint {

// Coefficients of px^(4-k) py^k, k = 0..4, in {F,H} for one basis
// element, normalized by 1 + |hx|^3.  All five vanish on solutions.
inline std::array<double, 5> coefficient_residuals(const HProfile& prof,
                                                   const BasisElement& el,
                                                   double x, double y) {
  const HProfile::Values v = prof.eval(x);
  const double hx = v.hx, hxx = v.hxx;
  const std::array<double, 4> b = el.mono(x, y, 0);
  const std::array<double, 4> bx = el.mono_dx(x, y, 0);
  const std::array<double, 4> by = el.mono(x, y, 1);
  const double norm = 1.0 + std::abs(hx * hx * hx);
  std::array<double, 5> c{};
  for (int k = 0; k <= 4; ++k) {
    double r = 0.0;
    if (k <= 3) r += hx * hx * bx[k] - (3 - k) * hx * hxx * b[k];
    if (k >= 1) r += hx * hx * by[k - 1];
    if (k >= 2) r -= (5 - k) * hx * hxx * b[k - 2];
    c[k] = r / norm;
  }
  return c;
}

// Centered-difference canonical bracket, Richardson-extrapolated once.
inline double poisson_bracket_fd(
    const std::function<double(const PhasePoint&)>& f,
    const std::function<double(const PhasePoint&)>& g, const PhasePoint& P,
    double step) {
  auto estimate = [&](double s) {
    auto d = [&](const std::function<double(const PhasePoint&)>& fn,
                 int coord) {
      PhasePoint Pp = P, Pm = P;
      double* fp[4] = {&Pp.x, &Pp.y, &Pp.px, &Pp.py};
      double* fm[4] = {&Pm.x, &Pm.y, &Pm.px, &Pm.py};
      *fp[coord] += s;
      *fm[coord] -= s;
      return (fn(Pp) - fn(Pm)) / (2.0 * s);
    };
    return d(f, 0) * d(g, 2) + d(f, 1) * d(g, 3) - d(f, 2) * d(g, 0) -
           d(f, 3) * d(g, 1);
  };
  return (4.0 * estimate(0.5 * step) - estimate(step)) / 3.0;
}

struct LadderReport {
  std::vector<std::pair<std::string, double>> relations;  // name, max err
  double max_err = 0.0;
  bool pass = false;
};

// Verifies the y-derivation structure of the basis at sampled points:
// exponential eigenpair (hyperbolic), rotation pair (elliptic), and the
// size-3 Jordan chain (parabolic).
inline LadderReport ladder_check(const HProfile& prof,
                                 const CubicIntegralBasis& basis,
                                 int n_points = 25, double tol = 1e-8,
                                 std::uint64_t seed = 12345) {
  std::mt19937_64 rng(seed);
  const double margin = 0.05 * (prof.x_max() - prof.x_min());
  std::uniform_real_distribution<double> ux(prof.x_min() + margin,
                                            prof.x_max() - margin);
  std::uniform_real_distribution<double> uy(-1.5, 1.5);
  std::uniform_real_distribution<double> up(-1.0, 1.0);

  const PrincipalParams& p = prof.params;
  LadderReport rep;
  auto track = [&](const std::string& name, double err) {
    for (auto& [n, e] : rep.relations)
      if (n == name) {
        e = std::max(e, err);
        return;
      }
    rep.relations.emplace_back(name, err);
  };

  for (int i = 0; i < n_points; ++i) {
    const PhasePoint P{ux(rng), uy(rng), up(rng), up(rng)};
    const double f1 = basis.f1().eval(P), f2 = basis.f2().eval(P);
    const double scale = 1.0 + std::abs(f1) + std::abs(f2);
    switch (p.kind) {
      case PrincipalCase::Hyperbolic:
        track("dy F+ = +mu F+",
              std::abs(basis.f1().eval_dy(P, 1) - p.mu * f1) / scale);
        track("dy F- = -mu F-",
              std::abs(basis.f2().eval_dy(P, 1) + p.mu * f2) / scale);
        break;
      case PrincipalCase::Elliptic:
        track("dy F1 = -mu F2",
              std::abs(basis.f1().eval_dy(P, 1) + p.mu * f2) / scale);
        track("dy F2 = +mu F1",
              std::abs(basis.f2().eval_dy(P, 1) - p.mu * f1) / scale);
        break;
      case PrincipalCase::Parabolic: {
        const double lh = basis.lh().eval(P), l3 = basis.lcubed().eval(P);
        track("dy F2 = F1",
              std::abs(basis.f2().eval_dy(P, 1) - f1) / scale);
        track("dy F1 = A1 LH + (A3/2) L3",
              std::abs(basis.f1().eval_dy(P, 1) - p.A1 * lh -
                       0.5 * p.A3 * l3) /
                  scale);
        track("dy^3 F2 = 0", std::abs(basis.f2().eval_dy(P, 3)) / scale);
        break;
      }
    }
  }
  for (auto& [n, e] : rep.relations) rep.max_err = std::max(rep.max_err, e);
  rep.pass = rep.max_err <= tol;
  return rep;
}

struct BracketOptions {
  int n_nodes = 41;
  std::vector<double> ys = {0.0, 0.37, -1.1};
  int fd_points = 50;
  double fd_step = 1e-4;
  double tol_coeff = 1e-9;
  double tol_fd = 1e-6;
  std::uint64_t seed = 2024;
};

struct BracketReport {
  std::vector<double> nodes;
  std::vector<std::array<double, 5>> coeff;  // per node, max over F1/F2, y
  double max_coeff = 0.0;
  std::vector<double> fd_samples;
  double max_fd = 0.0;
  bool pass_coeff = false, pass_fd = false, pass = false;
  LadderReport ladder;
};

inline BracketReport verify_brackets(const HProfile& prof,
                                     const CubicIntegralBasis& basis,
                                     BracketOptions opt = {}) {
  BracketReport rep;
  const double lo = prof.x_min(), hi = prof.x_max();
  const double margin = 0.02 * (hi - lo);

  for (int i = 0; i < opt.n_nodes; ++i) {
    const double x = lo + margin +
                     (hi - lo - 2 * margin) * i /
                         static_cast<double>(opt.n_nodes - 1);
    std::array<double, 5> worst{};
    for (const BasisElement* el : {&basis.f1(), &basis.f2()})
      for (double y : opt.ys) {
        const std::array<double, 5> c =
            coefficient_residuals(prof, *el, x, y);
        for (int k = 0; k < 5; ++k)
          worst[k] = std::max(worst[k], std::abs(c[k]));
      }
    rep.nodes.push_back(x);
    rep.coeff.push_back(worst);
    for (int k = 0; k < 5; ++k) rep.max_coeff = std::max(rep.max_coeff, worst[k]);
  }

  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> ux(lo + margin + 10 * opt.fd_step,
                                            hi - margin - 10 * opt.fd_step);
  std::uniform_real_distribution<double> uy(-1.5, 1.5);
  std::uniform_real_distribution<double> up(-1.0, 1.0);
  auto H = [&](const PhasePoint& P) { return hamiltonian(prof, P); };
  for (int i = 0; i < opt.fd_points; ++i) {
    const PhasePoint P{ux(rng), uy(rng), up(rng), up(rng)};
    const BasisElement& el = basis.elements[i % 4];
    auto F = [&el](const PhasePoint& Q) { return el.eval(Q); };
    const double hx = prof.eval(P.x).hx;
    const double norm = 1.0 + std::abs(hx * hx * hx);
    const double r = std::abs(poisson_bracket_fd(H, F, P, opt.fd_step)) / norm;
    rep.fd_samples.push_back(r);
    rep.max_fd = std::max(rep.max_fd, r);
  }

  rep.ladder = ladder_check(prof, basis);
  rep.pass_coeff = rep.max_coeff <= opt.tol_coeff;
  rep.pass_fd = rep.max_fd <= opt.tol_fd;
  rep.pass = rep.pass_coeff && rep.pass_fd && rep.ladder.pass;
  return rep;
}

}  // namespace supint
