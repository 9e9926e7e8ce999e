// The three first-order implicit ODEs ("hyperbolic", "elliptic",
// "parabolic") defining the conformal factor profile h(x), together with
// the algebra needed to treat them as cubics in h_x.
//
// All three share the shape
//     h_x * (A0*h_x^2 + q(h)) = Lambda(x)
// where q and Lambda depend on the case:
//   hyperbolic:  q = +mu^2*A0*h^2 - A1*h + A2,  Lambda = A3*sin(mu x)/mu + A4*cos(mu x)
//   elliptic:    q = -mu^2*A0*h^2 - A1*h + A2,  Lambda = A3*sinh(mu x)/mu + A4*cosh(mu x)
//   parabolic:   q =              - A1*h + A2,  Lambda = A3*x + A4
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "supint/cubic_roots.hpp"

namespace supint {

enum class PrincipalCase { Hyperbolic, Elliptic, Parabolic };

inline const char* to_string(PrincipalCase c) {
  switch (c) {
    case PrincipalCase::Hyperbolic: return "hyperbolic";
    case PrincipalCase::Elliptic: return "elliptic";
    case PrincipalCase::Parabolic: return "parabolic";
  }
  return "?";
}

struct InvalidParams : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct DegenerateParams : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NoRootError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SingularBranch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct OutOfRange : std::out_of_range {
  using std::out_of_range::out_of_range;
};

struct PrincipalParams {
  PrincipalCase kind = PrincipalCase::Parabolic;
  double mu = 0.0;  // ignored for the parabolic case
  double A0 = 0.0, A1 = 0.0, A2 = 0.0, A3 = 0.0, A4 = 0.0;

  void validate() const {
    if (kind != PrincipalCase::Parabolic && !(mu > 0.0))
      throw InvalidParams("mu must be positive for cases (i)/(ii)");
    if (A0 == 0.0 && A1 == 0.0 && A2 == 0.0)
      throw DegenerateParams("A0=A1=A2=0: left-hand side is trivial");
    if (A0 == 0.0 && A1 == 0.0 && A3 == 0.0 && A4 == 0.0)
      throw DegenerateParams(
          "A0=A1=A3=A4=0: only constant-curvature profiles exist");
  }
};

// Lambda(x) and its first two x-derivatives.
inline double rhs_lambda(const PrincipalParams& p, double x) {
  switch (p.kind) {
    case PrincipalCase::Hyperbolic:
      return p.A3 * std::sin(p.mu * x) / p.mu + p.A4 * std::cos(p.mu * x);
    case PrincipalCase::Elliptic:
      return p.A3 * std::sinh(p.mu * x) / p.mu + p.A4 * std::cosh(p.mu * x);
    case PrincipalCase::Parabolic:
      return p.A3 * x + p.A4;
  }
  return 0.0;
}

inline double rhs_lambda_d1(const PrincipalParams& p, double x) {
  switch (p.kind) {
    case PrincipalCase::Hyperbolic:
      return p.A3 * std::cos(p.mu * x) - p.A4 * p.mu * std::sin(p.mu * x);
    case PrincipalCase::Elliptic:
      return p.A3 * std::cosh(p.mu * x) + p.A4 * p.mu * std::sinh(p.mu * x);
    case PrincipalCase::Parabolic:
      return p.A3;
  }
  return 0.0;
}

inline double rhs_lambda_d2(const PrincipalParams& p, double x) {
  switch (p.kind) {
    case PrincipalCase::Hyperbolic:
      return -p.mu * p.mu * rhs_lambda(p, x);
    case PrincipalCase::Elliptic:
      return p.mu * p.mu * rhs_lambda(p, x);
    case PrincipalCase::Parabolic:
      return 0.0;
  }
  return 0.0;
}

// Sign of the mu^2*A0*h^2 term: +1 (i), -1 (ii), 0 (iii).
inline double mu2_sign(const PrincipalParams& p) {
  switch (p.kind) {
    case PrincipalCase::Hyperbolic: return +1.0;
    case PrincipalCase::Elliptic: return -1.0;
    case PrincipalCase::Parabolic: return 0.0;
  }
  return 0.0;
}

inline double q_of(const PrincipalParams& p, double h) {
  const double m2 = (p.kind == PrincipalCase::Parabolic) ? 0.0
                                                         : p.mu * p.mu;
  return mu2_sign(p) * m2 * p.A0 * h * h - p.A1 * h + p.A2;
}

inline double dq_dh(const PrincipalParams& p, double h) {
  const double m2 = (p.kind == PrincipalCase::Parabolic) ? 0.0
                                                         : p.mu * p.mu;
  return 2.0 * mu2_sign(p) * m2 * p.A0 * h - p.A1;
}

inline double d2q_dh2(const PrincipalParams& p) {
  const double m2 = (p.kind == PrincipalCase::Parabolic) ? 0.0
                                                         : p.mu * p.mu;
  return 2.0 * mu2_sign(p) * m2 * p.A0;
}

// LHS - RHS of the Principal equation at a candidate state.
inline double residual(const PrincipalParams& p, double x, double h,
                       double hx) {
  return hx * (p.A0 * hx * hx + q_of(p, h)) - rhs_lambda(p, x);
}

inline double residual_scale(const PrincipalParams& p, double x, double h,
                             double hx) {
  // grows with the magnitudes of the cubic's own terms so that the
  // relative test stays meaningful when hx is large and the terms cancel
  const double ax3 = std::abs(p.A0) * std::abs(hx * hx * hx);
  return 1.0 + std::abs(h) + std::abs(hx) + ax3 +
         std::abs(q_of(p, h) * hx) + std::abs(rhs_lambda(p, x));
}

// All real branches of h_x at (x, h): roots of A0*L^3 + q*L - Lambda = 0.
// Empty exactly when A0 = 0, q = 0 and Lambda != 0 (inconsistent linear
// equation).
inline std::vector<RealRoot> hx_candidates(const PrincipalParams& p, double x,
                                           double h) {
  return solve_cubic_real(p.A0, 0.0, q_of(p, h), -rhs_lambda(p, x));
}

struct ImplicitDerivs {
  double hxx = 0.0;
  double hxxx = 0.0;
};

// h_xx and h_xxx from the first and second x-derivatives of the Principal
// equation, treating it as an identity along a solution.  Throws
// SingularBranch near a root collision (|3*A0*hx^2 + q| small).
inline ImplicitDerivs implicit_derivatives(const PrincipalParams& p, double x,
                                           double h, double hx,
                                           double eps_D = 1e-10) {
  const double q = q_of(p, h);
  const double qp = dq_dh(p, h);
  const double qpp = d2q_dh2(p);
  const double D = 3.0 * p.A0 * hx * hx + q;
  const double Dscale = 1.0 + std::abs(3.0 * p.A0 * hx * hx) + std::abs(q);
  if (std::abs(D) <= eps_D * Dscale)
    throw SingularBranch("root collision: d/dhx of the cubic vanishes at x=" +
                         std::to_string(x));
  const double hxx = (rhs_lambda_d1(p, x) - qp * hx * hx) / D;
  const double hxxx = (rhs_lambda_d2(p, x) - 6.0 * p.A0 * hx * hxx * hxx -
                       3.0 * qp * hx * hxx - qpp * hx * hx * hx) /
                      D;
  return {hxx, hxxx};
}

}  // namespace supint
