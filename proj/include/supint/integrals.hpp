// The four-dimensional space of cubic integrals over a solved profile:
// L^3, L*H and the two case-specific cubic integrals F1, F2, exposed as
// phase-space evaluators with analytic x- and y-derivatives of their
// momentum-monomial coefficients.
#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "supint/linalg.hpp"
#include "supint/profile.hpp"

namespace supint {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

struct PhasePoint {
  double x = 0, y = 0, px = 0, py = 0;
};

struct Coeffs {
  double a0 = 0, a1 = 0, a2 = 0, a3 = 0;
};

namespace detail {

struct CoeffPack {
  Coeffs a;    // a_i(x)
  Coeffs da;   // d a_i / dx
  double hx = 0, hxx = 0;
};

inline CoeffPack coeff_pack(const HProfile& prof, double x) {
  const PrincipalParams& p = prof.params;
  const HProfile::Values v = prof.eval(x);
  const double h = v.h, hx = v.hx, hxx = v.hxx, hxxx = v.hxxx;
  const double q = q_of(p, h);
  const double qp = dq_dh(p, h);
  const double D = 3.0 * p.A0 * hx * hx + q;
  const double Dx = 6.0 * p.A0 * hx * hxx + qp * hx;

  CoeffPack c;
  c.hx = hx;
  c.hxx = hxx;
  c.a.a0 = p.A0 * hx * hx * hx;
  c.da.a0 = 3.0 * p.A0 * hx * hx * hxx;
  switch (p.kind) {
    case PrincipalCase::Hyperbolic: {
      const double w = -p.mu * p.A0 * h + p.A1 / (2.0 * p.mu);
      c.a.a1 = w * hx * hx;
      c.da.a1 = -p.mu * p.A0 * hx * hx * hx + w * 2.0 * hx * hxx;
      c.a.a2 = 0.5 * D * hx;
      c.da.a2 = 0.5 * (Dx * hx + D * hxx);
      c.a.a3 = D * hxx / (2.0 * p.mu);
      c.da.a3 = (Dx * hxx + D * hxxx) / (2.0 * p.mu);
      break;
    }
    case PrincipalCase::Elliptic: {
      const double w = p.mu * p.A0 * h + p.A1 / (2.0 * p.mu);
      c.a.a1 = w * hx * hx;
      c.da.a1 = p.mu * p.A0 * hx * hx * hx + w * 2.0 * hx * hxx;
      c.a.a2 = 0.5 * D * hx;
      c.da.a2 = 0.5 * (Dx * hx + D * hxx);
      c.a.a3 = D * hxx / (2.0 * p.mu);
      c.da.a3 = (Dx * hxx + D * hxxx) / (2.0 * p.mu);
      break;
    }
    case PrincipalCase::Parabolic: {
      c.a.a1 = -p.A0 * hx * hx * h;
      c.da.a1 = -p.A0 * (2.0 * hx * hxx * h + hx * hx * hx);
      c.a.a2 = 0.5 * D * hx;
      c.da.a2 = 0.5 * (Dx * hx + D * hxx);
      c.a.a3 = -0.25 * (4.0 * p.A0 * hx * hx * h + p.A3 * x * x +
                        2.0 * p.A4 * x);
      c.da.a3 = -0.25 * (4.0 * p.A0 * (2.0 * hx * hxx * h + hx * hx * hx) +
                         2.0 * p.A3 * x + 2.0 * p.A4);
      break;
    }
  }
  return c;
}

}  // namespace detail

inline Coeffs coeffs(const HProfile& prof, double x) {
  return detail::coeff_pack(prof, x).a;
}

// One integral: E(P) = sum_i b_i(x,y) * px^(3-i) * py^i.  mono(x, y, k)
// returns the k-th y-derivative of (b_0..b_3); mono_dx the x-derivative
// of the same.
struct BasisElement {
  using MonoFn = std::function<std::array<double, 4>(double, double, int)>;
  std::string name;
  MonoFn mono;
  MonoFn mono_dx;

  double eval(const PhasePoint& P) const {
    const std::array<double, 4> b = mono(P.x, P.y, 0);
    return b[0] * P.px * P.px * P.px + b[1] * P.px * P.px * P.py +
           b[2] * P.px * P.py * P.py + b[3] * P.py * P.py * P.py;
  }

  // k-th y-derivative of the evaluator.
  double eval_dy(const PhasePoint& P, int k) const {
    const std::array<double, 4> b = mono(P.x, P.y, k);
    return b[0] * P.px * P.px * P.px + b[1] * P.px * P.px * P.py +
           b[2] * P.px * P.py * P.py + b[3] * P.py * P.py * P.py;
  }
};

struct CubicIntegralBasis {
  const HProfile* profile = nullptr;
  std::vector<BasisElement> elements;  // [Lcubed, LH, F1, F2]

  const BasisElement& lcubed() const { return elements[0]; }
  const BasisElement& lh() const { return elements[1]; }
  const BasisElement& f1() const { return elements[2]; }
  const BasisElement& f2() const { return elements[3]; }
};

inline CubicIntegralBasis build_basis(const HProfile& prof) {
  CubicIntegralBasis basis;
  basis.profile = &prof;
  const PrincipalParams p = prof.params;

  basis.elements.push_back(
      {"Lcubed",
       [](double, double, int k) -> std::array<double, 4> {
         return {0.0, 0.0, 0.0, k == 0 ? 1.0 : 0.0};
       },
       [](double, double, int) -> std::array<double, 4> {
         return {0.0, 0.0, 0.0, 0.0};
       }});
  basis.elements.push_back(
      {"LH",
       [&prof](double x, double, int k) -> std::array<double, 4> {
         if (k > 0) return {0.0, 0.0, 0.0, 0.0};
         const double hx = prof.eval(x).hx;
         return {0.0, 0.5 * hx * hx, 0.0, 0.5 * hx * hx};
       },
       [&prof](double x, double, int k) -> std::array<double, 4> {
         if (k > 0) return {0.0, 0.0, 0.0, 0.0};
         const HProfile::Values v = prof.eval(x);
         return {0.0, v.hx * v.hxx, 0.0, v.hx * v.hxx};
       }});

  switch (p.kind) {
    case PrincipalCase::Hyperbolic: {
      // F+ and F-: coefficients (a0, +-a1, a2, +-a3) * exp(+-mu y).
      auto make = [&prof, p](double sign, const char* name) {
        auto fn = [&prof, p, sign](bool dx, double x, double y,
                                   int k) -> std::array<double, 4> {
          const detail::CoeffPack c = detail::coeff_pack(prof, x);
          const Coeffs& a = dx ? c.da : c.a;
          const double f =
              std::exp(sign * p.mu * y) * std::pow(sign * p.mu, k);
          return {f * a.a0, f * sign * a.a1, f * a.a2, f * sign * a.a3};
        };
        return BasisElement{
            name,
            [fn](double x, double y, int k) { return fn(false, x, y, k); },
            [fn](double x, double y, int k) { return fn(true, x, y, k); }};
      };
      basis.elements.push_back(make(+1.0, "F+"));
      basis.elements.push_back(make(-1.0, "F-"));
      break;
    }
    case PrincipalCase::Elliptic: {
      // F(phi0) = cos(mu y + phi0)(a0 px^3 + a2 px py^2)
      //         + sin(mu y + phi0)(a1 px^2 py + a3 py^3).
      auto make = [&prof, p](double phi0, const char* name) {
        auto fn = [&prof, p, phi0](bool dx, double x, double y,
                                   int k) -> std::array<double, 4> {
          const detail::CoeffPack c = detail::coeff_pack(prof, x);
          const Coeffs& a = dx ? c.da : c.a;
          const double ph = p.mu * y + phi0 + 0.5 * kPi * k;
          const double f = std::pow(p.mu, k);
          const double co = f * std::cos(ph), si = f * std::sin(ph);
          return {co * a.a0, si * a.a1, co * a.a2, si * a.a3};
        };
        return BasisElement{
            name,
            [fn](double x, double y, int k) { return fn(false, x, y, k); },
            [fn](double x, double y, int k) { return fn(true, x, y, k); }};
      };
      basis.elements.push_back(make(0.0, "F1"));
      basis.elements.push_back(make(-0.5 * kPi, "F2"));
      break;
    }
    case PrincipalCase::Parabolic: {
      // F1: (a0, (y/2) A1 hx^2, a2, (y/2)(A1 hx^2 + A3)).
      auto f1 = [&prof, p](bool dx, double x, double y,
                           int k) -> std::array<double, 4> {
        if (k > 1) return {0.0, 0.0, 0.0, 0.0};
        const detail::CoeffPack c = detail::coeff_pack(prof, x);
        const Coeffs& a = dx ? c.da : c.a;
        const double w = dx ? 2.0 * p.A1 * c.hx * c.hxx
                            : p.A1 * c.hx * c.hx;
        const double w3 = w + (dx ? 0.0 : p.A3);
        if (k == 1) return {0.0, 0.5 * w, 0.0, 0.5 * w3};
        return {a.a0, 0.5 * y * w, a.a2, 0.5 * y * w3};
      };
      // F2: (y a0, a1 + (y^2/4) A1 hx^2, y a2, a3 + (y^2/4)(A1 hx^2+A3)).
      auto f2 = [&prof, p](bool dx, double x, double y,
                           int k) -> std::array<double, 4> {
        if (k > 2) return {0.0, 0.0, 0.0, 0.0};
        const detail::CoeffPack c = detail::coeff_pack(prof, x);
        const Coeffs& a = dx ? c.da : c.a;
        const double w = dx ? 2.0 * p.A1 * c.hx * c.hxx
                            : p.A1 * c.hx * c.hx;
        const double w3 = w + (dx ? 0.0 : p.A3);
        if (k == 2) return {0.0, 0.5 * w, 0.0, 0.5 * w3};
        if (k == 1) return {a.a0, 0.5 * y * w, a.a2, 0.5 * y * w3};
        return {y * a.a0, a.a1 + 0.25 * y * y * w, y * a.a2,
                a.a3 + 0.25 * y * y * w3};
      };
      basis.elements.push_back(BasisElement{
          "F1",
          [f1](double x, double y, int k) { return f1(false, x, y, k); },
          [f1](double x, double y, int k) { return f1(true, x, y, k); }});
      basis.elements.push_back(BasisElement{
          "F2",
          [f2](double x, double y, int k) { return f2(false, x, y, k); },
          [f2](double x, double y, int k) { return f2(true, x, y, k); }});
      break;
    }
  }
  return basis;
}

// The quadratic integral Q = F1/py of the A0 = 0 (Darboux) case.  The
// division is symbolic: with A0 = 0 the px^3 coefficient of F1 vanishes
// identically, so Q = sum_{i=1..3} b_i(x,y) px^(3-i) py^(i-1).
struct QuadraticIntegral {
  BasisElement::MonoFn f1_mono;

  double eval(const PhasePoint& P) const {
    const std::array<double, 4> b = f1_mono(P.x, P.y, 0);
    return b[1] * P.px * P.px + b[2] * P.px * P.py + b[3] * P.py * P.py;
  }
};

inline std::optional<QuadraticIntegral> darboux_factorization(
    const CubicIntegralBasis& basis) {
  if (basis.profile->params.A0 != 0.0) return std::nullopt;
  return QuadraticIntegral{basis.f1().mono};
}

// Smallest-to-largest singular value ratio of the 4 x N evaluation
// matrix; rank 4 at ratio > rel_tol certifies linear independence.
inline double basis_sv_ratio(const CubicIntegralBasis& basis,
                             const std::vector<PhasePoint>& pts) {
  Matrix m(4, pts.size());
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < pts.size(); ++j)
      m(i, j) = basis.elements[i].eval(pts[j]);
  const std::vector<double> sv = singular_values(m);
  return sv.front() > 0.0 ? sv.back() / sv.front() : 0.0;
}

// Least-squares projection of an arbitrary cubic-in-momenta integral
// onto the basis; returns the four fitted coefficients.
inline std::array<double, 4> decompose_cubic(
    const CubicIntegralBasis& basis,
    const std::function<double(const PhasePoint&)>& f,
    const std::vector<PhasePoint>& pts) {
  Matrix A(pts.size(), 4);
  std::vector<double> b(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = 0; j < 4; ++j)
      A(i, j) = basis.elements[j].eval(pts[i]);
    b[i] = f(pts[i]);
  }
  const std::vector<double> x = solve_least_squares(A, b);
  return {x[0], x[1], x[2], x[3]};
}

}  // namespace supint
