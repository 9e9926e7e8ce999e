// Real roots of a*x^3 + p*x + q-style cubics with multiplicity tagging.
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

namespace supint {

struct RealRoot {
  double value = 0.0;
  int multiplicity = 1;
};

namespace detail {

inline double cbrt_signed(double x) { return std::cbrt(x); }

// Newton polish on f(x) = a3 x^3 + a2 x^2 + a1 x + a0.
inline double polish_cubic(double a3, double a2, double a1, double a0,
                           double x) {
  for (int it = 0; it < 4; ++it) {
    const double f = ((a3 * x + a2) * x + a1) * x + a0;
    const double df = (3 * a3 * x + 2 * a2) * x + a1;
    if (df == 0.0) break;
    const double step = f / df;
    x -= step;
    if (std::abs(step) <= 1e-16 * (1.0 + std::abs(x))) break;
  }
  return x;
}

}  // namespace detail

// All real roots of a3*x^3 + a2*x^2 + a1*x + a0 = 0, ascending.
// Degenerate (a3 = 0) inputs fall through to the quadratic / linear case;
// an identically-zero polynomial yields an empty list.
inline std::vector<RealRoot> solve_cubic_real(double a3, double a2, double a1,
                                              double a0) {
  std::vector<RealRoot> roots;
  const double scale =
      std::max({std::abs(a3), std::abs(a2), std::abs(a1), std::abs(a0)});
  if (scale == 0.0) return roots;
  const double tiny = 1e-14 * scale;

  if (std::abs(a3) <= tiny) {
    if (std::abs(a2) <= tiny) {
      if (std::abs(a1) <= tiny) return roots;  // constant, no root
      roots.push_back({-a0 / a1, 1});
      return roots;
    }
    const double disc = a1 * a1 - 4 * a2 * a0;
    if (disc < -1e-14 * scale * scale) return roots;
    if (disc <= 1e-14 * scale * scale) {
      roots.push_back({-a1 / (2 * a2), 2});
      return roots;
    }
    const double sq = std::sqrt(disc);
    const double r1 = (-a1 - sq) / (2 * a2);
    const double r2 = (-a1 + sq) / (2 * a2);
    roots.push_back({std::min(r1, r2), 1});
    roots.push_back({std::max(r1, r2), 1});
    return roots;
  }

  // Depressed form t^3 + p t + q with x = t - b/3.
  const double b = a2 / a3, c = a1 / a3, d = a0 / a3;
  const double p = c - b * b / 3.0;
  const double q = d - b * c / 3.0 + 2.0 * b * b * b / 27.0;
  const double shift = -b / 3.0;
  const double disc = -4.0 * p * p * p - 27.0 * q * q;
  const double dscale = std::pow(std::max({std::abs(p), std::abs(q), 1e-300}),
                                 3.0 > std::abs(q) ? 2.0 : 2.0);
  const double dtol = 1e-12 * std::max(p * p * std::abs(p), q * q) + 1e-300;
  (void)dscale;

  if (disc > dtol) {
    // Three distinct real roots: trigonometric method.
    const double m = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
    constexpr double pi = 3.141592653589793238462643383279502884;
    const double theta = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k) {
      const double t = m * std::cos(theta - 2.0 * pi * k / 3.0);
      roots.push_back(
          {detail::polish_cubic(a3, a2, a1, a0, t + shift), 1});
    }
  } else if (disc < -dtol) {
    // One real root: Cardano.
    const double sq = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
    const double u = detail::cbrt_signed(-q / 2.0 + sq);
    const double v = detail::cbrt_signed(-q / 2.0 - sq);
    roots.push_back({detail::polish_cubic(a3, a2, a1, a0, u + v + shift), 1});
  } else {
    // Borderline: repeated roots.
    if (std::abs(p) <= 1e-12 * (1.0 + std::abs(shift))) {
      roots.push_back({shift, 3});
    } else {
      const double t1 = 3.0 * q / p;        // simple root
      const double t2 = -3.0 * q / (2 * p); // double root
      RealRoot rs{detail::polish_cubic(a3, a2, a1, a0, t1 + shift), 1};
      RealRoot rd{t2 + shift, 2};
      if (rs.value < rd.value) {
        roots.push_back(rs);
        roots.push_back(rd);
      } else {
        roots.push_back(rd);
        roots.push_back(rs);
      }
    }
  }
  std::sort(roots.begin(), roots.end(),
            [](const RealRoot& a, const RealRoot& b) {
              return a.value < b.value;
            });
  return roots;
}

}  // namespace supint
