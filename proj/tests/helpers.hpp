// Shared test utilities: randomized valid parameter sets and profiles.
#pragma once

#include <random>
#include <stdexcept>

#include "supint/integrals.hpp"
#include "supint/profile.hpp"

namespace test_helpers {

using namespace supint;

inline PrincipalParams random_params(PrincipalCase c, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  PrincipalParams p;
  p.kind = c;
  // keep Lambda positive on the solve range so the top branch stays
  // clear of h_x = 0 and of root collisions
  p.mu = (c == PrincipalCase::Hyperbolic) ? 0.6 + 0.3 * (u(rng) + 1.0)
                                          : 0.6 + 0.6 * (u(rng) + 1.0);
  p.A0 = 0.5 + 0.5 * (u(rng) + 1.0);
  p.A1 = 0.8 * u(rng);
  p.A2 = u(rng);
  p.A3 = 0.3 * u(rng);
  p.A4 = 1.0 + 0.5 * (u(rng) + 1.0);
  if (c == PrincipalCase::Parabolic) p.mu = 0.0;
  return p;
}

// Draws random parameter sets until one yields an untruncated profile
// on [-1, 1] along the largest-root branch.
inline HProfile random_profile(PrincipalCase c, std::mt19937_64& rng,
                               PrincipalParams* params_out = nullptr,
                               std::size_t n = 801) {
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  for (int attempt = 0; attempt < 50; ++attempt) {
    const PrincipalParams p = random_params(c, rng);
    const double h0 = u(rng);
    try {
      const auto roots = hx_candidates(p, 0.0, h0);
      if (roots.empty()) continue;
      HProfile prof =
          solve_profile(p, 0.0, h0,
                        RootSelector::NearestTo(roots.back().value + 1.0),
                        -1.0, 1.0, n);
      if (prof.truncated_left || prof.truncated_right) continue;
      if (params_out) *params_out = p;
      return prof;
    } catch (const std::exception&) {
      continue;
    }
  }
  throw std::runtime_error("no valid random profile found");
}

// Profile plus an initial phase point whose geodesic stays inside the
// chart for long integration times.  Case ii uses momentum trapping at
// an interior minimum of hx; cases i and iii use ranges ending where
// Lambda vanishes, so hx -> 0 and the boundary is at infinite distance.
struct FlowSetup {
  PrincipalParams params;
  HProfile profile;
  PhasePoint P0;
};

inline FlowSetup flow_setup(PrincipalCase c, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int attempt = 0; attempt < 60; ++attempt) {
    PrincipalParams p;
    p.kind = c;
    try {
      switch (c) {
        case PrincipalCase::Hyperbolic: {
          p.mu = 0.9 + 0.2 * u(rng);
          p.A0 = 1.0 + 0.3 * u(rng);
          p.A1 = 0.08 * u(rng);
          p.A2 = 0.55 + 0.25 * u(rng);
          p.A3 = 0.3 * u(rng);
          p.A4 = 1.25 + 0.25 * u(rng);
          const double phi = std::atan2(p.A3 / p.mu, p.A4);
          const double half = 0.5 * 3.141592653589793 - 1e-3;
          const double lo = (phi - half) / p.mu, hi = (phi + half) / p.mu;
          const double xc = phi / p.mu;
          HProfile prof = solve_profile(p, xc, 0.0,
                                        RootSelector::UniquePositive(), lo,
                                        hi, 2001);
          if (prof.truncated_left || prof.truncated_right) break;
          const PhasePoint P0{xc, 0.0, 0.02 * (u(rng) > 0 ? 1 : -1), 0.05};
          return {p, std::move(prof), P0};
        }
        case PrincipalCase::Elliptic: {
          p.mu = 1.0 + 0.3 * u(rng);
          p.A0 = 1.0 + 0.3 * u(rng);
          p.A1 = 0.3 * u(rng);
          p.A2 = 0.5 * u(rng);
          p.A3 = 0.3 * u(rng);
          p.A4 = 1.25 + 0.25 * u(rng);
          HProfile prof = solve_profile(p, 0.0, 0.1 * u(rng),
                                        RootSelector::UniquePositive(),
                                        -1.2, 1.2, 1201);
          if (prof.truncated_left || prof.truncated_right) break;
          // start at the interior minimum of hx; small px traps the orbit
          double xc = std::atanh(std::max(
                          -0.8, std::min(0.8, -p.A3 / (p.mu * p.A4)))) /
                      p.mu;
          xc = std::max(-0.5, std::min(0.5, xc));
          const PhasePoint P0{xc, 0.0, 0.05 * (u(rng) > 0 ? 1 : -1), 1.0};
          return {p, std::move(prof), P0};
        }
        case PrincipalCase::Parabolic: {
          p.mu = 0.0;
          p.A0 = 1.0 + 0.3 * u(rng);
          p.A1 = 0.04 * u(rng);
          p.A2 = 1.0 + 0.2 * u(rng);
          p.A3 = 0.35 + 0.15 * u(rng);
          p.A4 = 1.25 + 0.25 * u(rng);
          const double lo = -p.A4 / p.A3 + 1e-3;
          HProfile prof = solve_profile(p, 0.0, 0.1 * u(rng),
                                        RootSelector::UniquePositive(), lo,
                                        1.0, 2001);
          if (prof.truncated_left || prof.truncated_right) break;
          // drift toward the infinitely distant left end, never reaching it
          const PhasePoint P0{0.0, 0.0, -0.03, 0.3};
          return {p, std::move(prof), P0};
        }
      }
    } catch (const std::exception&) {
    }
  }
  throw std::runtime_error("no valid flow setup found");
}

}  // namespace test_helpers
