// Acceptance gate: seven criteria, one PASS/FAIL line each, pinned
// tolerances.  Exit code is the number of failed criteria.
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "supint/bracket.hpp"
#include "supint/curvature.hpp"
#include "supint/geodesic.hpp"
#include "supint/sphere.hpp"

using namespace supint;

namespace {

double now_s() {
  using clock = std::chrono::steady_clock;
  static const clock::time_point t0 = clock::now();
  return std::chrono::duration<double>(clock::now() - t0).count();
}

struct Criterion {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back(what);
    }
  }
};

void report(int n, const std::string& name, const Criterion& c) {
  std::printf("criterion %d (%s): %s\n", n, name.c_str(),
              c.pass ? "PASS" : "FAIL");
  for (const std::string& s : c.notes) std::printf("    - %s\n", s.c_str());
}

// ---------------------------------------------------------------- 1 --

struct ClosedForm {
  PrincipalParams p;
  double lo, hi, R;
  double (*h)(double);
  double (*hx)(double);
};

Criterion criterion1() {
  Criterion c;
  const std::vector<ClosedForm> cases = {
      {{PrincipalCase::Elliptic, 1, 1, 0, 1, 0, 2}, -1, 1, 1,
       [](double x) { return std::sinh(x); },
       [](double x) { return std::cosh(x); }},
      {{PrincipalCase::Elliptic, 1, 1, 0, 2, 1, 0}, 0.25, 1.6, -1,
       [](double x) { return std::cosh(x); },
       [](double x) { return std::sinh(x); }},
      {{PrincipalCase::Hyperbolic, 1, 1, 0, 1, 0, 2}, -1, 1, -1,
       [](double x) { return std::sin(x); },
       [](double x) { return std::cos(x); }},
      {{PrincipalCase::Parabolic, 0, 1, 4, 1, 2, 0}, 0.25, 1.6, -4,
       [](double x) { return x * x; },
       [](double x) { return 2 * x; }},
      {{PrincipalCase::Elliptic, 1, 1, 0, 1, 1, 1}, -1, 1, 0,
       [](double x) { return std::exp(x); },
       [](double x) { return std::exp(x); }},
      {{PrincipalCase::Parabolic, 0, 1, 1, 1, -1, 2}, -1, 1, 0,
       [](double x) { return x; },
       [](double) { return 1.0; }}};
  for (std::size_t k = 0; k < cases.size(); ++k) {
    const ClosedForm& f = cases[k];
    const double t0 = now_s();
    try {
      const double x0 = 0.5 * (f.lo + f.hi);
      const HProfile prof =
          solve_profile(f.p, x0, f.h(x0), RootSelector::NearestTo(f.hx(x0)),
                        f.lo, f.hi, 801);
      double sup_h = 0, sup_R = 0;
      for (std::size_t i = 0; i < prof.size(); ++i) {
        sup_h = std::max(sup_h, std::abs(prof.h[i] - f.h(prof.grid[i])));
        const double R =
            prof.hxxx[i] * prof.hx[i] - prof.hxx[i] * prof.hxx[i];
        sup_R = std::max(sup_R, std::abs(R - f.R));
      }
      c.require(sup_h <= 1e-8, "family " + std::to_string(k + 1) +
                                   ": profile sup-error " +
                                   std::to_string(sup_h) + " > 1e-8");
      c.require(sup_R <= 1e-8, "family " + std::to_string(k + 1) +
                                   ": curvature sup-error " +
                                   std::to_string(sup_R) + " > 1e-8");
    } catch (const std::exception& e) {
      c.require(false,
                "family " + std::to_string(k + 1) + ": " + e.what());
    }
    c.require(now_s() - t0 < 1.0,
              "family " + std::to_string(k + 1) + " exceeded 1 s");
  }
  return c;
}

// ------------------------------------------------------------ 2, 4, 5 --

struct RandomSet {
  PrincipalParams params;
  HProfile profile;
  bool bracket_pass = false;
};

std::vector<RandomSet> g_sets;

Criterion criterion2() {
  Criterion c;
  const double t0 = now_s();
  std::mt19937_64 rng(11213);
  for (PrincipalCase cse :
       {PrincipalCase::Hyperbolic, PrincipalCase::Elliptic,
        PrincipalCase::Parabolic}) {
    for (int rep = 0; rep < 7; ++rep) {
      RandomSet s;
      try {
        s.profile = test_helpers::random_profile(cse, rng, &s.params);
      } catch (const std::exception& e) {
        c.require(false, std::string("profile draw failed: ") + e.what());
        continue;
      }
      const BracketReport r =
          verify_brackets(s.profile, build_basis(s.profile));
      s.bracket_pass = r.pass;
      c.require(r.max_coeff <= 1e-9,
                std::string(to_string(cse)) + " rep " + std::to_string(rep) +
                    ": coefficient residual " + std::to_string(r.max_coeff));
      c.require(r.max_fd <= 1e-6,
                std::string(to_string(cse)) + " rep " + std::to_string(rep) +
                    ": fd bracket " + std::to_string(r.max_fd));
      g_sets.push_back(std::move(s));
    }
  }
  c.require(g_sets.size() >= 20, "fewer than 20 parameter sets");
  c.require(now_s() - t0 < 30.0, "criterion 2 exceeded 30 s");
  return c;
}

Criterion criterion4() {
  Criterion c;
  std::mt19937_64 rng(24036);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t k = 0; k < g_sets.size(); ++k) {
    const RandomSet& s = g_sets[k];
    const CubicIntegralBasis basis = build_basis(s.profile);
    std::vector<PhasePoint> pts;
    for (int i = 0; i < 40; ++i)
      pts.push_back({0.9 * u(rng), 2.0 * u(rng), u(rng), u(rng)});
    const double ratio = basis_sv_ratio(basis, pts);
    c.require(ratio > 1e-8, "set " + std::to_string(k) +
                                ": sv ratio " + std::to_string(ratio));
    const LadderReport lr = ladder_check(s.profile, basis);
    c.require(lr.max_err <= 1e-8, "set " + std::to_string(k) +
                                      ": ladder error " +
                                      std::to_string(lr.max_err));
  }
  return c;
}

Criterion criterion5() {
  Criterion c;
  std::mt19937_64 rng(31101);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t k = 0; k < g_sets.size(); k += 4) {
    const RandomSet& s = g_sets[k];
    const CubicIntegralBasis basis = build_basis(s.profile);
    int full = 0;
    for (int i = 0; i < 100; ++i) {
      const PhasePoint P{0.9 * u(rng), 2.0 * u(rng), 0.2 + 0.8 * std::abs(u(rng)),
                         0.2 + 0.8 * std::abs(u(rng))};
      if (independence_rank(s.profile, basis, P, 1e-5) == 3) ++full;
    }
    c.require(full >= 90, "set " + std::to_string(k) + ": rank 3 at only " +
                              std::to_string(full) + "/100 points");
  }
  return c;
}

// ------------------------------------------------------------- 3, 7 --

Criterion criterion3(Criterion& c7) {
  Criterion c;
  std::mt19937_64 rng(14741);
  for (PrincipalCase cse :
       {PrincipalCase::Hyperbolic, PrincipalCase::Elliptic,
        PrincipalCase::Parabolic}) {
    for (int rep = 0; rep < 3; ++rep) {
      test_helpers::FlowSetup fs;
      try {
        fs = test_helpers::flow_setup(cse, rng);
      } catch (const std::exception& e) {
        c.require(false, std::string("flow setup failed: ") + e.what());
        continue;
      }
      const CubicIntegralBasis basis = build_basis(fs.profile);
      const GeodesicTrace tr =
          integrate_geodesic(fs.profile, basis, fs.P0, 50.0, 1e-12);
      bool conserved = tr.termination == Termination::Completed;
      double worst = 0;
      for (double d : tr.max_drift) worst = std::max(worst, d);
      conserved = conserved && worst <= 1e-8;
      c.require(conserved, std::string(to_string(cse)) + " rep " +
                               std::to_string(rep) + ": drift " +
                               std::to_string(worst) + ", termination " +
                               to_string(tr.termination));
      // criterion 7: the bracket oracle must agree on the same profile
      const BracketReport br = verify_brackets(fs.profile, basis);
      c7.require(br.pass == conserved,
                 std::string("oracle divergence on ") + to_string(cse) +
                     " rep " + std::to_string(rep) + ": bracket " +
                     (br.pass ? "pass" : "fail") + ", conservation " +
                     (conserved ? "pass" : "fail"));
    }
  }
  // Darboux quadratic on an A0 = 0 profile
  const PrincipalParams dar{PrincipalCase::Parabolic, 0, 0, 0.04, 1, 0.4,
                            1.2};
  const HProfile pd =
      solve_profile(dar, 0, 0, RootSelector::UniquePositive(),
                    -dar.A4 / dar.A3 + 1e-3, 1, 2001);
  const GeodesicTrace td = integrate_geodesic(pd, build_basis(pd),
                                              {0, 0, -0.03, 0.3}, 50.0,
                                              1e-12);
  bool saw_q = false;
  for (std::size_t i = 0; i < td.integral_names.size(); ++i)
    if (td.integral_names[i] == "Q") {
      saw_q = true;
      c.require(td.max_drift[i] <= 1e-8,
                "darboux Q drift " + std::to_string(td.max_drift[i]));
    }
  c.require(saw_q, "darboux Q not tracked on A0 = 0 profile");
  c.require(td.termination == Termination::Completed,
            "darboux flow did not complete");

  // criterion 7 negative control: a corrupted profile must fail both
  HProfile bad = g_sets.empty() ? pd : g_sets.front().profile;
  bad.params.A2 += 0.05;
  const BracketReport bbr = verify_brackets(bad, build_basis(bad));
  c7.require(!bbr.pass, "bracket oracle accepted a corrupted profile");
  return c;
}

// ----------------------------------------------------------------- 6 --

Criterion criterion6() {
  Criterion c;
  const double t0 = now_s();
  for (double h0 : {0.0, 0.3}) {
    const std::string tag = "h0=" + std::to_string(h0).substr(0, 3);
    try {
      SphereParams sp;
      sp.Ae = 1;
      sp.A2 = 0;
      sp.h0 = h0;
      const SphereModel m = solve_sphere_profile(sp, 1e-4, 1e4, 4001);
      const double cubic =
          std::abs(m.c0 * (4 * m.c0 * m.c0 + sp.A2) - sp.Ae);
      c.require(cubic <= 1e-12,
                tag + ": c0 cubic residual " + std::to_string(cubic));
      const double th = 1e-3 * m.profile.eval(std::log(1e-3)).h;
      c.require(std::abs(th + m.c0) <= 0.01 * m.c0,
                tag + ": t*h(1e-3) = " + std::to_string(th) +
                    " vs -c0 = " + std::to_string(-m.c0) +
                    " (measured pole coefficient " + std::to_string(m.p0) +
                    ")");
      const double cf = m.conformal_factor(0, 0);
      const double cf_ref = 1.0 / (m.c0 * m.c0);
      c.require(std::abs(cf - cf_ref) <= 0.01 * cf_ref,
                tag + ": conformal factor at origin " + std::to_string(cf) +
                    " vs 1/c0^2 = " + std::to_string(cf_ref));
      const CurvatureReport rep = sphere_curvature_report(m);
      if (h0 == 0.0)
        c.require(rep.cls == CurvatureClass::Constant,
                  tag + ": classified " + to_string(rep.cls));
      else
        c.require(rep.cls == CurvatureClass::Generic,
                  tag + ": classified " + to_string(rep.cls));
      const ZollReport z = zoll_check(m, 5, 1e-4);
      double worst = 0;
      for (const ZollGeodesic& g : z.geodesics)
        worst = std::max(worst, g.return_distance);
      c.require(z.pass, tag + ": zoll return distance " +
                            std::to_string(worst) + " > 1e-4");
    } catch (const std::exception& e) {
      c.require(false, tag + ": " + e.what());
    }
  }
  c.require(now_s() - t0 < 60.0, "criterion 6 exceeded 60 s");
  return c;
}

}  // namespace

int main() {
  int failed = 0;
  Criterion c7;

  const Criterion c1 = criterion1();
  report(1, "closed-form regression", c1);
  const Criterion c2 = criterion2();
  report(2, "bracket identities", c2);
  const Criterion c3 = criterion3(c7);
  report(3, "conservation", c3);
  const Criterion c4 = criterion4();
  report(4, "dimension 4", c4);
  const Criterion c5 = criterion5();
  report(5, "functional independence", c5);
  const Criterion c6 = criterion6();
  report(6, "sphere extension", c6);
  report(7, "two-oracle consistency", c7);

  const std::array<const Criterion*, 7> all = {&c1, &c2, &c3, &c4,
                                               &c5, &c6, &c7};
  for (const Criterion* c : all)
    if (!c->pass) ++failed;
  std::printf("%d/7 criteria passed\n", 7 - failed);
  return failed;
}
