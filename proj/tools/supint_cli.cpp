// supint: solve, verify, and classify superintegrable surface profiles
// from the command line, with reproducible JSON/CSV artifacts.
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "supint/serialize.hpp"

namespace {

constexpr const char* kVersion = "1.0.0";

// 0 pass, 1 usage/IO error, 2 numerical truncation/singularity,
// 3 verification failure
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitTruncation = 2;
constexpr int kExitVerification = 3;

using supint::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

supint::PrincipalCase parse_case(const std::string& s) {
  if (s == "i" || s == "hyperbolic") return supint::PrincipalCase::Hyperbolic;
  if (s == "ii" || s == "elliptic") return supint::PrincipalCase::Elliptic;
  if (s == "iii" || s == "parabolic") return supint::PrincipalCase::Parabolic;
  throw UsageError("unknown case '" + s + "' (want i, ii, or iii)");
}

std::vector<double> parse_doubles(const std::string& s, char sep) {
  std::vector<double> out;
  std::istringstream is(s);
  std::string tok;
  while (std::getline(is, tok, sep)) {
    std::size_t pos = 0;
    double v = 0;
    try {
      v = std::stod(tok, &pos);
    } catch (const std::exception&) {
      throw UsageError("cannot parse number '" + tok + "' in '" + s + "'");
    }
    if (pos != tok.size())
      throw UsageError("trailing characters in number '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

// --A takes A0..A4 comma-separated
void apply_A(supint::PrincipalParams& p, const std::string& s) {
  const std::vector<double> a = parse_doubles(s, ',');
  if (a.size() != 5) throw UsageError("--A wants 5 values A0,A1,A2,A3,A4");
  p.A0 = a[0];
  p.A1 = a[1];
  p.A2 = a[2];
  p.A3 = a[3];
  p.A4 = a[4];
}

supint::RootSelector parse_root(const std::string& s) {
  if (s == "positive") return supint::RootSelector::UniquePositive();
  if (s.rfind("nearest:", 0) == 0)
    return supint::RootSelector::NearestTo(
        parse_doubles(s.substr(8), ',').at(0));
  if (s.rfind("index:", 0) == 0)
    return supint::RootSelector::Index(
        static_cast<int>(parse_doubles(s.substr(6), ',').at(0)));
  throw UsageError("unknown root selector '" + s +
                   "' (want positive, nearest:V, or index:K)");
}

// ranges use lo:hi or lo:hi:count
std::pair<double, double> parse_range(const std::string& s) {
  const std::vector<double> v = parse_doubles(s, ':');
  if (v.size() != 2 || !(v[0] < v[1]))
    throw UsageError("range wants lo:hi with lo < hi, got '" + s + "'");
  return {v[0], v[1]};
}

std::vector<double> parse_sweep(const std::string& s) {
  const std::vector<double> v = parse_doubles(s, ':');
  if (v.size() == 1) return v;
  if (v.size() == 2) return {v[0], v[1]};
  if (v.size() == 3) {
    const int n = static_cast<int>(v[2]);
    if (n < 2 || v[2] != n) throw UsageError("sweep count must be >= 2");
    std::vector<double> out;
    for (int i = 0; i < n; ++i)
      out.push_back(v[0] + (v[1] - v[0]) * i / static_cast<double>(n - 1));
    return out;
  }
  throw UsageError("sweep wants v, lo:hi, or lo:hi:count, got '" + s + "'");
}

void emit(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << '\n';
  } else {
    supint::write_file(path, text);
  }
}

json wrap(json config, json body) {
  body["version"] = kVersion;
  body["config"] = std::move(config);
  return body;
}

supint::HProfile load_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open profile '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw UsageError("bad profile JSON in '" + path + "': " + e.what());
  }
  try {
    return supint::profile_from_json(j);
  } catch (const std::exception& e) {
    throw UsageError("bad profile data in '" + path + "': " + e.what());
  }
}

struct SolveArgs {
  std::string cse, A, root = "positive", range = "-1:1", out = "-";
  double mu = 0, x0 = 0, h0 = 0;
  bool has_mu = false;
  std::size_t n = 401;
};

int cmd_solve(const SolveArgs& a) {
  supint::PrincipalParams p;
  p.kind = parse_case(a.cse);
  if (p.kind != supint::PrincipalCase::Parabolic && !a.has_mu)
    throw UsageError("mu required for cases i/ii");
  p.mu = a.has_mu ? a.mu : 0.0;
  apply_A(p, a.A);
  p.validate();
  const auto [lo, hi] = parse_range(a.range);

  const supint::HProfile prof = supint::solve_profile(
      p, a.x0, a.h0, parse_root(a.root), lo, hi, a.n);
  const json config = {{"command", "solve"},   {"params", to_json(p)},
                       {"x0", a.x0},           {"h0", a.h0},
                       {"root", a.root},       {"range", {lo, hi}},
                       {"n", a.n}};
  emit(a.out, wrap(config, to_json(prof)).dump(2));
  return (prof.truncated_left || prof.truncated_right) ? kExitTruncation
                                                       : kExitOk;
}

struct VerifyArgs {
  std::string profile, out = "-";
  std::uint64_t seed = 2024;
};

int cmd_verify(const VerifyArgs& a) {
  const supint::HProfile prof = load_profile(a.profile);
  supint::BracketOptions opt;
  opt.seed = a.seed;
  const supint::BracketReport br =
      supint::verify_brackets(prof, supint::build_basis(prof), opt);
  json jc;
  bool curv_ok = true;
  try {
    jc = to_json(supint::classify(prof));
  } catch (const supint::AmbiguousFit& e) {
    jc = {{"error", e.what()}};
    curv_ok = false;
  }
  const json config = {{"command", "verify"},
                       {"profile", a.profile},
                       {"seed", a.seed}};
  emit(a.out, wrap(config, {{"bracket", to_json(br)}, {"curvature", jc}})
                  .dump(2));
  return (br.pass && curv_ok) ? kExitOk : kExitVerification;
}

struct FlowArgs {
  std::string profile, P0, out = "-", csv;
  double T = 50, tol = 1e-12, drift_tol = 1e-8;
};

int cmd_flow(const FlowArgs& a) {
  const supint::HProfile prof = load_profile(a.profile);
  const std::vector<double> v = parse_doubles(a.P0, ',');
  if (v.size() != 4) throw UsageError("--P0 wants x,y,px,py");
  const supint::PhasePoint P0{v[0], v[1], v[2], v[3]};

  const supint::GeodesicTrace tr = supint::integrate_geodesic(
      prof, supint::build_basis(prof), P0, a.T, a.tol);
  const json config = {{"command", "flow"}, {"profile", a.profile},
                       {"P0", v},           {"T", a.T},
                       {"tol", a.tol},      {"drift_tol", a.drift_tol}};
  json body = to_json(tr);
  body["drift_tol"] = a.drift_tol;
  emit(a.out, wrap(config, std::move(body)).dump(2));
  if (!a.csv.empty()) supint::write_file(a.csv, supint::trace_csv(tr));

  if (tr.termination != supint::Termination::Completed)
    return kExitTruncation;
  for (double d : tr.max_drift)
    if (!(d <= a.drift_tol)) return kExitVerification;
  return kExitOk;
}

struct ClassifyArgs {
  std::string profile, out = "-", csv;
};

int cmd_classify(const ClassifyArgs& a) {
  const supint::HProfile prof = load_profile(a.profile);
  const json config = {{"command", "classify"}, {"profile", a.profile}};
  supint::CurvatureReport rep;
  try {
    rep = supint::classify(prof);
  } catch (const supint::AmbiguousFit& e) {
    emit(a.out, wrap(config, {{"error", e.what()}}).dump(2));
    return kExitVerification;
  }
  emit(a.out, wrap(config, to_json(rep)).dump(2));
  if (!a.csv.empty()) supint::write_file(a.csv, supint::curvature_csv(rep));
  return kExitOk;
}

struct SphereArgs {
  std::string out = "-", csv;
  double Ae = 1, A2 = 0, h0 = 0, t_min = 1e-4, t_max = 1e4, zoll_tol = 1e-4;
  std::size_t n = 4001;
  int zoll = 0;
  std::uint64_t seed = 7;
};

int cmd_sphere(const SphereArgs& a) {
  supint::SphereParams sp;
  sp.Ae = a.Ae;
  sp.A2 = a.A2;
  sp.h0 = a.h0;
  const supint::SphereModel m =
      supint::solve_sphere_profile(sp, a.t_min, a.t_max, a.n);
  const supint::CurvatureReport rep = supint::sphere_curvature_report(m);

  const json config = {{"command", "sphere"}, {"Ae", a.Ae},
                       {"A2", a.A2},          {"h0", a.h0},
                       {"t_min", a.t_min},    {"t_max", a.t_max},
                       {"n", a.n},            {"zoll", a.zoll},
                       {"zoll_tol", a.zoll_tol}, {"seed", a.seed}};
  json body = {{"Ae", a.Ae},
               {"A2", a.A2},
               {"h0", a.h0},
               {"c0", m.c0},
               {"p0", m.p0},
               {"c1", m.c1},
               {"curvature_class", to_string(rep.cls)}};
  bool zoll_ok = true;
  if (a.zoll > 0) {
    const supint::ZollReport z =
        supint::zoll_check(m, a.zoll, a.zoll_tol, a.seed);
    json periods = json::array(), dists = json::array();
    for (const supint::ZollGeodesic& g : z.geodesics) {
      periods.push_back(g.period);
      dists.push_back(g.return_distance);
    }
    body["zoll"] = {{"periods", periods},
                    {"return_distances", dists},
                    {"pass", z.pass}};
    zoll_ok = z.pass;
  }
  emit(a.out, wrap(config, std::move(body)).dump(2));
  if (!a.csv.empty()) supint::write_file(a.csv, supint::sphere_csv(m));
  return zoll_ok ? kExitOk : kExitVerification;
}

struct ScanArgs {
  std::string cse, mu = "1", A0 = "1", A1 = "0", A2 = "0", A3 = "0",
              A4 = "1";
  std::string root = "positive", range = "-1:1", out = "-";
  double x0 = 0, h0 = 0;
  std::size_t n = 201;
  unsigned threads = 0;
};

int cmd_scan(const ScanArgs& a) {
  const supint::PrincipalCase kind = parse_case(a.cse);
  const std::vector<double> mus = parse_sweep(a.mu), a0s = parse_sweep(a.A0),
                            a1s = parse_sweep(a.A1), a2s = parse_sweep(a.A2),
                            a3s = parse_sweep(a.A3), a4s = parse_sweep(a.A4);
  const auto [lo, hi] = parse_range(a.range);
  const supint::RootSelector sel = parse_root(a.root);

  std::vector<supint::PrincipalParams> cells;
  for (double mu : mus)
    for (double A0 : a0s)
      for (double A1 : a1s)
        for (double A2 : a2s)
          for (double A3 : a3s)
            for (double A4 : a4s)
              cells.push_back({kind, mu, A0, A1, A2, A3, A4});

  std::vector<std::string> rows(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < cells.size();
         i = next.fetch_add(1)) {
      const supint::PrincipalParams& p = cells[i];
      std::ostringstream os;
      os.precision(17);
      os << supint::to_string(p.kind) << "," << p.mu << "," << p.A0 << ","
         << p.A1 << "," << p.A2 << "," << p.A3 << "," << p.A4 << ",";
      try {
        p.validate();
        const supint::HProfile prof =
            supint::solve_profile(p, a.x0, a.h0, sel, lo, hi, a.n);
        if (prof.truncated_left || prof.truncated_right) {
          os << "truncated,,,,"
             << (prof.truncated_left ? prof.truncation_reason_left
                                     : prof.truncation_reason_right);
        } else {
          try {
            const supint::CurvatureReport r = supint::classify(prof);
            os << to_string(r.cls) << "," << r.R_mean << "," << r.R_spread
               << ","
               << (r.cls == supint::CurvatureClass::Constant
                       ? std::to_string(r.fit.type)
                       : "")
               << ",";
          } catch (const supint::AmbiguousFit& e) {
            os << "ambiguous,,,," << e.what();
          }
        }
      } catch (const std::exception& e) {
        os << "error,,,," << e.what();
      }
      rows[i] = os.str();
    }
  };
  const unsigned nt = a.threads
                          ? a.threads
                          : std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  for (unsigned t = 0; t + 1 < nt; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  std::ostringstream os;
  os << "case,mu,A0,A1,A2,A3,A4,classification,R_mean,R_spread,type,error\n";
  for (const std::string& r : rows) os << r << "\n";
  emit(a.out, os.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"superintegrable surface profiles: solve, verify, classify"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  SolveArgs so;
  CLI::App* solve = app.add_subcommand("solve", "solve a profile");
  solve->add_option("--case", so.cse, "equation case: i, ii, or iii")
      ->required();
  solve->add_option("--mu", so.mu, "frequency parameter (cases i/ii)");
  solve->add_option("--A", so.A, "coefficients A0,A1,A2,A3,A4")->required();
  solve->add_option("--x0", so.x0, "anchor point");
  solve->add_option("--h0", so.h0, "h at the anchor");
  solve->add_option("--root", so.root,
                    "branch: positive, nearest:V, or index:K");
  solve->add_option("--range", so.range, "solve range lo:hi");
  solve->add_option("--n", so.n, "grid size");
  solve->add_option("--out", so.out, "output path or - for stdout");

  VerifyArgs ve;
  CLI::App* verify =
      app.add_subcommand("verify", "bracket + curvature verification");
  verify->add_option("profile", ve.profile, "profile JSON path")->required();
  verify->add_option("--seed", ve.seed, "seed for the fd-bracket sample");
  verify->add_option("--out", ve.out, "output path or - for stdout");

  FlowArgs fl;
  CLI::App* flow = app.add_subcommand("flow", "integrate the geodesic flow");
  flow->add_option("--profile", fl.profile, "profile JSON path")->required();
  flow->add_option("--P0", fl.P0, "initial point x,y,px,py")->required();
  flow->add_option("--T", fl.T, "integration time");
  flow->add_option("--tol", fl.tol, "integrator tolerance");
  flow->add_option("--drift-tol", fl.drift_tol, "pass bound on drifts");
  flow->add_option("--out", fl.out, "output path or - for stdout");
  flow->add_option("--csv", fl.csv, "trace CSV path");

  ClassifyArgs cl;
  CLI::App* classify = app.add_subcommand("classify", "curvature class");
  classify->add_option("--profile", cl.profile, "profile JSON path")
      ->required();
  classify->add_option("--out", cl.out, "output path or - for stdout");
  classify->add_option("--csv", cl.csv, "curvature CSV path");

  SphereArgs sp;
  CLI::App* sphere = app.add_subcommand("sphere", "global sphere model");
  sphere->add_option("--Ae", sp.Ae, "normalized free-term coefficient");
  sphere->add_option("--A2", sp.A2, "normalized A2");
  sphere->add_option("--h0", sp.h0, "h at t = 1");
  sphere->add_option("--tmin", sp.t_min, "lower t bound");
  sphere->add_option("--tmax", sp.t_max, "upper t bound");
  sphere->add_option("--n", sp.n, "grid size");
  sphere->add_option("--zoll", sp.zoll, "number of closed-geodesic probes");
  sphere->add_option("--zoll-tol", sp.zoll_tol, "return-distance bound");
  sphere->add_option("--seed", sp.seed, "seed for geodesic probes");
  sphere->add_option("--out", sp.out, "output path or - for stdout");
  sphere->add_option("--csv", sp.csv, "profile CSV path");

  ScanArgs sc;
  CLI::App* scan =
      app.add_subcommand("scan", "classify over a parameter grid");
  scan->add_option("--case", sc.cse, "equation case")->required();
  scan->add_option("--mu", sc.mu, "value or sweep lo:hi:count");
  scan->add_option("--A0", sc.A0, "value or sweep");
  scan->add_option("--A1", sc.A1, "value or sweep");
  scan->add_option("--A2", sc.A2, "value or sweep");
  scan->add_option("--A3", sc.A3, "value or sweep");
  scan->add_option("--A4", sc.A4, "value or sweep");
  scan->add_option("--x0", sc.x0, "anchor point");
  scan->add_option("--h0", sc.h0, "h at the anchor");
  scan->add_option("--root", sc.root, "branch selector");
  scan->add_option("--range", sc.range, "solve range lo:hi");
  scan->add_option("--n", sc.n, "grid size");
  scan->add_option("--threads", sc.threads, "worker count (0 = hardware)");
  scan->add_option("--out", sc.out, "CSV path or - for stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? kExitUsage : kExitOk;
  }

  try {
    so.has_mu = solve->count("--mu") > 0;
    if (solve->parsed()) return cmd_solve(so);
    if (verify->parsed()) return cmd_verify(ve);
    if (flow->parsed()) return cmd_flow(fl);
    if (classify->parsed()) return cmd_classify(cl);
    if (sphere->parsed()) return cmd_sphere(sp);
    if (scan->parsed()) return cmd_scan(sc);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const supint::InvalidParams& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const supint::DegenerateParams& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const supint::SingularBranch& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitTruncation;
  } catch (const supint::StepFailure& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitTruncation;
  } catch (const supint::NoRootError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitTruncation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
