// JSON round-tripping for profiles and reports, CSV writers for the
// plot-ready tables.
#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "supint/bracket.hpp"
#include "supint/curvature.hpp"
#include "supint/geodesic.hpp"
#include "supint/profile.hpp"
#include "supint/sphere.hpp"

namespace supint {

using json = nlohmann::json;

inline json to_json(const PrincipalParams& p) {
  return {{"case", to_string(p.kind)}, {"mu", p.mu},  {"A0", p.A0},
          {"A1", p.A1},                {"A2", p.A2},  {"A3", p.A3},
          {"A4", p.A4}};
}

inline PrincipalParams params_from_json(const json& j) {
  PrincipalParams p;
  const std::string c = j.at("case").get<std::string>();
  if (c == "hyperbolic")
    p.kind = PrincipalCase::Hyperbolic;
  else if (c == "elliptic")
    p.kind = PrincipalCase::Elliptic;
  else if (c == "parabolic")
    p.kind = PrincipalCase::Parabolic;
  else
    throw InvalidParams("unknown case tag: " + c);
  p.mu = j.at("mu").get<double>();
  p.A0 = j.at("A0").get<double>();
  p.A1 = j.at("A1").get<double>();
  p.A2 = j.at("A2").get<double>();
  p.A3 = j.at("A3").get<double>();
  p.A4 = j.at("A4").get<double>();
  return p;
}

inline json to_json(const HProfile& prof) {
  return {{"params", to_json(prof.params)},
          {"grid", prof.grid},
          {"h", prof.h},
          {"hx", prof.hx},
          {"hxx", prof.hxx},
          {"hxxx", prof.hxxx},
          {"truncation_flags",
           {{"left", prof.truncated_left},
            {"right", prof.truncated_right},
            {"reason_left", prof.truncation_reason_left},
            {"reason_right", prof.truncation_reason_right}}},
          {"root_branch",
           {{"x0", prof.root_branch.x0},
            {"h0", prof.root_branch.h0},
            {"hx0", prof.root_branch.hx0},
            {"index", prof.root_branch.index},
            {"n_roots", prof.root_branch.n_roots},
            {"selector", prof.root_branch.selector}}},
          {"options",
           {{"tol_alg", prof.options.tol_alg},
            {"eps_D", prof.options.eps_D},
            {"rtol", prof.options.rtol},
            {"atol", prof.options.atol}}}};
}

inline HProfile profile_from_json(const json& j) {
  HProfile prof;
  prof.params = params_from_json(j.at("params"));
  prof.grid = j.at("grid").get<std::vector<double>>();
  prof.h = j.at("h").get<std::vector<double>>();
  prof.hx = j.at("hx").get<std::vector<double>>();
  prof.hxx = j.at("hxx").get<std::vector<double>>();
  prof.hxxx = j.at("hxxx").get<std::vector<double>>();
  const json& tf = j.at("truncation_flags");
  prof.truncated_left = tf.at("left").get<bool>();
  prof.truncated_right = tf.at("right").get<bool>();
  prof.truncation_reason_left = tf.at("reason_left").get<std::string>();
  prof.truncation_reason_right = tf.at("reason_right").get<std::string>();
  const json& rb = j.at("root_branch");
  prof.root_branch.x0 = rb.at("x0").get<double>();
  prof.root_branch.h0 = rb.at("h0").get<double>();
  prof.root_branch.hx0 = rb.at("hx0").get<double>();
  prof.root_branch.index = rb.at("index").get<int>();
  prof.root_branch.n_roots = rb.at("n_roots").get<int>();
  prof.root_branch.selector = rb.at("selector").get<std::string>();
  const json& op = j.at("options");
  prof.options.tol_alg = op.at("tol_alg").get<double>();
  prof.options.eps_D = op.at("eps_D").get<double>();
  prof.options.rtol = op.at("rtol").get<double>();
  prof.options.atol = op.at("atol").get<double>();
  if (prof.grid.size() != prof.h.size() ||
      prof.grid.size() != prof.hx.size() ||
      prof.grid.size() != prof.hxx.size() ||
      prof.grid.size() != prof.hxxx.size() || prof.grid.size() < 2)
    throw InvalidParams("inconsistent profile arrays");
  return prof;
}

inline json to_json(const BracketReport& r) {
  json nodes = json::array();
  for (std::size_t i = 0; i < r.nodes.size(); ++i)
    nodes.push_back({{"x", r.nodes[i]},
                     {"c", std::vector<double>(r.coeff[i].begin(),
                                               r.coeff[i].end())}});
  json ladder = json::array();
  for (const auto& [name, err] : r.ladder.relations)
    ladder.push_back({{"relation", name}, {"max_err", err}});
  return {{"coefficient_residuals", nodes},
          {"max_coeff", r.max_coeff},
          {"fd_samples", r.fd_samples},
          {"max_fd", r.max_fd},
          {"ladder", ladder},
          {"ladder_max_err", r.ladder.max_err},
          {"pass_coeff", r.pass_coeff},
          {"pass_fd", r.pass_fd},
          {"pass", r.pass}};
}

inline json to_json(const CurvatureReport& r) {
  json j = {{"R_min", r.R_min},
            {"R_max", r.R_max},
            {"R_mean", r.R_mean},
            {"R_spread", r.R_spread},
            {"classification", to_string(r.cls)}};
  if (r.cls == CurvatureClass::Constant) {
    j["type"] = r.fit.type;
    j["R"] = r.fit.R;
    j["fit_params"] = {{"a", r.fit.a},
                       {"b", r.fit.b},
                       {"c", r.fit.c},
                       {"mu", r.fit.mu},
                       {"residual", r.fit.residual}};
  }
  return j;
}

inline json to_json(const GeodesicTrace& t) {
  json drifts = json::object();
  for (std::size_t i = 0; i < t.integral_names.size(); ++i)
    drifts[t.integral_names[i]] = t.max_drift[i];
  return {{"n_samples", t.t.size()},
          {"t_end", t.t.empty() ? 0.0 : t.t.back()},
          {"termination", to_string(t.termination)},
          {"max_drift", drifts}};
}

inline json to_json(const ZollReport& r) {
  json geos = json::array();
  for (const ZollGeodesic& g : r.geodesics)
    geos.push_back({{"x0", g.P0.x},
                    {"px0", g.P0.px},
                    {"py0", g.P0.py},
                    {"period", g.period},
                    {"return_distance", g.return_distance},
                    {"crossings", g.crossings}});
  return {{"geodesics", geos}, {"tol", r.tol}, {"pass", r.pass}};
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline std::string trace_csv(const GeodesicTrace& t) {
  std::ostringstream os;
  os.precision(17);
  os << "t,x,y,px,py";
  for (const std::string& n : t.integral_names) os << "," << n;
  for (const std::string& n : t.integral_names) os << ",drift_" << n;
  os << "\n";
  for (std::size_t i = 0; i < t.t.size(); ++i) {
    const PhasePoint& P = t.samples[i];
    os << t.t[i] << "," << P.x << "," << P.y << "," << P.px << "," << P.py;
    for (std::size_t k = 0; k < t.integral_names.size(); ++k)
      os << "," << t.values[k][i];
    for (std::size_t k = 0; k < t.integral_names.size(); ++k)
      os << "," << t.drift[k][i];
    os << "\n";
  }
  return os.str();
}

inline std::string coeff_csv(const HProfile& prof, const CubicIntegralBasis&,
                             int n = 201) {
  std::ostringstream os;
  os.precision(17);
  os << "x,a0,a1,a2,a3\n";
  for (int i = 0; i < n; ++i) {
    const double x = prof.x_min() + (prof.x_max() - prof.x_min()) * i /
                                        static_cast<double>(n - 1);
    const Coeffs a = coeffs(prof, x);
    os << x << "," << a.a0 << "," << a.a1 << "," << a.a2 << "," << a.a3
       << "\n";
  }
  return os.str();
}

inline std::string curvature_csv(const CurvatureReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << "x,R\n";
  for (std::size_t i = 0; i < r.x.size(); ++i)
    os << r.x[i] << "," << r.R[i] << "\n";
  return os.str();
}

inline std::string sphere_csv(const SphereModel& m) {
  std::ostringstream os;
  os.precision(17);
  os << "t,h,t_ht,conformal_factor\n";
  for (std::size_t i = 0; i < m.profile.size(); ++i) {
    const double t = std::exp(m.profile.grid[i]);
    const double u = t * m.profile.hx[i];
    os << t << "," << m.profile.h[i] << "," << m.profile.hx[i] << ","
       << 1.0 / (u * u) << "\n";
  }
  return os.str();
}

}  // namespace supint
