#include "sxr/io.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace sxr::io {

json to_json(const Vec& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Vec vec_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw DomainError("expected a nonempty JSON array of numbers");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  return v;
}

json to_json(const Box& region) {
  return json{{"lo", to_json(region.lo)}, {"hi", to_json(region.hi)}};
}

json to_json(const AntonelliReport& rep) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < rep.matrix.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < rep.matrix.cols(); ++j) row.push_back(rep.matrix(i, j));
    rows.push_back(row);
  }
  return json{{"point", to_json(rep.point)},
              {"matrix", rows},
              {"symmetry_residual", rep.symmetry_residual},
              {"sym_part_eigenvalues", to_json(rep.sym_part_eigenvalues)},
              {"classification", to_string(rep.classification)},
              {"pivot", rep.pivot + 1}};
}

json to_json(const TangentFormVerdict& v) {
  return json{{"a1_holds", v.a1_holds},
              {"a2_holds", v.a2_holds},
              {"max_eigenvalue", v.max_eigenvalue},
              {"eigenvalues", to_json(v.eigenvalues)}};
}

json to_json(const AxiomVerdict& v) {
  json witnesses = json::array();
  for (const auto& w : v.pair_witnesses)
    witnesses.push_back(json{{"x", to_json(w.x)},
                             {"y", to_json(w.y)},
                             {"cross_at_x", w.cross_at_x},
                             {"own_at_x", w.own_at_x},
                             {"cross_at_y", w.cross_at_y},
                             {"own_at_y", w.own_at_y}});
  for (const auto& w : v.point_witnesses)
    witnesses.push_back(
        json{{"x", to_json(w.x)}, {"residual", w.residual}, {"tolerance", w.tolerance}});
  json out{{"axiom", to_string(v.axiom)},
           {"status", to_string(v.status)},
           {"samples_tested", v.samples_tested},
           {"seed", v.seed},
           {"witnesses", witnesses}};
  if (v.region) out["region"] = to_json(*v.region);
  return out;
}

json to_json(const PreferenceVerdict& v) {
  return json{{"u_forward", v.u_forward},
              {"u_backward", v.u_backward},
              {"verdict", to_string(v.relation)},
              {"band", v.tolerance_band}};
}

json to_json(const BudgetProblem& pr, const DemandResult& res) {
  json roots = json::array();
  for (const auto& r : res.roots) roots.push_back(to_json(r));
  return json{{"p", to_json(pr.p)},
              {"m", pr.m},
              {"x_star", to_json(res.x_star)},
              {"lambda", res.lambda},
              {"foc_residual", res.foc_residual},
              {"budget_residual", res.budget_residual},
              {"n_roots", res.roots.size()},
              {"roots", roots}};
}

json to_json(const StabilityReport& rep) {
  json failures = json::array();
  for (const auto& [x0, outcome] : rep.local.failures)
    failures.push_back(json{{"x0", to_json(x0)}, {"termination", to_string(outcome)}});
  return json{{"x_star", to_json(rep.x_star)},
              {"local",
               {{"radius", rep.local.radius},
                {"n_converged", rep.local.n_converged},
                {"n_failed", rep.local.n_failed},
                {"failures", failures}}},
              {"compact",
               {{"n_converged", rep.compact.n_converged},
                {"n_escaped", rep.compact.n_escaped},
                {"n_stalled", rep.compact.n_stalled},
                {"n_timeout", rep.compact.n_timeout}}},
              {"lyapunov_monotone_fraction", rep.lyapunov_monotone_fraction},
              {"trials", rep.trials}};
}

json to_json(const VilleCurve& curve) {
  json legs = json::array();
  for (const auto& leg : curve.legs)
    legs.push_back(json{{"start", to_json(leg.start)},
                        {"target_ray", to_json(leg.target)},
                        {"epsilon", leg.epsilon},
                        {"ray_multiple", leg.ray_multiple},
                        {"ray_residual", leg.ray_residual},
                        {"duration", leg.times.back() - leg.times.front()}});
  return json{{"legs", legs},
              {"close_from", to_json(curve.close_from)},
              {"close_to", to_json(curve.close_to)},
              {"total_time", curve.total_time},
              {"closure_gap", curve.closure_gap},
              {"min_directional", curve.min_directional},
              {"epsilon", curve.epsilon},
              {"shrink_factor", curve.shrink_factor}};
}

json to_json(const CheatOutcome& outcome) {
  if (!outcome.report)
    return json{{"found", false}, {"budget", outcome.budget}, {"note", outcome.note}};
  const CheatReport& rep = *outcome.report;
  json narrative = json::array();
  for (const auto& row : rep.narrative)
    narrative.push_back(json{{"description", row.description},
                             {"from", to_json(row.from)},
                             {"to", to_json(row.to)}});
  return json{{"found", true},
              {"budget", outcome.budget},
              {"triple",
               {{"x", to_json(rep.triple.x)},
                {"y", to_json(rep.triple.y)},
                {"z", to_json(rep.triple.z)},
                {"gain", rep.triple.gain},
                {"shrink_factor", rep.triple.shrink_factor},
                {"raw_score", rep.triple.raw_score}}},
              {"leg_values", {rep.leg_values[0], rep.leg_values[1], rep.leg_values[2]}},
              {"shrink_factor", rep.shrink_factor},
              {"curve", to_json(rep.curve)},
              {"narrative", narrative}};
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DomainError("cannot open for writing: " + tmp.string());
    out << text;
  }
  std::filesystem::rename(tmp, path);
}

void write_json_atomic(const std::filesystem::path& path, const json& j) {
  write_text_atomic(path, j.dump(2) + "\n");
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj) {
  std::ostringstream os;
  traj.write_csv(os);
  write_text_atomic(path, os.str());
}

void write_polyline_csv(const std::filesystem::path& path, const std::vector<double>& times,
                        const std::vector<Vec>& points) {
  std::ostringstream os;
  os.precision(17);
  os << "t";
  if (!points.empty())
    for (Eigen::Index i = 0; i < points.front().size(); ++i) os << ",x" << (i + 1);
  os << "\n";
  for (std::size_t k = 0; k < times.size(); ++k) {
    os << times[k];
    for (Eigen::Index i = 0; i < points[k].size(); ++i) os << "," << points[k][i];
    os << "\n";
  }
  write_text_atomic(path, os.str());
}

void write_ville_curve_csv(const std::filesystem::path& path, const Field& field,
                           const VilleCurve& curve) {
  std::ostringstream os;
  os.precision(17);
  const Eigen::Index n = curve.close_from.size();
  os << "t";
  for (Eigen::Index i = 0; i < n; ++i) os << ",x" << (i + 1);
  os << ",gdot\n";
  auto row = [&](double t, const Vec& x, double gdot) {
    os << t;
    for (Eigen::Index i = 0; i < n; ++i) os << "," << x[i];
    os << "," << gdot << "\n";
  };
  for (const auto& leg : curve.legs)
    for (std::size_t k = 0; k < leg.points.size(); ++k) {
      const Vec& w = leg.points[k];
      Vec g = field.value(w);
      Vec dw = (g.dot(leg.start)) * leg.target - (g.dot(leg.target)) * leg.start +
               leg.epsilon * leg.target;
      row(leg.times[k], w, g.dot(dw));
    }
  const double t0 = curve.legs.back().times.back();
  Vec dir = curve.close_to - curve.close_from;
  constexpr int kCloseSamples = 64;
  for (int i = 0; i <= kCloseSamples; ++i) {
    double s = static_cast<double>(i) / kCloseSamples;
    Vec w = curve.close_from + s * dir;
    row(t0 + s, w, field.value(w).dot(dir));
  }
  write_text_atomic(path, os.str());
}

}  // namespace sxr::io
