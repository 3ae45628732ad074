#include "sxr/axioms.hpp"
#include "sxr/cheat.hpp"
#include "sxr/demand.hpp"
#include "sxr/dynamics.hpp"
#include "sxr/io.hpp"
#include "sxr/preference.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sxr;

namespace {

Vec parse_vec(const std::string& text) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      vals.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw DomainError("cannot parse '" + item + "' as a number in '" + text + "'");
    }
  }
  if (vals.empty()) throw DomainError("empty vector argument");
  return Eigen::Map<const Vec>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

struct GlobalOptions {
  std::string field_path;
  std::string out_dir = "out";
  std::uint64_t seed = 42;
  double rtol = 1e-9;
  double atol = 1e-11;
  std::string region_text = "0.5,2";

  Field load_field() const {
    if (field_path.empty()) throw DomainError("--field is required for this command");
    return Field::from_json_file(field_path);
  }
  OdeSettings ode() const {
    OdeSettings s;
    s.rtol = rtol;
    s.atol = atol;
    return s;
  }
  Box region(Eigen::Index n) const {
    Vec bounds = parse_vec(region_text);
    if (bounds.size() != 2) throw DomainError("--region expects 'lo,hi'");
    return Box::cube(n, bounds[0], bounds[1]);
  }
  fs::path out(const std::string& name) const { return fs::path(out_dir) / name; }
};

int run_field_eval(const GlobalOptions& g, const std::string& point_text, bool with_jacobian) {
  Field field = g.load_field();
  Vec x = parse_vec(point_text);
  Vec value = field.value(x);
  json out{{"point", io::to_json(x)}, {"value", io::to_json(value)}};
  if (with_jacobian) {
    JacobianEstimate jac = field.jacobian(x);
    json rows = json::array();
    for (Eigen::Index i = 0; i < jac.matrix.rows(); ++i) {
      json row = json::array();
      for (Eigen::Index j = 0; j < jac.matrix.cols(); ++j) row.push_back(jac.matrix(i, j));
      rows.push_back(row);
    }
    out["jacobian"] = rows;
    out["jacobian_mode"] = jac.finite_difference ? "fd" : "analytic";
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

int run_axioms(const GlobalOptions& g, long n_samples, long n_points) {
  Field field = g.load_field();
  const Eigen::Index n = field.dimension();
  Box region = g.region(n);

  json report;
  report["field"] = field.name();
  report["region"] = io::to_json(region);
  report["seed"] = g.seed;

  report["weak_weak_axiom"] = io::to_json(check_wwa(field, region, n_samples, g.seed));
  report["weak_axiom"] = io::to_json(check_weak_axiom(field, region, n_samples, g.seed));
  report["ville"] = io::to_json(check_ville(field, region, n_points, g.seed));

  // Pointwise differential screens over the same region.
  Rng rng(g.seed);
  long a1_fail = 0, a2_fail = 0;
  double curl_max = 0.0, curl_sum = 0.0;
  long curl_count = 0;
  json sweep = json::array();
  for (long s = 0; s < n_points; ++s) {
    Bundle x{rng.point_in(region)};
    TangentFormVerdict tf = tangent_definiteness(field, x);
    if (!tf.a1_holds) ++a1_fail;
    if (!tf.a2_holds) ++a2_fail;
    if (!tf.a1_holds && sweep.size() < 8)
      sweep.push_back(json{{"x", io::to_json(x.vec())}, {"max_eigenvalue", tf.max_eigenvalue}});
    for (const auto& r : curl_residuals(field, x)) {
      curl_max = std::max(curl_max, std::abs(r.value));
      curl_sum += std::abs(r.value);
      ++curl_count;
    }
  }
  report["tangent_sweep"] = {{"points", n_points},
                             {"a1_failures", a1_fail},
                             {"a2_failures", a2_fail},
                             {"a1_witnesses", sweep}};
  report["curl_sweep"] = {{"points", n_points},
                          {"triples", curl_count},
                          {"max_abs_residual", curl_max},
                          {"mean_abs_residual", curl_count ? curl_sum / curl_count : 0.0}};

  io::write_json_atomic(g.out("axioms.json"), report);
  std::cout << "weak_weak_axiom: " << report["weak_weak_axiom"]["status"].get<std::string>()
            << "\nweak_axiom: " << report["weak_axiom"]["status"].get<std::string>()
            << "\nville: " << report["ville"]["status"].get<std::string>() << "\n"
            << "report: " << g.out("axioms.json").string() << "\n";
  return 0;
}

int run_utility(const GlobalOptions& g, const std::vector<std::string>& points,
                const std::string& ref_text, const std::vector<std::string>& curves,
                int curve_samples, int grid) {
  Field field = g.load_field();
  const Eigen::Index n = field.dimension();
  OdeSettings settings = g.ode();
  Bundle ref{ref_text.empty() ? Vec(Vec::Ones(n)) : parse_vec(ref_text)};

  json report;
  report["ref"] = io::to_json(ref.vec());
  json values = json::array();
  for (const auto& text : points) {
    Bundle x{parse_vec(text)};
    values.push_back(json{{"x", io::to_json(x.vec())}, {"u", utility(field, x, ref, settings)}});
  }
  report["values"] = values;

  json curve_files = json::array();
  for (std::size_t c = 0; c < curves.size(); ++c) {
    Bundle x{parse_vec(curves[c])};
    IndifferencePolyline poly = trace_indifference(field, x, ref, settings, curve_samples);
    std::string name = "curve_" + std::to_string(c) + ".csv";
    io::write_polyline_csv(g.out(name), poly.times, poly.points);
    curve_files.push_back(json{{"start", io::to_json(x.vec())}, {"u", poly.u_value}, {"file", name}});
  }
  report["curves"] = curve_files;

  if (grid > 0) {
    if (n != 2) throw DomainError("--grid needs a two-good field");
    Box region = g.region(2);
    std::ostringstream os;
    os.precision(17);
    os << "x1,x2,u\n";
    for (int i = 0; i < grid; ++i)
      for (int j = 0; j < grid; ++j) {
        Vec x(2);
        x[0] = region.lo[0] + (region.hi[0] - region.lo[0]) * i / (grid - 1.0);
        x[1] = region.lo[1] + (region.hi[1] - region.lo[1]) * j / (grid - 1.0);
        os << x[0] << "," << x[1] << "," << utility(field, Bundle(x), ref, settings) << "\n";
      }
    io::write_text_atomic(g.out("utility_grid.csv"), os.str());
    report["grid_file"] = "utility_grid.csv";
  }

  io::write_json_atomic(g.out("utility.json"), report);
  std::cout << report.dump(2) << "\n";
  return 0;
}

int run_prefer(const GlobalOptions& g, const std::string& x_text, const std::string& y_text,
               double band) {
  Field field = g.load_field();
  PreferenceVerdict v =
      prefers(field, Bundle{parse_vec(x_text)}, Bundle{parse_vec(y_text)}, g.ode(), band);
  json report = io::to_json(v);
  io::write_json_atomic(g.out("prefer.json"), report);
  std::cout << report.dump(2) << "\n";
  return 0;
}

int run_demand(const GlobalOptions& g, const std::string& budgets_path, const std::string& p_text,
               double m, int starts) {
  Field field = g.load_field();
  std::vector<BudgetProblem> problems;
  if (!budgets_path.empty()) {
    std::ifstream in(budgets_path);
    if (!in) throw DomainError("cannot open budgets file: " + budgets_path);
    json list = json::parse(in, nullptr, /*allow_exceptions=*/false);
    if (list.is_discarded() || !list.is_array())
      throw DomainError("budgets file must hold a JSON array of {p, m}");
    for (const auto& item : list)
      problems.emplace_back(io::vec_from_json(item.at("p")), item.at("m").get<double>());
  }
  if (!p_text.empty()) problems.emplace_back(parse_vec(p_text), m);
  if (problems.empty()) throw DomainError("no budgets given: use --budgets or --p/--m");

  json entries = json::array();
  std::vector<std::pair<BudgetProblem, Vec>> computed;
  for (const auto& pr : problems) {
    DemandResult res = solve_demand(field, pr, starts, g.seed);
    entries.push_back(io::to_json(pr, res));
    computed.emplace_back(pr, res.x_star);
  }
  json report{{"demands", entries}};
  if (computed.size() > 1) report["warp"] = io::to_json(check_warp(computed));
  io::write_json_atomic(g.out("demand.json"), report);
  std::cout << report.dump(2) << "\n";
  return 0;
}

int run_dynamics(const GlobalOptions& g, const std::string& p_text, double m,
                 const std::string& h_kind, const std::vector<std::string>& h_exprs,
                 const std::string& x0_text, double local_radius, int n_local, int n_compact,
                 double max_time) {
  Field field = g.load_field();
  const Eigen::Index n = field.dimension();
  BudgetProblem pr(p_text.empty() ? Vec(Vec::Ones(n)) : parse_vec(p_text), m);
  OdeSettings settings = g.ode();
  settings.max_time = max_time;
  Bundle ref{Vec(Vec::Ones(n))};

  ImprovementDirection dir = [&]() {
    if (h_kind == "h2") return make_h2(field, pr);
    if (h_kind == "pathological") return make_pathological(pr);
    if (h_kind == "expr") return make_custom(field, pr, h_exprs);
    throw DomainError("unknown improvement direction '" + h_kind + "'");
  }();

  DemandResult demand = solve_demand(field, pr, 16, g.seed);
  DirectionValidation validation =
      validate_direction(field, dir, pr, 200, g.seed, demand.x_star);

  json report;
  report["direction"] = dir.label;
  report["x_star"] = io::to_json(demand.x_star);
  report["direction_valid"] = validation.valid;
  report["direction_samples"] = validation.samples_tested;

  if (!x0_text.empty()) {
    SimulationResult sim =
        simulate(field, dir, Bundle{parse_vec(x0_text)}, pr, settings, ref, demand.x_star);
    report["trajectory"] = {{"outcome", to_string(sim.outcome)},
                            {"final", io::to_json(sim.final_point)},
                            {"t_end", sim.times.back()},
                            {"lyapunov_monotone", sim.lyapunov_monotone}};
    std::ostringstream os;
    os.precision(17);
    os << "t";
    for (Eigen::Index i = 0; i < n; ++i) os << ",x" << (i + 1);
    os << "\n";
    for (std::size_t k = 0; k < sim.times.size(); ++k) {
      os << sim.times[k];
      for (Eigen::Index i = 0; i < n; ++i) os << "," << sim.points[k][i];
      os << "\n";
    }
    io::write_text_atomic(g.out("trajectory.csv"), os.str());
    std::ostringstream um;
    um.precision(17);
    um << "t,u\n";
    for (std::size_t k = 0; k < sim.monitor_times.size(); ++k)
      um << sim.monitor_times[k] << "," << sim.monitor_values[k] << "\n";
    io::write_text_atomic(g.out("monitor.csv"), um.str());
  }

  if (n_local > 0 || n_compact > 0) {
    StabilityReport stab = stability_experiment(field, dir, pr, local_radius, n_local, n_compact,
                                                g.seed, settings, ref);
    report["stability"] = io::to_json(stab);
  }

  io::write_json_atomic(g.out("dynamics.json"), report);
  std::cout << report.dump(2) << "\n";
  return 0;
}

int run_cheat(const GlobalOptions& g, int budget, double epsilon) {
  Field field = g.load_field();
  Box region = g.region(field.dimension());
  CheatOutcome outcome = demonstrate_cheat(field, region, g.seed, g.ode(), budget, epsilon);
  json report = io::to_json(outcome);
  io::write_json_atomic(g.out("cheat.json"), report);
  if (outcome.report) {
    io::write_ville_curve_csv(g.out("cheat_curve.csv"), field, outcome.report->curve);
    const auto& legs = outcome.report->curve.legs;
    for (std::size_t i = 0; i < legs.size(); ++i)
      io::write_polyline_csv(g.out("cheat_leg_" + std::to_string(i + 1) + ".csv"), legs[i].times,
                             legs[i].points);
  }
  std::cout << (outcome.report ? "cheating tour constructed" : "no cycle found") << "\n"
            << "report: " << g.out("cheat.json").string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"analysis toolkit for marginal-value fields: recovered utility, axiom checks, "
               "stopping-point demand, improvement dynamics, cheating tours"};
  app.require_subcommand(1);

  GlobalOptions g;
  app.add_option("--field", g.field_path, "field spec JSON file");
  app.add_option("--out", g.out_dir, "output directory");
  app.add_option("--seed", g.seed, "random seed for all sampling");
  app.add_option("--rtol", g.rtol, "integrator relative tolerance");
  app.add_option("--atol", g.atol, "integrator absolute tolerance");
  app.add_option("--region", g.region_text, "sampling box 'lo,hi' applied per coordinate");

  // field eval
  auto* cmd_field = app.add_subcommand("field", "field utilities");
  auto* cmd_eval = cmd_field->add_subcommand("eval", "evaluate the field at a point");
  std::string eval_point;
  bool eval_jac = false;
  cmd_eval->add_option("--point", eval_point, "bundle 'x1,x2,...'")->required();
  cmd_eval->add_flag("--jacobian", eval_jac, "include the derivative matrix");

  // axioms
  auto* cmd_axioms = app.add_subcommand("axioms", "run the axiom screens and write axioms.json");
  long ax_samples = 2000, ax_points = 200;
  cmd_axioms->add_option("--samples", ax_samples, "pair samples for the revealed-preference screens");
  cmd_axioms->add_option("--points", ax_points, "point samples for the differential screens");

  // utility
  auto* cmd_utility = app.add_subcommand("utility", "recovered utility values and curves");
  std::vector<std::string> u_points, u_curves;
  std::string u_ref;
  int u_samples = 100, u_grid = 0;
  cmd_utility->add_option("--point", u_points, "evaluate at bundle (repeatable)");
  cmd_utility->add_option("--ref", u_ref, "reference ray (default all-ones)");
  cmd_utility->add_option("--curve", u_curves, "trace the indifference curve from bundle (repeatable)");
  cmd_utility->add_option("--samples", u_samples, "points per traced curve");
  cmd_utility->add_option("--grid", u_grid, "write an N x N utility grid over the region (two goods)");

  // prefer
  auto* cmd_prefer = app.add_subcommand("prefer", "compare two bundles");
  std::string pref_x, pref_y;
  double pref_band = 1e-6;
  cmd_prefer->add_option("--x", pref_x)->required();
  cmd_prefer->add_option("--y", pref_y)->required();
  cmd_prefer->add_option("--band", pref_band, "indifference tolerance band");

  // demand
  auto* cmd_demand = app.add_subcommand("demand", "solve stopping-point demand");
  std::string d_budgets, d_p;
  double d_m = 1.0;
  int d_starts = 16;
  cmd_demand->add_option("--budgets", d_budgets, "JSON file with [{\"p\": [...], \"m\": ...}]");
  cmd_demand->add_option("--p", d_p, "prices 'p1,p2,...'");
  cmd_demand->add_option("--m", d_m, "income");
  cmd_demand->add_option("--starts", d_starts, "multistart count");

  // dynamics
  auto* cmd_dyn = app.add_subcommand("dynamics", "simulate improvement processes");
  std::string dyn_p, dyn_h = "h2", dyn_x0;
  std::vector<std::string> dyn_hexprs;
  double dyn_m = 2.0, dyn_radius = 0.25, dyn_max_time = 400.0;
  int dyn_local = 0, dyn_compact = 0;
  cmd_dyn->add_option("--p", dyn_p, "prices (default all-ones)");
  cmd_dyn->add_option("--m", dyn_m, "income");
  cmd_dyn->add_option("--rule", dyn_h, "direction: h2 | pathological | expr");
  cmd_dyn->add_option("--rule-expr", dyn_hexprs, "expression per component for --rule expr");
  cmd_dyn->add_option("--x0", dyn_x0, "simulate one trajectory from this start");
  cmd_dyn->add_option("--local-radius", dyn_radius, "radius for local-stability starts");
  cmd_dyn->add_option("--n-local", dyn_local, "local-stability trial count");
  cmd_dyn->add_option("--n-compact", dyn_compact, "compact-stability trial count");
  cmd_dyn->add_option("--max-time", dyn_max_time, "simulation horizon");

  // cheat
  auto* cmd_cheat = app.add_subcommand("cheat", "search for a cycle and build the closed tour");
  int ch_budget = 500;
  double ch_eps = 0.5;
  cmd_cheat->add_option("--budget", ch_budget, "candidate triples to score");
  cmd_cheat->add_option("--epsilon", ch_eps, "initial tilt for the tour legs");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_eval->parsed()) return run_field_eval(g, eval_point, eval_jac);
    if (cmd_axioms->parsed()) return run_axioms(g, ax_samples, ax_points);
    if (cmd_utility->parsed())
      return run_utility(g, u_points, u_ref, u_curves, u_samples, u_grid);
    if (cmd_prefer->parsed()) return run_prefer(g, pref_x, pref_y, pref_band);
    if (cmd_demand->parsed()) return run_demand(g, d_budgets, d_p, d_m, d_starts);
    if (cmd_dyn->parsed())
      return run_dynamics(g, dyn_p, dyn_m, dyn_h, dyn_hexprs, dyn_x0, dyn_radius, dyn_local,
                          dyn_compact, dyn_max_time);
    if (cmd_cheat->parsed()) return run_cheat(g, ch_budget, ch_eps);
    std::cerr << "no subcommand given\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const SolverError& e) {
    std::cerr << "analysis failed: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
