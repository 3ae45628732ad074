#include "sxr/dynamics.hpp"

#include "sxr/expr.hpp"
#include "sxr/preference.hpp"
#include "sxr/rng.hpp"

#include <cmath>

namespace sxr {

const char* to_string(SimOutcome o) {
  switch (o) {
    case SimOutcome::converged: return "converged";
    case SimOutcome::left_domain: return "left_domain";
    case SimOutcome::max_time: return "max_time";
    case SimOutcome::stalled: return "stalled";
  }
  return "?";
}

ImprovementDirection make_h2(const Field& field, const BudgetProblem& problem) {
  if (!problem.strictly_positive_prices())
    throw DomainError("budget-projected direction needs strictly positive prices");
  Vec p = problem.p;
  double m = problem.m;
  double p2 = p.squaredNorm();
  return ImprovementDirection{
      "budget_projected", [&field, p, m, p2](const Vec& x) {
        Vec g = field.value(x);
        return Vec(g - (p.dot(x) / m) * (p.dot(g) / p2) * p);
      }};
}

ImprovementDirection make_pathological(const BudgetProblem& problem) {
  if (problem.p.size() != 2 || std::abs(problem.p[0] - 1.0) > 1e-12 ||
      std::abs(problem.p[1] - 1.0) > 1e-12 || std::abs(problem.m - 2.0) > 1e-12)
    throw DomainError("the cautionary direction is defined for p = (1,1), m = 2 with two goods");
  return ImprovementDirection{"pathological", [](const Vec& x) {
                                double s = x[0] + x[1];
                                Vec h(2);
                                h[0] = x[0] - s * s / 4.0;
                                h[1] = x[1] - s * s / 4.0;
                                return h;
                              }};
}

ImprovementDirection make_custom(const Field& field, const BudgetProblem& problem,
                                 const std::vector<std::string>& components) {
  const Eigen::Index n = field.dimension();
  if (static_cast<Eigen::Index>(components.size()) != n)
    throw DomainError("custom direction needs one expression per good");
  SymbolTable table = SymbolTable::direction_vars(static_cast<int>(n));
  std::vector<ExprPtr> exprs;
  for (const auto& text : components) exprs.push_back(parse_expr(text, table));
  Vec p = problem.p;
  double m = problem.m;
  return ImprovementDirection{
      "custom", [&field, exprs, p, m, n](const Vec& x) {
        Vec vars(3 * n + 1);
        vars.head(n) = x;
        vars.segment(n, n) = field.value(x);
        vars.segment(2 * n, n) = p;
        vars[3 * n] = m;
        Vec h(n);
        for (Eigen::Index i = 0; i < n; ++i) h[i] = exprs[static_cast<std::size_t>(i)]->eval(vars);
        return h;
      }};
}

DirectionValidation validate_direction(const Field& field, const ImprovementDirection& dir,
                                       const BudgetProblem& problem, long n_samples,
                                       std::uint64_t seed, const Vec& x_star) {
  DirectionValidation report;
  Rng rng(seed);
  const Eigen::Index n = field.dimension();
  const double exempt_radius = 1e-4 * std::max(1.0, x_star.norm());

  for (long s = 0; s < n_samples; ++s) {
    bool on_face = (s % 2) == 1;  // alternate interior and face samples
    Vec w = rng.simplex_weights(n, 0.01);
    double beta = on_face ? 1.0 : 0.05 + 0.9 * rng.uniform();
    Vec x(n);
    for (Eigen::Index i = 0; i < n; ++i) x[i] = beta * problem.m * w[i] / problem.p[i];

    Vec h = dir.h(x);
    Vec g = field.value(x);
    double gh = g.dot(h);
    double ph = problem.p.dot(h);
    ++report.samples_tested;

    bool near_star = (x - x_star).norm() <= exempt_radius;
    bool bad_improvement = !near_star && gh <= 1e-9;
    bool bad_face = on_face && ph > 1e-9;
    if (bad_improvement || bad_face) {
      report.witnesses.push_back({x, gh, ph, on_face});
      report.valid = false;
    }
  }
  return report;
}

SimulationResult simulate(const Field& field, const ImprovementDirection& dir, const Bundle& x0,
                          const BudgetProblem& problem, const OdeSettings& settings,
                          const Bundle& ref_v, const Vec& x_star, double monitor_dt,
                          const Box* compact_box) {
  if (!(monitor_dt > 0.0)) throw DomainError("monitor interval must be positive");
  if (problem.p.dot(x0.vec()) > problem.m * (1.0 + 1e-9))
    throw DomainError("starting point is outside the budget set");

  SimulationResult res;
  const double margin = settings.domain_margin;
  auto guard = [margin, compact_box](const Vec& x) {
    if (!strictly_positive(x, margin)) return false;
    if (compact_box)
      for (Eigen::Index i = 0; i < x.size(); ++i)
        if (x[i] < compact_box->lo[i] || x[i] > compact_box->hi[i]) return false;
    return true;
  };

  auto monitor_value = [&](const Vec& x) {
    return utility(field, Bundle(x), ref_v, settings);
  };

  Vec x = x0.vec();
  double t = 0.0;
  res.times.push_back(0.0);
  res.points.push_back(x);
  res.monitor_times.push_back(0.0);
  res.monitor_values.push_back(monitor_value(x));

  int near_count = 0, stall_count = 0;
  res.outcome = SimOutcome::max_time;

  OdeSettings chunk = settings;
  chunk.max_time = monitor_dt;

  while (t < settings.max_time - 1e-12) {
    IntegrateOptions opts;
    opts.guard = guard;
    Trajectory piece = integrate(dir.h, x, chunk, opts);

    for (std::size_t k = 1; k < piece.times.size(); ++k) {
      res.times.push_back(t + piece.times[k]);
      res.points.push_back(piece.points[k]);
    }
    if (piece.termination != Termination::left_domain && piece.last_time() <= 0.0)
      throw SolverError("improvement flow made no progress at t = " + std::to_string(t));
    t += piece.last_time();
    x = piece.last_point();

    if (piece.termination == Termination::left_domain) {
      res.outcome = SimOutcome::left_domain;
      break;
    }

    res.monitor_times.push_back(t);
    res.monitor_values.push_back(monitor_value(x));

    near_count = (x - x_star).norm() <= 1e-5 ? near_count + 1 : 0;
    if (near_count >= 3) {
      res.outcome = SimOutcome::converged;
      break;
    }
    stall_count =
        (dir.h(x).norm() <= 1e-10 && (x - x_star).norm() > 1e-5) ? stall_count + 1 : 0;
    if (stall_count >= 3) {
      res.outcome = SimOutcome::stalled;
      break;
    }
  }

  res.final_point = x;
  for (std::size_t k = 1; k < res.monitor_values.size(); ++k)
    if (res.monitor_values[k] < res.monitor_values[k - 1] - 1e-7) {
      res.lyapunov_monotone = false;
      break;
    }
  return res;
}

StabilityReport stability_experiment(const Field& field, const ImprovementDirection& dir,
                                     const BudgetProblem& problem, double local_radius,
                                     int n_local, int n_compact, std::uint64_t seed,
                                     const OdeSettings& settings, const Bundle& ref_v) {
  DemandResult demand = solve_demand(field, problem, 16, seed);
  const Vec x_star = demand.x_star;
  const Eigen::Index n = field.dimension();

  StabilityReport report;
  report.x_star = x_star;
  report.local.radius = local_radius;

  const Rng root(seed);
  int monotone = 0;

  // Local: ball around the demand point, clipped to the budget set.
  // Trials draw from per-index substreams, so results do not depend on
  // evaluation order.
  for (int trial = 0; trial < n_local; ++trial) {
    Rng rng = root.fork(static_cast<std::uint64_t>(trial));
    Vec x0;
    for (;;) {
      Vec d = rng.direction(n);
      double r = local_radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(n));
      x0 = x_star + r * d;
      if (strictly_positive(x0, settings.domain_margin * 10.0) &&
          problem.p.dot(x0) <= problem.m)
        break;
    }
    SimulationResult sim =
        simulate(field, dir, Bundle(x0), problem, settings, ref_v, x_star);
    if (sim.lyapunov_monotone) ++monotone;
    if (sim.outcome == SimOutcome::converged)
      ++report.local.n_converged;
    else {
      ++report.local.n_failed;
      report.local.failures.emplace_back(x0, sim.outcome);
    }
    ++report.trials;
  }

  // Compact: spread over the budget set, with a box guard a little
  // larger than the budget simplex.
  Vec box_hi(n);
  for (Eigen::Index i = 0; i < n; ++i) box_hi[i] = 1.05 * problem.m / problem.p[i] + 0.05;
  Box compact_box(Vec::Constant(n, 1e-7), box_hi);

  for (int trial = 0; trial < n_compact; ++trial) {
    Rng rng = root.fork(static_cast<std::uint64_t>(n_local + trial));
    Vec w = rng.simplex_weights(n, 0.01);
    double beta = 0.1 + 0.9 * rng.uniform();
    Vec x0(n);
    for (Eigen::Index i = 0; i < n; ++i) x0[i] = beta * problem.m * w[i] / problem.p[i];
    SimulationResult sim =
        simulate(field, dir, Bundle(x0), problem, settings, ref_v, x_star, 0.5, &compact_box);
    if (sim.lyapunov_monotone) ++monotone;
    switch (sim.outcome) {
      case SimOutcome::converged: ++report.compact.n_converged; break;
      case SimOutcome::left_domain: ++report.compact.n_escaped; break;
      case SimOutcome::stalled: ++report.compact.n_stalled; break;
      case SimOutcome::max_time: ++report.compact.n_timeout; break;
    }
    ++report.trials;
  }

  report.lyapunov_monotone_fraction =
      report.trials == 0 ? 1.0 : static_cast<double>(monotone) / report.trials;
  return report;
}

}  // namespace sxr
