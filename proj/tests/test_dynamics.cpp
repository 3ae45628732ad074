#include "sxr/dynamics.hpp"
#include "sxr/preference.hpp"

#include <doctest.h>

#include <cmath>

using namespace sxr;

namespace {
Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}
}  // namespace

TEST_CASE("budget-projected direction by hand") {
  Field cobb = Field::cobb_douglas(v2(0.5, 0.5));
  BudgetProblem pr(v2(1, 1), 2.0);
  ImprovementDirection h2 = make_h2(cobb, pr);

  Vec h = h2.h(v2(0.5, 1.5));
  CHECK(h[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(h[1] == doctest::Approx(-1.0 / 3.0).epsilon(1e-12));
  CHECK(cobb.value(v2(0.5, 1.5)).dot(h) == doctest::Approx(2.0 / 9.0).epsilon(1e-12));
  CHECK(pr.p.dot(h) == doctest::Approx(0.0).epsilon(1e-14));

  // Stationary at the stopping point.
  CHECK(h2.h(v2(1, 1)).norm() <= 1e-14);

  // Interior slack is consumed: p.h = (p.g)(1 - p.x/m) > 0.
  Vec xi = v2(0.4, 0.8);
  Vec g = cobb.value(xi);
  double expected = pr.p.dot(g) * (1.0 - pr.p.dot(xi) / pr.m);
  CHECK(pr.p.dot(h2.h(xi)) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(expected > 0.0);
}

TEST_CASE("the cautionary direction and its guardrails") {
  BudgetProblem pr(v2(1, 1), 2.0);
  ImprovementDirection h = make_pathological(pr);
  CHECK(h.h(v2(1, 1)).norm() == 0.0);
  Vec at = h.h(v2(0.5, 1.5));
  CHECK(at[0] == doctest::Approx(-0.5));
  CHECK(at[1] == doctest::Approx(0.5));

  // Valid improvement data on the budget line: g.h >= 0, zero only at
  // the stopping point.
  Field id = Field::identity(2);
  for (double s : {0.2, 0.7, 1.0, 1.3, 1.8}) {
    Vec x = v2(s, 2.0 - s);
    double gh = id.value(x).dot(h.h(x));
    double expected = x.squaredNorm() - (x[0] + x[1]) * (x[0] + x[1]) / 2.0;
    CHECK(gh == doctest::Approx(expected).epsilon(1e-12));
    if (std::abs(s - 1.0) > 1e-12)
      CHECK(gh > 0.0);
    else
      CHECK(gh == doctest::Approx(0.0));
    CHECK(pr.p.dot(h.h(x)) == doctest::Approx(0.0).epsilon(1e-12));
  }

  CHECK_THROWS_AS(make_pathological(BudgetProblem(v2(2, 1), 2.0)), DomainError);
  CHECK_THROWS_AS(make_pathological(BudgetProblem(v2(1, 1), 3.0)), DomainError);
}

TEST_CASE("expression-defined directions see field, prices, income") {
  Field cobb = Field::cobb_douglas(v2(0.5, 0.5));
  BudgetProblem pr(v2(1, 1), 2.0);
  // Rebuild the budget-projected rule from its formula.
  std::vector<std::string> comps = {
      "g1 - ((p1*x1 + p2*x2)/m) * ((p1*g1 + p2*g2)/(p1^2 + p2^2)) * p1",
      "g2 - ((p1*x1 + p2*x2)/m) * ((p1*g1 + p2*g2)/(p1^2 + p2^2)) * p2"};
  ImprovementDirection custom = make_custom(cobb, pr, comps);
  ImprovementDirection reference = make_h2(cobb, pr);
  for (double s : {0.3, 0.9, 1.4}) {
    Vec x = v2(s, 2.0 - s);
    CHECK((custom.h(x) - reference.h(x)).norm() <= 1e-12);
  }
}

TEST_CASE("direction validation") {
  Field cobb = Field::cobb_douglas(v2(0.5, 0.5));
  BudgetProblem pr(v2(1, 1), 2.0);
  Vec x_star = v2(1, 1);

  DirectionValidation ok = validate_direction(cobb, make_h2(cobb, pr), pr, 400, 42, x_star);
  CHECK(ok.valid);
  CHECK(ok.samples_tested == 400);

  ImprovementDirection zero{"zero", [](const Vec& x) { return Vec(Vec::Zero(x.size())); }};
  CHECK_FALSE(validate_direction(cobb, zero, pr, 100, 42, x_star).valid);

  ImprovementDirection against{"anti", [&cobb](const Vec& x) { return Vec(-cobb.value(x)); }};
  DirectionValidation bad = validate_direction(cobb, against, pr, 100, 42, x_star);
  CHECK_FALSE(bad.valid);
  CHECK(!bad.witnesses.empty());
}

TEST_CASE("improvement flow converges on the consistent field") {
  Field cobb = Field::cobb_douglas(v2(0.5, 0.5));
  BudgetProblem pr(v2(1, 1), 2.0);
  ImprovementDirection h2 = make_h2(cobb, pr);
  OdeSettings settings;
  settings.max_time = 400.0;

  SimulationResult sim = simulate(cobb, h2, Bundle(v2(0.5, 1.5)), pr, settings,
                                  Bundle(v2(1, 1)), v2(1, 1));
  CHECK(sim.outcome == SimOutcome::converged);
  CHECK((sim.final_point - v2(1, 1)).norm() <= 1e-4);
  CHECK(sim.lyapunov_monotone);

  // Starting at the stopping point converges trivially.
  SimulationResult at_star =
      simulate(cobb, h2, Bundle(v2(1, 1)), pr, settings, Bundle(v2(1, 1)), v2(1, 1));
  CHECK(at_star.outcome == SimOutcome::converged);
}

TEST_CASE("face starts stay on the budget face") {
  Field cobb = Field::cobb_douglas(v2(0.5, 0.5));
  BudgetProblem pr(v2(1, 1), 2.0);
  ImprovementDirection h2 = make_h2(cobb, pr);
  OdeSettings settings;
  settings.max_time = 400.0;
  for (double s : {0.4, 1.3, 1.7}) {
    SimulationResult sim = simulate(cobb, h2, Bundle(v2(s, 2.0 - s)), pr, settings,
                                    Bundle(v2(1, 1)), v2(1, 1));
    CHECK(sim.outcome == SimOutcome::converged);
    for (const auto& x : sim.points)
      CHECK(std::abs(pr.p.dot(x) - pr.m) <= 1e-6 * pr.m);
  }
}

TEST_CASE("the cautionary flow exits the orthant in finite time") {
  Field id = Field::identity(2);
  BudgetProblem pr(v2(1, 1), 2.0);
  ImprovementDirection h = make_pathological(pr);
  OdeSettings settings;
  settings.max_time = 50.0;

  SimulationResult sim =
      simulate(id, h, Bundle(v2(0.5, 1.5)), pr, settings, Bundle(v2(1, 1)), v2(1, 1));
  CHECK(sim.outcome == SimOutcome::left_domain);
  // On the budget face the flow is x' = x - (1,1); the first coordinate
  // 1 - 0.5 e^t hits zero at t = ln 2.
  CHECK(sim.times.back() == doctest::Approx(std::log(2.0)).epsilon(1e-3));
}

TEST_CASE("classification is stable under tolerance halving") {
  Field cobb = Field::cobb_douglas(v2(0.5, 0.5));
  Field id = Field::identity(2);
  BudgetProblem pr(v2(1, 1), 2.0);
  OdeSettings tight;
  tight.max_time = 400.0;
  tight.rtol = 0.5e-9;
  tight.atol = 0.5e-11;
  OdeSettings base;
  base.max_time = 400.0;

  SimulationResult a = simulate(cobb, make_h2(cobb, pr), Bundle(v2(0.5, 1.5)), pr, base,
                                Bundle(v2(1, 1)), v2(1, 1));
  SimulationResult b = simulate(cobb, make_h2(cobb, pr), Bundle(v2(0.5, 1.5)), pr, tight,
                                Bundle(v2(1, 1)), v2(1, 1));
  CHECK(a.outcome == b.outcome);

  SimulationResult c = simulate(id, make_pathological(pr), Bundle(v2(0.5, 1.5)), pr, base,
                                Bundle(v2(1, 1)), v2(1, 1));
  SimulationResult d = simulate(id, make_pathological(pr), Bundle(v2(0.5, 1.5)), pr, tight,
                                Bundle(v2(1, 1)), v2(1, 1));
  CHECK(c.outcome == d.outcome);
  CHECK(c.outcome == SimOutcome::left_domain);
}

TEST_CASE("stability experiment tabulates the two regimes") {
  BudgetProblem pr(v2(1, 1), 2.0);
  OdeSettings settings;
  settings.max_time = 400.0;

  Field cobb = Field::cobb_douglas(v2(0.5, 0.5));
  StabilityReport good = stability_experiment(cobb, make_h2(cobb, pr), pr, 0.25, 20, 20, 42,
                                              settings, Bundle(v2(1, 1)));
  CHECK(good.local.n_converged == 20);
  CHECK(good.local.n_failed == 0);
  CHECK(good.compact.n_converged == 20);
  CHECK(good.lyapunov_monotone_fraction == doctest::Approx(1.0));

  Field id = Field::identity(2);
  StabilityReport bad = stability_experiment(id, make_h2(id, pr), pr, 0.05, 20, 10, 42,
                                             settings, Bundle(v2(1, 1)));
  CHECK(bad.local.n_failed >= 1);
  CHECK(!bad.local.failures.empty());

  StabilityReport empty = stability_experiment(cobb, make_h2(cobb, pr), pr, 0.25, 0, 5, 42,
                                               settings, Bundle(v2(1, 1)));
  CHECK(empty.local.n_converged + empty.local.n_failed == 0);
}
