#include "sxr/cheat.hpp"
#include "sxr/preference.hpp"

#include <doctest.h>

using namespace sxr;

TEST_CASE("the cycling field yields a complete cheating tour") {
  Field n3 = Field::nonintegrable3();
  CheatOutcome outcome = demonstrate_cheat(n3, Box::cube(3, 0.5, 2.0), 42);
  REQUIRE(outcome.report.has_value());
  const CheatReport& rep = *outcome.report;

  CHECK(rep.shrink_factor < 1.0 - 1e-6);
  CHECK(rep.curve.min_directional > 0.0);
  CHECK(rep.curve.closure_gap <= 1e-6 * rep.curve.close_to.norm());

  // Chain re-verified by direct evaluation.
  CHECK(rep.leg_values[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(rep.leg_values[1] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(rep.leg_values[2] == doctest::Approx(rep.triple.gain).epsilon(1e-6));

  // Narrative legs chain head to tail and end on their rays.
  REQUIRE(rep.narrative.size() == 4);
  for (std::size_t i = 0; i + 1 < rep.narrative.size(); ++i)
    CHECK(rep.narrative[i].to.isApprox(rep.narrative[i + 1].from, 1e-9));
  CHECK(rep.narrative.back().to.isApprox(rep.narrative.front().from, 1e-9));
  for (const auto& leg : rep.curve.legs) CHECK(leg.ray_residual <= 1e-6);

  // The tour's final ray value sits strictly below its start.
  const Vec& start = rep.narrative.front().from;
  const Vec& last_ode_point = rep.curve.close_from;
  CHECK(last_ode_point.norm() / start.norm() == doctest::Approx(rep.shrink_factor).epsilon(1e-12));
  CHECK(strictly_less(last_ode_point, start));
}

TEST_CASE("an integrable field yields absence") {
  Field cobb = Field::cobb_douglas(Vec::Constant(3, 0.5));
  CheatOutcome outcome = demonstrate_cheat(cobb, Box::cube(3, 0.5, 2.0), 42, OdeSettings{}, 200);
  CHECK_FALSE(outcome.report.has_value());
  CHECK(!outcome.note.empty());
}

TEST_CASE("two goods are rejected up front") {
  Field id = Field::identity(2);
  CHECK_THROWS_AS(demonstrate_cheat(id, Box::cube(2, 0.5, 2.0), 42), DomainError);
}
