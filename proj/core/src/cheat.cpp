#include "sxr/cheat.hpp"

#include "sxr/preference.hpp"

#include <sstream>

namespace sxr {

CheatOutcome demonstrate_cheat(const Field& field, const Box& region, std::uint64_t seed,
                               const OdeSettings& settings, int budget, double initial_epsilon) {
  if (field.dimension() < 3)
    throw DomainError(
        "cheating tours need at least three goods; with two goods every field in range admits "
        "no such closed curve");

  CheatOutcome outcome;
  outcome.budget = budget;

  auto triple = find_intransitive_triple(field, region, seed, budget, settings);
  if (!triple) {
    outcome.note = "no preference cycle scored above 1e-4 in " + std::to_string(budget) +
                   " candidate triples";
    return outcome;
  }

  CheatReport report;
  report.triple = *triple;
  report.curve = construct_ville_curve(field, *triple, initial_epsilon, settings);
  report.shrink_factor = report.curve.shrink_factor;

  // Re-verify the chain by direct evaluation: the legs were rescaled to
  // exact indifference, the closing leg carries the gain.
  report.leg_values[0] = utility(field, Bundle(triple->x), Bundle(triple->y), settings);
  report.leg_values[1] = utility(field, Bundle(triple->y), Bundle(triple->z), settings);
  report.leg_values[2] = utility(field, Bundle(triple->z), Bundle(triple->x), settings);

  auto describe = [](const char* what, int i) {
    std::ostringstream os;
    os << "leg " << i << ": " << what;
    return os.str();
  };
  const auto& legs = report.curve.legs;
  report.narrative.push_back(
      {describe("tilted indifference run to the ray of z", 1), legs[0].start, legs[0].points.back()});
  report.narrative.push_back(
      {describe("tilted indifference run to the ray of y", 2), legs[1].start, legs[1].points.back()});
  report.narrative.push_back(
      {describe("tilted indifference run to the ray of x", 3), legs[2].start, legs[2].points.back()});
  report.narrative.push_back({"closing climb back to the start along the ray of x",
                              report.curve.close_from, report.curve.close_to});

  outcome.report = std::move(report);
  return outcome;
}

}  // namespace sxr
