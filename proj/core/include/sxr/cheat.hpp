#pragma once

#include "sxr/axioms.hpp"
#include "sxr/field.hpp"
#include "sxr/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sxr {

/// End-to-end demonstration that a cycling field can be milked: a cycle
/// witness, the closed improving curve built from it, and a per-leg
/// narrative of the tour. The tour ends at shrink_factor times its
/// starting bundle with the consumer approving every single step.
struct CheatReport {
  IntransitiveTriple triple;
  double leg_values[3];  // re-verified ray multiples along the chain
  double shrink_factor;  // realized |x(T-)| / |x(0)| on the ray of x
  VilleCurve curve;

  struct NarrativeRow {
    std::string description;
    Vec from, to;
  };
  std::vector<NarrativeRow> narrative;
};

struct CheatOutcome {
  std::optional<CheatReport> report;
  int budget = 0;
  std::string note;  // why the report is absent, when it is
};

/// Searches for a preference cycle and, if one is found, constructs and
/// validates the closed improving curve. Absence within the budget is a
/// result, not an error. Requires n >= 3: with two goods no such curve
/// exists for any field in range.
CheatOutcome demonstrate_cheat(const Field& field, const Box& region, std::uint64_t seed,
                               const OdeSettings& settings = {}, int budget = 500,
                               double initial_epsilon = 0.5);

}  // namespace sxr
