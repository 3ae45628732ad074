#pragma once

#include "sxr/demand.hpp"
#include "sxr/field.hpp"
#include "sxr/ode.hpp"
#include "sxr/types.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace sxr {

/// A candidate improvement rule h for the flow dx/dt = h(x): the consumer
/// must see strict improvement (g.h > 0) away from the stopping point and
/// must not leave the budget set through its face (p.h <= 0 there).
/// Directions built from a Field borrow it; the field must outlive the
/// direction.
struct ImprovementDirection {
  std::string label;
  std::function<Vec(const Vec&)> h;
};

/// The budget-projected rule
///   h(x) = g(x) - (p.x/m) ((p.g(x)) / |p|^2) p.
/// Conserves p.x on the face, consumes slack inside.
ImprovementDirection make_h2(const Field& field, const BudgetProblem& problem);

/// The two-good cautionary rule h(x) = x - ((x1+x2)^2 / 4) (1,1) for
/// p = (1,1), m = 2. Valid as an improvement direction for g(x) = x, yet
/// every budget-face start other than (1,1) exits the orthant in finite
/// time. Other configurations are rejected.
ImprovementDirection make_pathological(const BudgetProblem& problem);

/// Expression-defined rule: one expression per component over the
/// symbols x1..xn, g1..gn, p1..pn, m.
ImprovementDirection make_custom(const Field& field, const BudgetProblem& problem,
                                 const std::vector<std::string>& components);

struct DirectionWitness {
  Vec x;
  double g_dot_h;  // condition 1 value
  double p_dot_h;  // condition 2 value (face samples only)
  bool on_face;
};

struct DirectionValidation {
  bool valid = true;
  long samples_tested = 0;
  std::vector<DirectionWitness> witnesses;
};

/// Samples the budget set's interior and face and checks both defining
/// conditions with tolerance 1e-9. Samples inside a small ball around
/// x_star are exempt from condition 1 (h vanishes there by design).
DirectionValidation validate_direction(const Field& field, const ImprovementDirection& dir,
                                       const BudgetProblem& problem, long n_samples,
                                       std::uint64_t seed, const Vec& x_star);

enum class SimOutcome { converged, left_domain, max_time, stalled };

const char* to_string(SimOutcome o);

struct SimulationResult {
  SimOutcome outcome = SimOutcome::max_time;
  std::vector<double> times;   // accepted steps, all chunks merged
  std::vector<Vec> points;
  std::vector<double> monitor_times;
  std::vector<double> monitor_values;  // recovered utility along the path
  bool lyapunov_monotone = true;       // nondecreasing within 1e-7
  Vec final_point;
};

/// Integrate dx/dt = h(x) with the orthant guard, sampling the recovered
/// utility every monitor_dt. Convergence = distance to x_star below 1e-5
/// sustained for three consecutive monitors; stall = |h| below 1e-10 away
/// from x_star for three monitors. An optional compact box turns escape
/// from the box into left_domain.
SimulationResult simulate(const Field& field, const ImprovementDirection& dir, const Bundle& x0,
                          const BudgetProblem& problem, const OdeSettings& settings,
                          const Bundle& ref_v, const Vec& x_star, double monitor_dt = 0.5,
                          const Box* compact_box = nullptr);

struct StabilityReport {
  Vec x_star;
  struct Local {
    double radius = 0.0;
    int n_converged = 0;
    int n_failed = 0;
    std::vector<std::pair<Vec, SimOutcome>> failures;
  } local;
  struct Compact {
    int n_converged = 0;
    int n_escaped = 0;
    int n_stalled = 0;
    int n_timeout = 0;
  } compact;
  double lyapunov_monotone_fraction = 1.0;
  int trials = 0;
};

/// Local starts are drawn from the budget set intersected with a ball
/// around the demand point; compact starts cover the budget set under a
/// box guard slightly larger than the budget simplex.
StabilityReport stability_experiment(const Field& field, const ImprovementDirection& dir,
                                     const BudgetProblem& problem, double local_radius,
                                     int n_local, int n_compact, std::uint64_t seed,
                                     const OdeSettings& settings, const Bundle& ref_v);

}  // namespace sxr
