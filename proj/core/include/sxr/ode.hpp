#pragma once

#include "sxr/field.hpp"
#include "sxr/plane.hpp"
#include "sxr/types.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

namespace sxr {

struct OdeSettings {
  double rtol = 1e-9;
  double atol = 1e-11;
  double initial_step = 0.0;  // 0 = choose automatically
  double max_step = 0.0;      // 0 = no cap beyond remaining time
  double max_time = 1e3;
  long max_steps = 1'000'000;
  double domain_margin = 1e-9;  // orthant guard floor used by callers

  void validate() const;
};

enum class Termination { event, max_time, max_steps, left_domain };

const char* to_string(Termination t);

/// Accepted-step history of one integration, with optional dense samples.
struct Trajectory {
  std::vector<double> times;
  std::vector<Vec> points;
  Termination termination = Termination::max_time;
  std::optional<double> event_time;

  // Dense-output samples at the times requested through
  // IntegrateOptions::sample_times (clipped at termination).
  std::vector<double> sample_times;
  std::vector<Vec> samples;

  const Vec& last_point() const { return points.back(); }
  double last_time() const { return times.back(); }

  /// CSV with header "t,x1,...,xn", one row per accepted step.
  void write_csv(std::ostream& out) const;
};

struct IntegrateOptions {
  /// Stop at the first up-crossing of zero (negative to nonnegative),
  /// refined on dense output by bisection.
  std::function<double(const Vec&)> event;
  /// Domain membership; leaving it ends the integration at the last
  /// in-domain point (refined on dense output).
  std::function<bool(const Vec&)> guard;
  /// Sorted times at which to record dense-output samples.
  std::vector<double> sample_times;
};

/// Explicit Dormand-Prince 5(4) pair with PI step control and quartic
/// dense output. The right-hand side may throw FieldRangeError on points
/// it cannot evaluate; such steps are retried with a smaller h before the
/// error propagates. Step underflow raises SolverError.
Trajectory integrate(const std::function<Vec(const Vec&)>& rhs, const Vec& x0,
                     const OdeSettings& settings, const IntegrateOptions& options = {});

/// Fixed-step polyline x_{i+1} = x_i + (T/k) * C * R(P g(x_i)) in the
/// frame's plane; returns the k+1 nodes. Every node must stay in the
/// positive orthant. The proportional case degenerates to k+1 copies of x.
std::vector<Vec> euler_polyline(const Field& field, const PlaneFrame& frame, double T, int k);

}  // namespace sxr
