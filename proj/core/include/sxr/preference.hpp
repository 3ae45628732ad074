#pragma once

#include "sxr/field.hpp"
#include "sxr/ode.hpp"
#include "sxr/plane.hpp"
#include "sxr/types.hpp"

namespace sxr {

/// Result of tracing the indifference path from x to the ray of v:
/// the planar flow dy/dt = (g(y).x) v - (g(y).v) x keeps g(y) orthogonal
/// to the motion, and the crossing of the ray of v defines the ray
/// multiple u = |endpoint| / |v|.
struct IndifferenceResult {
  double t_cross = 0.0;
  Vec endpoint;
  double u_value = 0.0;
  Trajectory trajectory;

  // Diagnostics, all scale-free.
  double w_star_residual = 0.0;         // |w*.endpoint| / (|w*| |endpoint|)
  double proportionality_residual = 0.0;  // || endpoint/|endpoint| - v/|v| ||
  double segment_residual = 0.0;          // distance of u from [|y1|,|y2|]/|v|
};

enum class Relation { strictly_preferred, indifferent, strictly_dispreferred };

const char* to_string(Relation r);

struct PreferenceVerdict {
  Relation relation = Relation::indifferent;
  double u_forward = 1.0;   // ray multiple of y indifferent to x
  double u_backward = 1.0;  // ray multiple of x indifferent to y
  double tolerance_band = 1e-6;
};

/// Trace from x to the ray of v. Proportional pairs short-circuit to the
/// exact answer t = 0, endpoint = x, u = |x|/|v|.
/// Throws SolverError when the ray crossing is not reached (with the
/// crossing functional's progress in the message) and flags a trajectory
/// that left the orthant as a field-range anomaly.
IndifferenceResult indifference_cross(const Field& field, const Bundle& x, const Bundle& v,
                                      const OdeSettings& settings = {});

/// Recovered utility with reference ray ref_v: u(a * ref_v) = a.
double utility(const Field& field, const Bundle& x, const Bundle& ref_v,
               const OdeSettings& settings = {});

/// Compare x against y through the ray multiple u(x, y), with a tolerance
/// band around 1 for the indifferent verdict.
PreferenceVerdict prefers(const Field& field, const Bundle& x, const Bundle& y,
                          const OdeSettings& settings = {}, double band = 1e-6);

/// Composed ray multiple around the triple x -> y -> z -> x, with each leg
/// rescaled so consecutive points are exactly indifferent. Equals 1 for
/// every triple exactly when the induced preference is transitive; the
/// deviation from 1 measures how much the field's indifference surfaces
/// fail to close up.
double holonomy(const Field& field, const Bundle& x, const Bundle& y, const Bundle& z,
                const OdeSettings& settings = {});

struct HolonomyPair {
  double forward = 1.0;  // x -> y -> z -> x
  double reverse = 1.0;  // x -> z -> y -> x
};

HolonomyPair holonomy_both(const Field& field, const Bundle& x, const Bundle& y, const Bundle& z,
                           const OdeSettings& settings = {});

/// Indifference path resampled at `samples` uniform times, for plotting.
/// First point is x, last is the refined ray crossing.
struct IndifferencePolyline {
  std::vector<double> times;
  std::vector<Vec> points;
  double u_value = 0.0;
};

IndifferencePolyline trace_indifference(const Field& field, const Bundle& x, const Bundle& v,
                                        const OdeSettings& settings, int samples);

}  // namespace sxr
