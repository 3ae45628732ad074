#include "sxr/preference.hpp"

#include <cmath>
#include <sstream>

namespace sxr {

const char* to_string(Relation r) {
  switch (r) {
    case Relation::strictly_preferred: return "strictly_preferred";
    case Relation::indifferent: return "indifferent";
    case Relation::strictly_dispreferred: return "strictly_dispreferred";
  }
  return "?";
}

IndifferenceResult indifference_cross(const Field& field, const Bundle& x, const Bundle& v,
                                      const OdeSettings& settings) {
  PlaneFrame frame(x, v);
  IndifferenceResult res;

  if (frame.proportional()) {
    res.t_cross = 0.0;
    res.endpoint = x.vec();
    res.u_value = x.vec().norm() / v.vec().norm();
    res.trajectory.times.push_back(0.0);
    res.trajectory.points.push_back(x.vec());
    res.trajectory.termination = Termination::event;
    res.trajectory.event_time = 0.0;
    return res;
  }

  const Vec xv = x.vec();
  const Vec vv = v.vec();
  const Vec w_star = frame.w_star();

  auto rhs = [&field, &xv, &vv](const Vec& y) {
    Vec g = field.value(y);
    return Vec((g.dot(xv)) * vv - (g.dot(vv)) * xv);
  };
  IntegrateOptions opts;
  opts.event = [&w_star](const Vec& y) { return w_star.dot(y); };
  const double margin = settings.domain_margin;
  opts.guard = [margin](const Vec& y) { return strictly_positive(y, margin); };

  Trajectory traj = integrate(rhs, xv, settings, opts);

  if (traj.termination == Termination::left_domain)
    throw SolverError(
        "indifference path left the positive orthant; the field violates the range assumption "
        "along this plane");
  if (traj.termination != Termination::event) {
    std::ostringstream msg;
    msg << "ray crossing not reached (" << to_string(traj.termination) << " at t=" << traj.last_time()
        << "); crossing functional moved from " << w_star.dot(xv) << " to "
        << w_star.dot(traj.last_point());
    throw SolverError(msg.str());
  }

  res.t_cross = *traj.event_time;
  res.endpoint = traj.last_point();
  res.u_value = res.endpoint.norm() / vv.norm();

  res.w_star_residual =
      std::abs(w_star.dot(res.endpoint)) / (w_star.norm() * res.endpoint.norm());
  res.proportionality_residual =
      (res.endpoint / res.endpoint.norm() - vv / vv.norm()).norm();
  double lo = std::min(frame.y1().norm(), frame.y2().norm()) / vv.norm();
  double hi = std::max(frame.y1().norm(), frame.y2().norm()) / vv.norm();
  res.segment_residual = std::max({0.0, lo - res.u_value, res.u_value - hi});
  res.trajectory = std::move(traj);
  return res;
}

double utility(const Field& field, const Bundle& x, const Bundle& ref_v,
               const OdeSettings& settings) {
  return indifference_cross(field, x, ref_v, settings).u_value;
}

PreferenceVerdict prefers(const Field& field, const Bundle& x, const Bundle& y,
                          const OdeSettings& settings, double band) {
  PreferenceVerdict v;
  v.tolerance_band = band;
  v.u_forward = utility(field, x, y, settings);
  v.u_backward = utility(field, y, x, settings);
  if (std::abs(v.u_forward - 1.0) <= band)
    v.relation = Relation::indifferent;
  else if (v.u_forward > 1.0)
    v.relation = Relation::strictly_preferred;
  else
    v.relation = Relation::strictly_dispreferred;
  return v;
}

double holonomy(const Field& field, const Bundle& x, const Bundle& y, const Bundle& z,
                const OdeSettings& settings) {
  double u1 = utility(field, x, y, settings);
  Bundle y_eq(Vec(u1 * y.vec()));
  double u2 = utility(field, y_eq, z, settings);
  Bundle z_eq(Vec(u2 * z.vec()));
  return utility(field, z_eq, x, settings);
}

HolonomyPair holonomy_both(const Field& field, const Bundle& x, const Bundle& y, const Bundle& z,
                           const OdeSettings& settings) {
  return HolonomyPair{holonomy(field, x, y, z, settings), holonomy(field, x, z, y, settings)};
}

IndifferencePolyline trace_indifference(const Field& field, const Bundle& x, const Bundle& v,
                                        const OdeSettings& settings, int samples) {
  if (samples < 2) throw DomainError("trace needs at least 2 samples");
  PlaneFrame frame(x, v);
  if (frame.proportional())
    throw DomainError("trace requires x not proportional to v");

  IndifferenceResult cross = indifference_cross(field, x, v, settings);

  const Vec xv = x.vec();
  const Vec vv = v.vec();
  auto rhs = [&field, &xv, &vv](const Vec& y) {
    Vec g = field.value(y);
    return Vec((g.dot(xv)) * vv - (g.dot(vv)) * xv);
  };
  IntegrateOptions opts;
  const Vec w_star = frame.w_star();
  opts.event = [&w_star](const Vec& y) { return w_star.dot(y); };
  const double margin = settings.domain_margin;
  opts.guard = [margin](const Vec& y) { return strictly_positive(y, margin); };
  // Sample just short of the crossing; the refined endpoint is appended.
  const double t_hi = cross.t_cross * (1.0 - 1e-9);
  for (int i = 0; i + 1 < samples; ++i)
    opts.sample_times.push_back(samples == 2 ? 0.0
                                             : t_hi * static_cast<double>(i) / (samples - 2));

  Trajectory traj = integrate(rhs, xv, settings, opts);

  IndifferencePolyline poly;
  poly.times = traj.sample_times;
  poly.points = traj.samples;
  poly.times.push_back(cross.t_cross);
  poly.points.push_back(cross.endpoint);
  poly.u_value = cross.u_value;
  return poly;
}

}  // namespace sxr
