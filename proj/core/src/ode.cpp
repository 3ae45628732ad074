#include "sxr/ode.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace sxr {

void OdeSettings::validate() const {
  if (!(rtol >= 1e-13)) throw DomainError("rtol must be >= 1e-13");
  if (!(atol > 0.0) || !(max_time > 0.0) || max_steps <= 0 || !(domain_margin > 0.0))
    throw DomainError("ode settings must be positive");
  if (initial_step < 0.0 || max_step < 0.0) throw DomainError("ode steps must be nonnegative");
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::event: return "event";
    case Termination::max_time: return "max_time";
    case Termination::max_steps: return "max_steps";
    case Termination::left_domain: return "left_domain";
  }
  return "?";
}

void Trajectory::write_csv(std::ostream& out) const {
  out << "t";
  if (!points.empty())
    for (Eigen::Index i = 0; i < points.front().size(); ++i) out << ",x" << (i + 1);
  out << "\n";
  out.precision(17);
  for (std::size_t k = 0; k < times.size(); ++k) {
    out << times[k];
    for (Eigen::Index i = 0; i < points[k].size(); ++i) out << "," << points[k][i];
    out << "\n";
  }
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// Dense-output weights.
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

struct DenseStep {
  double t0 = 0.0, h = 0.0;
  Vec r1, r2, r3, r4, r5;

  Vec eval(double t) const {
    double theta = (t - t0) / h;
    double omt = 1.0 - theta;
    return r1 + theta * (r2 + omt * (r3 + theta * (r4 + omt * r5)));
  }
};

double error_norm(const Vec& err, const Vec& y0, const Vec& y1, double atol, double rtol) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    double sc = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    double q = err[i] / sc;
    acc += q * q;
  }
  return std::sqrt(acc / static_cast<double>(err.size()));
}

}  // namespace

Trajectory integrate(const std::function<Vec(const Vec&)>& rhs, const Vec& x0,
                     const OdeSettings& settings, const IntegrateOptions& options) {
  settings.validate();
  if (options.guard && !options.guard(x0))
    throw DomainError("initial point violates the domain guard");

  Trajectory traj;
  traj.times.push_back(0.0);
  traj.points.push_back(x0);

  std::size_t sample_idx = 0;
  auto emit_samples_upto = [&](double t_hi, const DenseStep& dense) {
    while (sample_idx < options.sample_times.size() &&
           options.sample_times[sample_idx] <= t_hi + 1e-300) {
      double ts = options.sample_times[sample_idx];
      traj.sample_times.push_back(ts);
      traj.samples.push_back(dense.eval(ts));
      ++sample_idx;
    }
  };
  // Samples exactly at t = 0.
  while (sample_idx < options.sample_times.size() && options.sample_times[sample_idx] <= 0.0) {
    traj.sample_times.push_back(options.sample_times[sample_idx]);
    traj.samples.push_back(x0);
    ++sample_idx;
  }

  double event_prev = 0.0;
  if (options.event) {
    event_prev = options.event(x0);
    if (event_prev >= 0.0) {  // already past the crossing
      traj.termination = Termination::event;
      traj.event_time = 0.0;
      return traj;
    }
  }

  const double t_end = settings.max_time;
  const double hmax = settings.max_step > 0.0 ? settings.max_step : t_end;

  Vec y = x0;
  Vec k1 = rhs(y);
  double t = 0.0;

  // Initial step: Hairer's two-probe heuristic unless the caller fixed it.
  double h;
  if (settings.initial_step > 0.0) {
    h = std::min(settings.initial_step, hmax);
  } else {
    double d0 = error_norm(y, y, y, settings.atol, settings.rtol);
    double d1n = error_norm(k1, y, y, settings.atol, settings.rtol);
    double h0 = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * (d0 / d1n);
    h0 = std::min(h0, hmax);
    double h1 = h0;
    try {
      Vec y_probe = y + h0 * k1;
      Vec f_probe = rhs(y_probe);
      double d2 = error_norm((f_probe - k1).eval(), y, y, settings.atol, settings.rtol) / h0;
      double dm = std::max(d1n, d2);
      h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
    } catch (const std::exception&) {
      // Probe left the evaluable region; start conservatively.
    }
    h = std::min({100.0 * h0, h1, hmax});
  }

  constexpr double kSafety = 0.9, kMinFactor = 0.2, kMaxFactor = 10.0;
  constexpr double kBeta = 0.04, kAlpha = 0.2 - kBeta * 0.75;
  double err_old = 1e-4;
  bool rejected_last = false;

  Vec k2, k3, k4, k5, k6, k7, y_new, err_vec;
  for (long step = 0; step < settings.max_steps; ++step) {
    if (t >= t_end) {
      traj.termination = Termination::max_time;
      return traj;
    }
    h = std::min(h, t_end - t);
    if (h < 1e-14 * std::max(1.0, std::abs(t)))
      throw SolverError("step size underflow at t = " + std::to_string(t) +
                        "; the problem looks divergent at this tolerance");

    // Stages; an evaluation error shrinks the step and retries.
    bool stage_ok = true;
    try {
      k2 = rhs(y + h * (a21 * k1));
      k3 = rhs(y + h * (a31 * k1 + a32 * k2));
      k4 = rhs(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
      k5 = rhs(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
      k6 = rhs(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
      y_new = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
      k7 = rhs(y_new);
    } catch (const FieldRangeError&) {
      stage_ok = false;
    } catch (const DomainError&) {
      stage_ok = false;
    }
    if (!stage_ok) {
      h *= 0.5;
      rejected_last = true;
      continue;
    }

    err_vec = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    double err = error_norm(err_vec, y, y_new, settings.atol, settings.rtol);

    if (err > 1.0) {  // reject
      double fac = std::max(kMinFactor, kSafety * std::pow(err, -0.2));
      h *= fac;
      rejected_last = true;
      continue;
    }

    // Accepted: build the dense interpolant for this step.
    DenseStep dense;
    dense.t0 = t;
    dense.h = h;
    dense.r1 = y;
    dense.r2 = y_new - y;
    dense.r3 = h * k1 - dense.r2;
    dense.r4 = dense.r2 - h * k7 - dense.r3;
    dense.r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);

    double t_new = t + h;

    // Guard exit: bisect for the last in-domain point.
    if (options.guard && !options.guard(y_new)) {
      double lo = t, hi = t_new;
      for (int it = 0; it < 60 && (hi - lo) > 1e-15 * std::max(1.0, t_new); ++it) {
        double mid = 0.5 * (lo + hi);
        if (options.guard(dense.eval(mid)))
          lo = mid;
        else
          hi = mid;
      }
      emit_samples_upto(lo, dense);
      if (lo > traj.times.back()) {
        traj.times.push_back(lo);
        traj.points.push_back(dense.eval(lo));
      }
      traj.termination = Termination::left_domain;
      return traj;
    }

    // Event up-crossing: bisect the dense output.
    if (options.event) {
      double event_new = options.event(y_new);
      if (event_prev < 0.0 && event_new >= 0.0) {
        double lo = t, hi = t_new;
        for (int it = 0; it < 40; ++it) {
          double mid = 0.5 * (lo + hi);
          if (options.event(dense.eval(mid)) < 0.0)
            lo = mid;
          else
            hi = mid;
        }
        double t_event = hi;  // first nonnegative side
        emit_samples_upto(t_event, dense);
        if (t_event > traj.times.back()) {
          traj.times.push_back(t_event);
          traj.points.push_back(dense.eval(t_event));
        } else {
          t_event = traj.times.back();
        }
        traj.termination = Termination::event;
        traj.event_time = t_event;
        return traj;
      }
      event_prev = event_new;
    }

    emit_samples_upto(t_new, dense);
    traj.times.push_back(t_new);
    traj.points.push_back(y_new);

    y.swap(y_new);
    k1.swap(k7);  // FSAL
    t = t_new;

    double fac = kSafety * std::pow(err, -kAlpha) * std::pow(err_old, kBeta);
    fac = std::clamp(fac, kMinFactor, kMaxFactor);
    if (rejected_last) fac = std::min(fac, 1.0);
    h = std::min(h * fac, hmax);
    err_old = std::max(err, 1e-10);
    rejected_last = false;
  }

  traj.termination = Termination::max_steps;
  return traj;
}

std::vector<Vec> euler_polyline(const Field& field, const PlaneFrame& frame, double T, int k) {
  if (k < 1) throw DomainError("euler polyline needs k >= 1");
  std::vector<Vec> nodes;
  nodes.reserve(static_cast<std::size_t>(k) + 1);
  Vec x = frame.x();
  nodes.push_back(x);
  const double h = T / k;
  for (int i = 0; i < k; ++i) {
    x = x + h * frame.flow_direction(field.value(x));
    if (!strictly_positive(x)) throw SolverError("euler polyline left the positive orthant");
    nodes.push_back(x);
  }
  return nodes;
}

}  // namespace sxr
