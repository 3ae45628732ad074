#include "sxr/axioms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sxr {

const char* to_string(Definiteness d) {
  switch (d) {
    case Definiteness::negative_definite: return "negative_definite";
    case Definiteness::negative_semidefinite: return "negative_semidefinite";
    case Definiteness::indefinite: return "indefinite";
    case Definiteness::positive_semidefinite: return "positive_semidefinite";
    case Definiteness::positive_definite: return "positive_definite";
  }
  return "?";
}

const char* to_string(AxiomKind k) {
  switch (k) {
    case AxiomKind::weak_weak: return "weak_weak_axiom";
    case AxiomKind::weak: return "weak_axiom";
    case AxiomKind::ville: return "ville";
    case AxiomKind::warp: return "warp";
  }
  return "?";
}

const char* to_string(AxiomStatus s) {
  return s == AxiomStatus::violated ? "violated" : "no_violation_found";
}

namespace {

Definiteness classify(const Vec& eigenvalues, double matrix_norm) {
  const double tol = 1e-8 * std::max(matrix_norm, 1e-30);
  double lo = eigenvalues[0];
  double hi = eigenvalues[eigenvalues.size() - 1];
  if (hi < -tol) return Definiteness::negative_definite;
  if (hi <= tol) return Definiteness::negative_semidefinite;
  if (lo > tol) return Definiteness::positive_definite;
  if (lo >= -tol) return Definiteness::positive_semidefinite;
  return Definiteness::indefinite;
}

}  // namespace

AntonelliReport antonelli_pivoted(const Field& field, const Bundle& x, int pivot) {
  const Eigen::Index n = field.dimension();
  if (pivot < 0 || pivot >= n) throw DomainError("pivot out of range");
  Vec g = field.value(x);
  if (!(g[pivot] > 1e-10))
    throw DomainError("pivot component of the field is too small at this point (" +
                      std::to_string(g[pivot]) + ")");
  Mat dg = field.jacobian(x).matrix;

  // Relabel so the pivot becomes the last coordinate.
  std::vector<Eigen::Index> perm;
  for (Eigen::Index i = 0; i < n; ++i)
    if (i != pivot) perm.push_back(i);
  perm.push_back(pivot);

  Vec gp(n);
  Mat dgp(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    gp[i] = g[perm[i]];
    for (Eigen::Index j = 0; j < n; ++j) dgp(i, j) = dg(perm[i], perm[j]);
  }

  // Normalized field gbar = g / g_n; chain rule for its derivatives.
  const double gn = gp[n - 1];
  Vec gbar = gp / gn;
  Mat dbar(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      dbar(i, j) = (dgp(i, j) * gn - gp[i] * dgp(n - 1, j)) / (gn * gn);

  Mat a(n - 1, n - 1);
  for (Eigen::Index i = 0; i < n - 1; ++i)
    for (Eigen::Index j = 0; j < n - 1; ++j)
      a(i, j) = dbar(i, j) - dbar(i, n - 1) * gbar[j];

  AntonelliReport rep;
  rep.point = x.vec();
  rep.matrix = a;
  rep.symmetry_residual = (a - a.transpose()).norm();
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (a + a.transpose()));
  rep.sym_part_eigenvalues = es.eigenvalues();
  rep.classification = classify(rep.sym_part_eigenvalues, a.norm());
  rep.pivot = pivot;
  return rep;
}

AntonelliReport antonelli(const Field& field, const Bundle& x) {
  return antonelli_pivoted(field, x, static_cast<int>(field.dimension()) - 1);
}

AntonelliReport antonelli_auto(const Field& field, const Bundle& x) {
  Vec g = field.value(x);
  Eigen::Index pivot = 0;
  g.maxCoeff(&pivot);
  return antonelli_pivoted(field, x, static_cast<int>(pivot));
}

std::vector<CurlResidual> curl_residuals(const Field& field, const Bundle& x) {
  const Eigen::Index n = field.dimension();
  std::vector<CurlResidual> out;
  if (n < 3) return out;
  Vec g = field.value(x);
  Mat dg = field.jacobian(x).matrix;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        double value = g[i] * (dg(j, k) - dg(k, j)) + g[j] * (dg(k, i) - dg(i, k)) +
                       g[k] * (dg(i, j) - dg(j, i));
        out.push_back({i, j, k, value});
      }
  return out;
}

TangentFormVerdict tangent_definiteness(const Field& field, const Bundle& x) {
  const Eigen::Index n = field.dimension();
  Vec g = field.value(x);
  Mat dg = field.jacobian(x).matrix;

  // Orthonormal basis of the hyperplane orthogonal to g: the trailing
  // columns of a full QR of g.
  Mat g_col = g;
  Eigen::HouseholderQR<Mat> qr(g_col);
  Mat q = qr.householderQ();
  Mat basis = q.rightCols(n - 1);

  Mat sym = 0.5 * (dg + dg.transpose());
  Mat m = basis.transpose() * sym * basis;

  TangentFormVerdict v;
  v.restricted_form = m;
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m + m.transpose()));
  v.eigenvalues = es.eigenvalues();
  v.max_eigenvalue = v.eigenvalues[v.eigenvalues.size() - 1];
  const double tol = 1e-8 * std::max(m.norm(), 1e-30);
  v.a1_holds = v.max_eigenvalue <= tol;
  v.a2_holds = v.max_eigenvalue < -tol;
  return v;
}

namespace {

AxiomVerdict check_pair_axiom(AxiomKind kind, const Field& field, const Box& region,
                              long n_samples, std::uint64_t seed,
                              const std::vector<std::pair<Vec, Vec>>& candidate_pairs) {
  AxiomVerdict verdict{};
  verdict.axiom = kind;
  verdict.seed = seed;
  verdict.region = region;
  Rng rng(seed);

  auto test_pair = [&](const Vec& x, const Vec& y) {
    Vec gx = field.value(x);
    Vec gy = field.value(y);
    const double gx_y = gx.dot(y), gx_x = gx.dot(x);
    const double gy_x = gy.dot(x), gy_y = gy.dot(y);
    const double tol = 1e-9 * (1.0 + std::abs(gx_x));
    const double tol_y = 1e-9 * (1.0 + std::abs(gy_y));
    bool flagged = false;
    if (kind == AxiomKind::weak_weak) {
      flagged = gx_y <= gx_x + tol && gy_x < gy_y - tol_y;
    } else {
      bool distinct = (x - y).norm() > 1e-12 * (x.norm() + y.norm());
      flagged = gx_y <= gx_x + tol && distinct && gy_x <= gy_y + tol_y;
    }
    if (flagged) verdict.pair_witnesses.push_back({x, y, gx_y, gx_x, gy_x, gy_y});
    ++verdict.samples_tested;
  };

  for (const auto& [x, y] : candidate_pairs) test_pair(x, y);
  for (long s = 0; s < n_samples; ++s) test_pair(rng.point_in(region), rng.point_in(region));

  if (!verdict.pair_witnesses.empty()) verdict.status = AxiomStatus::violated;
  return verdict;
}

}  // namespace

AxiomVerdict check_wwa(const Field& field, const Box& region, long n_samples, std::uint64_t seed,
                       const std::vector<std::pair<Vec, Vec>>& candidate_pairs) {
  return check_pair_axiom(AxiomKind::weak_weak, field, region, n_samples, seed, candidate_pairs);
}

AxiomVerdict check_weak_axiom(const Field& field, const Box& region, long n_samples,
                              std::uint64_t seed,
                              const std::vector<std::pair<Vec, Vec>>& candidate_pairs) {
  return check_pair_axiom(AxiomKind::weak, field, region, n_samples, seed, candidate_pairs);
}

AxiomVerdict check_ville(const Field& field, const Box& region, long n_samples,
                         std::uint64_t seed) {
  AxiomVerdict verdict{};
  verdict.axiom = AxiomKind::ville;
  verdict.seed = seed;
  verdict.region = region;
  if (field.dimension() == 2) return verdict;  // no index triple exists

  Rng rng(seed);
  for (long s = 0; s < n_samples; ++s) {
    Vec x = rng.point_in(region);
    Bundle b(x);
    Vec g = field.value(b);
    Mat dg = field.jacobian(b).matrix;
    const double tol = 1e-6 * (1.0 + g.norm() * dg.norm());
    for (const auto& r : curl_residuals(field, b))
      if (std::abs(r.value) > tol) {
        verdict.point_witnesses.push_back({x, r.value, tol});
        break;  // one witness per point is enough
      }
    ++verdict.samples_tested;
  }
  if (!verdict.point_witnesses.empty()) verdict.status = AxiomStatus::violated;
  return verdict;
}

namespace {

// dim span{x, y, z} <= 2 up to numerical tolerance.
bool coplanar(const Vec& x, const Vec& y, const Vec& z) {
  Mat m(x.size(), 3);
  m.col(0) = x / x.norm();
  m.col(1) = y / y.norm();
  m.col(2) = z / z.norm();
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues()(2) < 1e-6;
}

IntransitiveTriple normalize_cycle(const Field& field, const Vec& x, const Vec& y, const Vec& z,
                                   double raw_score, const OdeSettings& settings) {
  // Rescale legs to exact indifference along x -> y -> z, then measure
  // the accumulated ray multiple back on x.
  Vec y_eq = utility(field, Bundle(x), Bundle(y), settings) * y;
  Vec z_eq = utility(field, Bundle(y_eq), Bundle(z), settings) * z;
  double gain = utility(field, Bundle(z_eq), Bundle(x), settings);

  IntransitiveTriple t;
  t.x = x;
  t.y = y_eq;
  t.z = z_eq;
  t.gain = gain;
  t.shrink_factor = 1.0 / gain;
  t.raw_score = raw_score;
  return t;
}

}  // namespace

std::optional<IntransitiveTriple> find_intransitive_triple(const Field& field, const Box& region,
                                                           std::uint64_t seed, int budget,
                                                           const OdeSettings& settings) {
  if (field.dimension() < 3)
    throw DomainError("preference cycles need at least three goods");
  if (region.dim() != field.dimension()) throw DomainError("region dimension mismatch");

  // Per-trial substreams keep the search order-independent.
  const Rng root(seed);
  double best_score = 0.0;
  Vec best_x, best_y, best_z;
  for (int trial = 0; trial < budget; ++trial) {
    Rng rng = root.fork(static_cast<std::uint64_t>(trial));
    Vec x = rng.point_in(region);
    Vec y = rng.point_in(region);
    Vec z = rng.point_in(region);
    if (coplanar(x, y, z)) continue;
    double h = holonomy(field, Bundle(x), Bundle(y), Bundle(z), settings);
    double score = std::abs(h - 1.0);
    if (score > best_score) {
      best_score = score;
      best_x = x;
      best_y = y;
      best_z = z;
    }
  }
  if (best_score <= 1e-4) return std::nullopt;

  // Orient the cycle so the tour x -> y -> z accumulates a gain (> 1);
  // the construction of the closed curve needs the final point of the
  // unperturbed tour strictly above x.
  IntransitiveTriple t = normalize_cycle(field, best_x, best_y, best_z, best_score, settings);
  if (t.gain < 1.0) t = normalize_cycle(field, best_x, best_z, best_y, best_score, settings);
  if (t.gain <= 1.0 + 1e-5) return std::nullopt;  // flat after renormalization: spurious score
  return t;
}

namespace {

struct LegOutcome {
  VilleLeg leg;
  Vec endpoint;
};

// One tilted indifference leg from `start` toward the ray of `target`:
//   w' = (g(w).start) target - (g(w).target) start + eps * target.
// The tilt is ray-neutral for the crossing functional (w*.target = 0), so
// the stopping event stays monotone.
LegOutcome run_leg(const Field& field, const Vec& start, const Vec& target, double eps,
                   const OdeSettings& settings, int dense_samples) {
  const Vec w_star = (target.dot(start)) * target - (target.dot(target)) * start;
  auto rhs = [&field, &start, &target, eps](const Vec& w) {
    Vec g = field.value(w);
    return Vec((g.dot(start)) * target - (g.dot(target)) * start + eps * target);
  };
  IntegrateOptions opts;
  opts.event = [&w_star](const Vec& w) { return w_star.dot(w); };
  const double margin = settings.domain_margin;
  opts.guard = [margin](const Vec& w) { return strictly_positive(w, margin); };

  Trajectory first = integrate(rhs, start, settings, opts);
  if (first.termination != Termination::event)
    throw SolverError(std::string("cheating-tour leg did not reach its ray (") +
                      to_string(first.termination) + ")");
  const double t_cross = *first.event_time;

  // Second pass for evenly spaced samples.
  IntegrateOptions opts2 = opts;
  for (int i = 0; i < dense_samples; ++i)
    opts2.sample_times.push_back(t_cross * (1.0 - 1e-9) * i / std::max(1, dense_samples - 1));
  Trajectory traj = integrate(rhs, start, settings, opts2);

  LegOutcome out;
  out.leg.start = start;
  out.leg.target = target;
  out.leg.anchor = start;
  out.leg.epsilon = eps;
  out.leg.times = traj.sample_times;
  out.leg.points = traj.samples;
  out.endpoint = traj.last_point();
  out.leg.times.push_back(t_cross);
  out.leg.points.push_back(out.endpoint);
  out.leg.ray_multiple = out.endpoint.norm() / target.norm();
  out.leg.ray_residual =
      (out.endpoint / out.endpoint.norm() - target / target.norm()).norm();
  return out;
}

}  // namespace

VilleCurve construct_ville_curve(const Field& field, const IntransitiveTriple& triple,
                                 double epsilon, const OdeSettings& settings) {
  if (!(epsilon > 0.0)) throw DomainError("curve tilt epsilon must be strictly positive");
  if (!(triple.gain > 1.0))
    throw DomainError("cycle witness must carry a gain above 1 (shrink factor below 1)");

  const Vec x = triple.x, y = triple.y, z = triple.z;
  const Vec x_start = triple.gain * x;  // indifferent to z by construction
  constexpr int kSamplesPerLeg = 400;

  std::ostringstream sweep;
  for (int attempt = 0; attempt < 30; ++attempt, epsilon *= 0.5) {
    try {
      LegOutcome l1 = run_leg(field, x_start, z, epsilon, settings, kSamplesPerLeg);
      LegOutcome l2 = run_leg(field, l1.endpoint, y, epsilon, settings, kSamplesPerLeg);
      LegOutcome l3 = run_leg(field, l2.endpoint, x, epsilon, settings, kSamplesPerLeg);

      // The straight closing climb is valid only when the tour landed
      // strictly below its start, with enough margin that the reported
      // shrink is meaningfully under 1.
      if (!strictly_less(l3.endpoint, Vec((1.0 - 1e-6) * x_start))) {
        sweep << " eps=" << epsilon << ": tour ended above its start;";
        continue;
      }

      VilleCurve curve;
      curve.anchor_triple = triple;
      curve.epsilon = epsilon;
      // Stitch legs onto a common clock.
      double clock = 0.0;
      for (LegOutcome* lo : {&l1, &l2, &l3}) {
        for (double& t : lo->leg.times) t += clock;
        clock = lo->leg.times.back();
        curve.legs.push_back(std::move(lo->leg));
      }
      curve.close_from = l3.endpoint;
      curve.close_to = x_start;
      curve.total_time = clock + 1.0;  // closing segment on unit time
      curve.closure_gap = (curve.close_to - curve.legs.front().points.front()).norm();
      curve.shrink_factor = l3.endpoint.norm() / x_start.norm();
      curve.min_directional = min_directional_derivative(field, curve);
      return curve;
    } catch (const SolverError& e) {
      sweep << " eps=" << epsilon << ": " << e.what() << ";";
    }
  }
  throw SolverError("no tilt epsilon produced a closable curve:" + sweep.str());
}

double min_directional_derivative(const Field& field, const VilleCurve& curve, int min_samples) {
  double min_dd = std::numeric_limits<double>::infinity();
  long counted = 0;
  for (const auto& leg : curve.legs) {
    for (const auto& w : leg.points) {
      Vec g = field.value(w);
      Vec dw = (g.dot(leg.start)) * leg.target - (g.dot(leg.target)) * leg.start +
               leg.epsilon * leg.target;
      min_dd = std::min(min_dd, g.dot(dw));
      ++counted;
    }
  }
  // Closing segment: straight line, constant velocity.
  Vec dir = curve.close_to - curve.close_from;
  int close_samples = std::max(min_samples - static_cast<int>(counted), 32);
  for (int i = 0; i <= close_samples; ++i) {
    double s = static_cast<double>(i) / close_samples;
    Vec w = curve.close_from + s * dir;
    min_dd = std::min(min_dd, field.value(w).dot(dir));
  }
  return min_dd;
}

}  // namespace sxr
