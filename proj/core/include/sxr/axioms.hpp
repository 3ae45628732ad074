#pragma once

#include "sxr/field.hpp"
#include "sxr/ode.hpp"
#include "sxr/preference.hpp"
#include "sxr/rng.hpp"
#include "sxr/types.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace sxr {

enum class Definiteness {
  negative_definite,
  negative_semidefinite,
  indefinite,
  positive_semidefinite,
  positive_definite
};

const char* to_string(Definiteness d);

/// The (n-1)x(n-1) derivative matrix of the field normalized by its
/// pivot component. Its symmetry is the differential form of the
/// no-cycling axiom, its definiteness the differential form of the
/// consistency axioms.
struct AntonelliReport {
  Vec point;
  Mat matrix;
  double symmetry_residual = 0.0;  // Frobenius norm of A - A^T
  Vec sym_part_eigenvalues;        // of (A + A^T)/2, ascending
  Definiteness classification = Definiteness::indefinite;
  int pivot = -1;  // 0-based coordinate used as numeraire
};

/// Pivot on the last coordinate; requires g_n(x) > 1e-10.
AntonelliReport antonelli(const Field& field, const Bundle& x);

/// Pivot on an arbitrary coordinate (used when g_n vanishes; the ratios
/// are pivot-invariant, so any coordinate with g_i bounded away from zero
/// serves).
AntonelliReport antonelli_pivoted(const Field& field, const Bundle& x, int pivot);

/// Pivot on the largest field component; always well-defined since the
/// field never vanishes.
AntonelliReport antonelli_auto(const Field& field, const Bundle& x);

/// One cyclic curl sum g_i (dg_j/dx_k - dg_k/dx_j) + (cyclic) per index
/// triple i < j < k; all must vanish for an integrable field. Empty for
/// n = 2.
struct CurlResidual {
  int i, j, k;  // 0-based
  double value;
};
std::vector<CurlResidual> curl_residuals(const Field& field, const Bundle& x);

/// Quadratic form of the derivative matrix restricted to the hyperplane
/// orthogonal to g(x).
struct TangentFormVerdict {
  bool a1_holds = false;  // max eigenvalue <= +tol
  bool a2_holds = false;  // max eigenvalue <  -tol
  double max_eigenvalue = 0.0;
  Vec eigenvalues;  // ascending
  Mat restricted_form;
};
TangentFormVerdict tangent_definiteness(const Field& field, const Bundle& x);

enum class AxiomKind { weak_weak, weak, ville, warp };
enum class AxiomStatus { no_violation_found, violated };

const char* to_string(AxiomKind k);
const char* to_string(AxiomStatus s);

/// A flagged pair with both sides of the defining inequalities, so the
/// witness can be re-verified without the sampler. For the pointwise
/// axioms, own_at_x = g(x).x and cross_at_x = g(x).y; for revealed
/// preference over computed demands, own_at_x = income and
/// cross_at_x = the other bundle's cost at x's prices.
struct PairWitness {
  Vec x, y;
  double cross_at_x, own_at_x, cross_at_y, own_at_y;
};

struct PointWitness {
  Vec x;
  double residual;
  double tolerance;
};

struct AxiomVerdict {
  AxiomKind axiom = AxiomKind::weak_weak;
  AxiomStatus status = AxiomStatus::no_violation_found;
  long samples_tested = 0;
  std::uint64_t seed = 0;
  std::optional<Box> region;  // sampling region, when one was used
  std::vector<PairWitness> pair_witnesses;
  std::vector<PointWitness> point_witnesses;
};

/// Sampling check of: g(x).y <= g(x).x implies g(y).x >= g(y).y.
/// `candidate_pairs` are tested ahead of the random draw (useful for
/// known counterexamples and for equality-tied pairs no sampler would
/// hit). Verdicts are certificates of violation only; absence of a
/// witness proves nothing.
AxiomVerdict check_wwa(const Field& field, const Box& region, long n_samples, std::uint64_t seed,
                       const std::vector<std::pair<Vec, Vec>>& candidate_pairs = {});

/// Strict version: g(x).y <= g(x).x and y != x must force g(y).x > g(y).y.
AxiomVerdict check_weak_axiom(const Field& field, const Box& region, long n_samples,
                              std::uint64_t seed,
                              const std::vector<std::pair<Vec, Vec>>& candidate_pairs = {});

/// Samples the curl residuals over the region. Two-good fields are clean
/// by construction and return immediately with zero samples.
AxiomVerdict check_ville(const Field& field, const Box& region, long n_samples,
                         std::uint64_t seed);

/// A triple with legs rescaled to exact indifference, witnessing a
/// preference cycle. `gain` is the ray multiple u(z, x) > 1 accumulated
/// around x -> y -> z; `shrink_factor` = 1/gain < 1 is the loss a
/// consumer accepting the reverse tour would swallow.
struct IntransitiveTriple {
  Vec x, y, z;
  double gain = 1.0;
  double shrink_factor = 1.0;
  double raw_score = 0.0;  // |holonomy - 1| of the unnormalized candidate
};

/// Random search for the strongest preference cycle. Returns nothing when
/// no candidate scores above 1e-4 within the budget (the expected outcome
/// for an integrable field). Requires n >= 3; coplanar triples are
/// skipped.
std::optional<IntransitiveTriple> find_intransitive_triple(const Field& field, const Box& region,
                                                           std::uint64_t seed, int budget,
                                                           const OdeSettings& settings = {});

/// One leg of a cheating tour: the indifference flow from `start` toward
/// the ray of `target`, tilted by epsilon * target so the consumer sees
/// strict improvement the whole way.
struct VilleLeg {
  Vec start;
  Vec target;
  Vec anchor;  // the leg's plane is span{anchor, target}
  double epsilon = 0.0;
  double ray_multiple = 0.0;  // |endpoint| / |target|
  double ray_residual = 0.0;  // angular deviation of endpoint from the ray
  std::vector<double> times;
  std::vector<Vec> points;  // dense samples, endpoint last
};

/// A piecewise-smooth closed curve along which the field strictly
/// improves at every sampled time: three tilted indifference legs plus a
/// straight climb back to the start.
struct VilleCurve {
  std::vector<VilleLeg> legs;
  Vec close_from, close_to;  // linear closing segment
  double total_time = 0.0;
  double closure_gap = 0.0;       // |x(T) - x(0)|
  double min_directional = 0.0;   // min over samples of g(x(t)) . x'(t)
  double epsilon = 0.0;           // accepted tilt
  double shrink_factor = 0.0;     // |leg-3 endpoint| / |x(0)| along the ray of x
  IntransitiveTriple anchor_triple;
};

/// Builds the closed curve from a cycle witness. Starts at
/// gain * x, runs the three tilted legs to the rays of z, y, x, and
/// closes with the straight segment, which is valid only when the last
/// endpoint sits strictly below the start; epsilon is halved (up to 30
/// times) until that holds. Throws SolverError when no epsilon works,
/// with the sweep trace in the message.
VilleCurve construct_ville_curve(const Field& field, const IntransitiveTriple& triple,
                                 double epsilon, const OdeSettings& settings = {});

/// Definition-level validation: re-evaluates g . x' on (at least)
/// `min_samples` sample times spread over the whole curve and returns the
/// minimum, ignoring how the curve was produced.
double min_directional_derivative(const Field& field, const VilleCurve& curve,
                                  int min_samples = 1000);

}  // namespace sxr
