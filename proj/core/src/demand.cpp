#include "sxr/demand.hpp"

#include "sxr/preference.hpp"
#include "sxr/rng.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sxr {

FocReport verify_foc(const Field& field, const Vec& x, const BudgetProblem& problem) {
  Vec g = field.value(x);
  FocReport r;
  r.lambda_fit = g.dot(problem.p) / problem.p.squaredNorm();
  r.foc_residual = (g - r.lambda_fit * problem.p).norm() / g.norm();
  r.budget_residual = std::abs(problem.p.dot(x) - problem.m) / problem.m;
  return r;
}

namespace {

struct NewtonOutcome {
  bool converged = false;
  Vec x;
  double lambda = 0.0;
  double residual = 0.0;
};

double combined_residual(const Field& field, const BudgetProblem& pr, const Vec& x) {
  FocReport f = verify_foc(field, x, pr);
  return std::max(f.foc_residual, f.budget_residual);
}

NewtonOutcome newton_from(const Field& field, const BudgetProblem& pr, Vec x) {
  const Eigen::Index n = x.size();
  double lambda = field.value(x).dot(pr.p) / pr.p.squaredNorm();

  auto residual_vec = [&](const Vec& xx, double ll) {
    Vec f(n + 1);
    f.head(n) = field.value(xx) - ll * pr.p;
    f[n] = pr.p.dot(xx) - pr.m;
    return f;
  };

  Vec f = residual_vec(x, lambda);
  NewtonOutcome out;
  for (int iter = 0; iter < 80; ++iter) {
    double foc_rel = (f.head(n)).norm() / field.value(x).norm();
    double budget_rel = std::abs(f[n]) / pr.m;
    if (foc_rel <= 1e-11 && budget_rel <= 1e-13) break;

    Mat jac = Mat::Zero(n + 1, n + 1);
    jac.topLeftCorner(n, n) = field.jacobian(x).matrix;
    jac.topRightCorner(n, 1) = -pr.p;
    jac.bottomLeftCorner(1, n) = pr.p.transpose();
    Vec step = jac.fullPivLu().solve(-f);
    if (!step.allFinite()) break;

    // Damping: halve until the residual norm drops and x stays interior.
    double fn = f.norm();
    double scale = 1.0;
    bool moved = false;
    for (int halving = 0; halving < 20; ++halving, scale *= 0.5) {
      Vec x_try = x + scale * step.head(n);
      double l_try = lambda + scale * step[n];
      if (!strictly_positive(x_try)) continue;
      Vec f_try;
      try {
        f_try = residual_vec(x_try, l_try);
      } catch (const FieldRangeError&) {
        continue;
      }
      if (f_try.norm() < fn) {
        x = x_try;
        lambda = l_try;
        f = std::move(f_try);
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }

  out.x = x;
  out.lambda = lambda;
  out.residual = combined_residual(field, pr, x);
  out.converged = out.residual <= 1e-9 && lambda > 0.0;
  return out;
}

}  // namespace

DemandResult solve_demand(const Field& field, const BudgetProblem& problem, int starts,
                          std::uint64_t seed) {
  if (!problem.strictly_positive_prices())
    throw DomainError("interior demand needs strictly positive prices");
  if (problem.p.size() != field.dimension()) throw DomainError("price dimension mismatch");
  if (starts < 1) throw DomainError("need at least one start");

  const Eigen::Index n = field.dimension();
  Rng rng(seed);

  std::vector<NewtonOutcome> roots;
  std::vector<double> best_residuals;
  for (int s = 0; s < starts; ++s) {
    Vec w = rng.simplex_weights(n, 0.02);
    Vec x0(n);
    for (Eigen::Index i = 0; i < n; ++i) x0[i] = problem.m * w[i] / problem.p[i];
    NewtonOutcome o = newton_from(field, problem, x0);
    best_residuals.push_back(o.residual);
    if (!o.converged) continue;
    bool duplicate = false;
    for (const auto& r : roots)
      if ((r.x - o.x).norm() <= 1e-6 * std::max(1.0, o.x.norm())) {
        duplicate = true;
        break;
      }
    if (!duplicate) roots.push_back(std::move(o));
  }

  if (roots.empty()) {
    std::ostringstream msg;
    msg << "no transaction stopping point found from " << starts << " starts; best residuals:";
    for (double r : best_residuals) msg << " " << r;
    throw SolverError(msg.str());
  }

  std::sort(roots.begin(), roots.end(),
            [](const NewtonOutcome& a, const NewtonOutcome& b) { return a.residual < b.residual; });

  DemandResult res;
  res.x_star = roots.front().x;
  res.lambda = roots.front().lambda;
  FocReport f = verify_foc(field, res.x_star, problem);
  res.foc_residual = f.foc_residual;
  res.budget_residual = f.budget_residual;
  for (const auto& r : roots) res.roots.push_back(r.x);
  return res;
}

namespace {

// Enumerate interior compositions of the unit simplex with `grid` cells
// per edge. Exact for small n; the caller falls back to random coverage
// beyond that.
void enumerate_simplex(Eigen::Index n, int grid, double floor_w, Vec& w, Eigen::Index coord,
                       double remaining, const std::function<void(const Vec&)>& visit) {
  if (coord == n - 1) {
    if (remaining >= floor_w) {
      w[coord] = remaining;
      visit(w);
    }
    return;
  }
  for (int k = 1; k < grid; ++k) {
    double wi = static_cast<double>(k) / grid;
    if (wi < floor_w || wi > remaining - floor_w * static_cast<double>(n - 1 - coord)) continue;
    w[coord] = wi;
    enumerate_simplex(n, grid, floor_w, w, coord + 1, remaining - wi, visit);
  }
}

}  // namespace

Vec demand_by_maximization(const Field& field, const BudgetProblem& problem, const Bundle& ref_v,
                           int grid, const OdeSettings& settings) {
  if (!problem.strictly_positive_prices())
    throw DomainError("interior demand needs strictly positive prices");
  const Eigen::Index n = field.dimension();
  if (grid < 4) throw DomainError("grid too coarse");
  const double floor_w = 1e-3;

  auto bundle_of = [&](const Vec& w) {
    Vec x(n);
    for (Eigen::Index i = 0; i < n; ++i) x[i] = problem.m * w[i] / problem.p[i];
    return x;
  };
  auto score = [&](const Vec& w) {
    return utility(field, Bundle(bundle_of(w)), ref_v, settings);
  };

  Vec best_w = Vec::Constant(n, 1.0 / static_cast<double>(n));
  double best_u = score(best_w);
  auto consider = [&](const Vec& w) {
    double u = score(w);
    if (u > best_u) {
      best_u = u;
      best_w = w;
    }
  };

  if (n <= 4) {
    Vec w(n);
    enumerate_simplex(n, grid, floor_w, w, 0, 1.0, consider);
  } else {
    Rng rng(20240 + static_cast<std::uint64_t>(grid));
    long budget = static_cast<long>(grid) * grid;
    for (long s = 0; s < budget; ++s) consider(rng.simplex_weights(n, floor_w));
  }

  // Coordinate polish: transfer mass between weight pairs, shrinking the
  // step 10x per round.
  double step = 1.0 / grid;
  for (int round = 0; round < 3; ++round, step /= 10.0) {
    bool improved = true;
    int moves = 0;
    while (improved && moves < 400) {
      improved = false;
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
          if (i == j) continue;
          Vec w = best_w;
          w[i] += step;
          w[j] -= step;
          if (w[j] < floor_w) continue;
          double u = score(w);
          if (u > best_u) {
            best_u = u;
            best_w = w;
            improved = true;
            ++moves;
          }
        }
    }
  }
  return bundle_of(best_w);
}

AxiomVerdict check_warp(const std::vector<std::pair<BudgetProblem, Vec>>& demands) {
  AxiomVerdict verdict{};
  verdict.axiom = AxiomKind::warp;
  for (const auto& [pr, x] : demands)
    if (std::abs(pr.p.dot(x) - pr.m) / pr.m > 1e-8)
      throw DomainError("demand bundle is off its budget hyperplane");

  for (std::size_t a = 0; a < demands.size(); ++a)
    for (std::size_t b = 0; b < demands.size(); ++b) {
      if (a == b) continue;
      const auto& [pa, xa] = demands[a];
      const auto& [pb, xb] = demands[b];
      if ((xa - xb).norm() <= 1e-9 * std::max(1.0, xa.norm())) continue;
      const double tol_a = 1e-9 * (1.0 + pa.m);
      const double tol_b = 1e-9 * (1.0 + pb.m);
      const double cost_b_at_a = pa.p.dot(xb);
      const double cost_a_at_b = pb.p.dot(xa);
      if (cost_b_at_a <= pa.m + tol_a && cost_a_at_b <= pb.m + tol_b)
        verdict.pair_witnesses.push_back({xa, xb, cost_b_at_a, pa.m, cost_a_at_b, pb.m});
      ++verdict.samples_tested;
    }
  if (!verdict.pair_witnesses.empty()) verdict.status = AxiomStatus::violated;
  return verdict;
}

}  // namespace sxr
