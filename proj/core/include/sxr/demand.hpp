#pragma once

#include "sxr/axioms.hpp"
#include "sxr/field.hpp"
#include "sxr/ode.hpp"
#include "sxr/types.hpp"

#include <cstdint>
#include <vector>

namespace sxr {

/// Prices and income defining the budget set {x : p.x <= m}.
struct BudgetProblem {
  Vec p;
  double m = 0.0;

  BudgetProblem(Vec prices, double income) : p(std::move(prices)), m(income) {
    bool any = false;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      if (p[i] < 0.0) throw DomainError("prices must be nonnegative");
      any = any || p[i] > 0.0;
    }
    if (!any) throw DomainError("price vector must be nonzero");
    if (!(m > 0.0)) throw DomainError("income must be strictly positive");
  }
  bool strictly_positive_prices() const { return sxr::strictly_positive(p); }
};

/// A transaction stopping point: x on the budget hyperplane with the
/// field proportional to prices. Multiple distinct roots are surfaced,
/// never silently collapsed; multiplicity signals weak-axiom failure.
struct DemandResult {
  Vec x_star;
  double lambda = 0.0;
  double foc_residual = 0.0;     // |g(x*) - lambda p| / |g(x*)|
  double budget_residual = 0.0;  // |p.x* - m| / m
  std::vector<Vec> roots;        // all distinct converged roots
};

/// Damped Newton on [g(x) - lambda p; p.x - m] from `starts` random
/// points on the budget hyperplane. Interior solutions only: rejects
/// price vectors with zero components. Throws SolverError with the best
/// per-start residual when no start converges.
DemandResult solve_demand(const Field& field, const BudgetProblem& problem, int starts = 16,
                          std::uint64_t seed = 42);

struct FocReport {
  double foc_residual = 0.0;
  double budget_residual = 0.0;
  double lambda_fit = 0.0;  // least-squares multiplier (g.p)/|p|^2
};

FocReport verify_foc(const Field& field, const Vec& x, const BudgetProblem& problem);

/// Independent route to the demand point: maximize the recovered utility
/// over the budget hyperplane by simplex grid search plus coordinate
/// polish (3 rounds, step shrinking 10x). Slow but solver-free; serves as
/// an oracle for solve_demand when the field passes the consistency and
/// no-cycling screens.
Vec demand_by_maximization(const Field& field, const BudgetProblem& problem, const Bundle& ref_v,
                           int grid = 50, const OdeSettings& settings = {});

/// Revealed-preference consistency over a list of computed demands:
/// flags ordered pairs where each bundle was affordable when the other
/// was chosen. Each input must sit on its budget (relative residual
/// <= 1e-8).
AxiomVerdict check_warp(const std::vector<std::pair<BudgetProblem, Vec>>& demands);

}  // namespace sxr
