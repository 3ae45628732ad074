#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace sxr {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Raised when an input leaves the domain of an operation (bad dimension,
/// nonpositive coordinate, malformed configuration).
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numeric routine breaks down (no convergence, step
/// underflow, event never reached).
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised when a field evaluation produces a value outside R^n_+ \ {0},
/// or the expression itself cannot be evaluated (log of a nonpositive
/// number, division by zero).
struct FieldRangeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A consumption vector: n >= 2 strictly positive coordinates.
class Bundle {
 public:
  explicit Bundle(Vec coords) : coords_(std::move(coords)) {
    if (coords_.size() < 2)
      throw DomainError("bundle needs at least 2 coordinates, got " +
                        std::to_string(coords_.size()));
    for (Eigen::Index i = 0; i < coords_.size(); ++i)
      if (!(coords_[i] > 0.0))
        throw DomainError("bundle coordinate " + std::to_string(i + 1) +
                          " is not strictly positive");
  }
  Bundle(std::initializer_list<double> coords)
      : Bundle(Eigen::Map<const Vec>(std::data(coords),
                                     static_cast<Eigen::Index>(coords.size()))) {}

  const Vec& vec() const { return coords_; }
  operator const Vec&() const { return coords_; }
  Eigen::Index size() const { return coords_.size(); }
  double operator[](Eigen::Index i) const { return coords_[i]; }

 private:
  Vec coords_;
};

/// Axis-aligned box strictly inside the positive orthant; used as a
/// sampling region for axiom checks and experiments.
struct Box {
  Vec lo;
  Vec hi;

  Box(Vec lo_, Vec hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
    if (lo.size() != hi.size()) throw DomainError("box bounds differ in dimension");
    for (Eigen::Index i = 0; i < lo.size(); ++i) {
      if (!(lo[i] > 0.0)) throw DomainError("box must lie strictly inside the positive orthant");
      if (!(lo[i] < hi[i])) throw DomainError("box has empty extent in coordinate " + std::to_string(i + 1));
    }
  }
  static Box cube(Eigen::Index n, double lo, double hi) {
    return Box(Vec::Constant(n, lo), Vec::Constant(n, hi));
  }
  Eigen::Index dim() const { return lo.size(); }
};

inline bool strictly_positive(const Vec& v, double margin = 0.0) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (!(v[i] > margin)) return false;
  return true;
}

inline bool strictly_less(const Vec& a, const Vec& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i)
    if (!(a[i] < b[i])) return false;
  return true;
}

}  // namespace sxr
