#ifndef SUBTR_BFGS_HPP
#define SUBTR_BFGS_HPP

#include "subtr/problem.hpp"

namespace subtr {

/// Dense BFGS Hessian approximation, started at the identity.
/// Updates with s'y at or below the curvature threshold leave B
/// untouched (the safeguard branch), so B stays positive definite.
struct BfgsState {
  Matrix B;
  bool last_update_skipped = false;

  explicit BfgsState(int n) : B(Matrix::Identity(n, n)) {}
};

/// Rank-two BFGS update with s = x_k - x_{k-1} and y the (possibly
/// sub-sampled) gradient difference. The curvature test is relative:
/// s'y <= 1e-12 ||s|| ||y|| skips the update.
void bfgs_update(BfgsState& state, const Vector& s, const Vector& y);

struct ComponentOrdering;

/// BFGS curvature model for the sub-sampled solver.
///
/// Prefix samples of different cardinalities see gradients of
/// different magnitude (a value-ordered prefix mean over m components
/// scales roughly like d/m times the full gradient), so a single
/// unscaled matrix cannot serve every per-iteration model. This class
/// keeps one base matrix that tracks the full Hessian and hands each
/// model the rescaled copy (d/m) * base.
///
/// Secant pairs are built across the last accepted step from prefix
/// gradients of matched cardinality m* = min(m_now, m available at
/// the previous point). All component gradients involved are already
/// memoized by the inner loop, so no extra evaluations occur. Since
/// the ordering is recomputed at each accepted point, the two
/// m*-prefixes can disagree; y is therefore summed only over the
/// components present in both prefixes and rescaled by m* / |I|,
/// which keeps the pair a clean secant of the partial-sum function
/// (1/d) sum f_i instead of mixing mismatched component sets. Before
/// each update the base is shrunk by min{1, s'y / s'Bs} so that stale
/// curvature decays in every direction at once, not only along the
/// step.
class SubsampledBfgs {
 public:
  SubsampledBfgs(int n, int d);

  /// Start accumulating prefix sums at a new point. Call whenever the
  /// component ordering is recomputed (first iteration and after each
  /// accepted step).
  void begin_point(const Vector& x, const ComponentOrdering& ordering);

  /// Extend the prefix sums at the current point to cardinality m
  /// (all gradients come from the ledger memo), apply any newly
  /// available matched-cardinality update, and return the model
  /// matrix (d/m) * base for this iteration.
  Matrix model_matrix(const FiniteSumProblem& problem, const Vector& x,
                      int m, EvaluationLedger& ledger);

  /// Record that the step was accepted: the current point becomes the
  /// previous point of the next secant pair.
  void step_accepted();

  const Matrix& base() const { return state_.B; }

 private:
  struct PointData {
    Vector x;
    std::vector<int> prefix;       // 1-based component order
    std::vector<Vector> grads;     // grads[i] = gradient of prefix[i]
    std::vector<Vector> cumsum;    // cumsum[i] = sum of first i+1 grads
  };

  void extend(PointData& p, const FiniteSumProblem& problem,
              EvaluationLedger& ledger, int m);
  Vector intersection_secant(int mstar, int* overlap) const;

  BfgsState state_;
  int d_;
  PointData current_, previous_;
  bool have_previous_ = false;
  bool any_update_ = false;
  int last_mstar_ = 0;
};

}  // namespace subtr

#endif  // SUBTR_BFGS_HPP
