#ifndef SUBTR_SUBPROBLEM_HPP
#define SUBTR_SUBPROBLEM_HPP

#include "subtr/problem.hpp"

#include <optional>

namespace subtr {

/// Quadratic trust-region model m(d) = f0 + <g, d> + 0.5 <B d, d>,
/// minimized over ||d|| <= delta.
struct ModelSpec {
  Vector g;
  Matrix B;
  double delta = 0.0;
  double f0 = 0.0;
};

/// Minimizer of the model along -g within the region.
Vector cauchy_point(const ModelSpec& model);

/// Standard dogleg path between the Cauchy and Newton points; requires
/// B positive definite. Returns nullopt when the Cholesky factorization
/// fails, in which case the caller falls back to the Cauchy point.
std::optional<Vector> dogleg(const ModelSpec& model);

/// Step of length delta along an eigenvector of the most negative
/// eigenvalue, signed against g. Requires lambda_min(B) < 0.
Vector eigen_step(const ModelSpec& model);

/// m(0) - m(d) = -<g, d> - 0.5 <B d, d>.
double model_decrease(const ModelSpec& model, const Vector& d);

/// Fraction-of-Cauchy decrease test:
/// m(0) - m(d) >= 0.5 ||g|| min{delta, ||g|| / ||B||} (spectral norm),
/// up to an absolute slack of 1e-12 (1 + |f0|).
bool verify_first_order(const ModelSpec& model, const Vector& d);

/// Same test with a caller-supplied upper bound on ||B||; a looser
/// bound only weakens the test, never strengthens it.
bool verify_first_order(const ModelSpec& model, const Vector& d,
                        double b_norm_upper);

/// Second-order decrease test with configurable eigen coefficient:
/// m(0) - m(d) >= max{Cauchy term, kappa (-lambda_min(B))_+ delta^2}.
/// The canonical eigen-step only guarantees kappa = 1/2.
bool verify_second_order(const ModelSpec& model, const Vector& d,
                         double kappa = 0.5);

/// Best of the Cauchy, eigen and dogleg candidates by model decrease.
/// Throws std::invalid_argument when g = 0 and B is positive
/// semidefinite (the sampled model is stationary).
Vector solve_second_order(const ModelSpec& model);

/// Spectral norm and smallest eigenpair via a dense symmetric
/// eigensolve.
double spectral_norm(const Matrix& B);
double smallest_eigenvalue(const Matrix& B);

}  // namespace subtr

#endif  // SUBTR_SUBPROBLEM_HPP
