#include "subtr/subproblem.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

namespace subtr {

namespace {

constexpr double kEigZero = 1e-9;  // |lambda_min| below this: no eigen step

double slack(const ModelSpec& model) {
  return 1e-12 * (1.0 + std::abs(model.f0));
}

}  // namespace

double spectral_norm(const Matrix& B) {
  if (B.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(B, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double smallest_eigenvalue(const Matrix& B) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(B, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

Vector cauchy_point(const ModelSpec& model) {
  const double gnorm = model.g.norm();
  if (gnorm == 0.0) throw std::invalid_argument("cauchy_point needs g != 0");
  const double gBg = model.g.dot(model.B * model.g);
  double t = model.delta / gnorm;
  if (gBg > 0.0) t = std::min(t, gnorm * gnorm / gBg);
  return Vector(-t * model.g);
}

std::optional<Vector> dogleg(const ModelSpec& model) {
  const double gnorm = model.g.norm();
  if (gnorm == 0.0) throw std::invalid_argument("dogleg needs g != 0");

  Eigen::LLT<Matrix> llt(model.B);
  if (llt.info() != Eigen::Success) return std::nullopt;

  const Vector newton = -llt.solve(model.g);
  if (newton.norm() <= model.delta) return newton;

  const double gBg = model.g.dot(model.B * model.g);
  if (gBg <= 0.0) return std::nullopt;  // factorization lied; punt

  const Vector steepest = -(gnorm * gnorm / gBg) * model.g;
  if (steepest.norm() >= model.delta)
    return Vector(-(model.delta / gnorm) * model.g);

  // Boundary intersection of the second leg:
  // ||steepest + tau (newton - steepest)|| = delta, tau in (0, 1].
  const Vector leg = newton - steepest;
  const double a = leg.squaredNorm();
  const double b = 2.0 * steepest.dot(leg);
  const double c = steepest.squaredNorm() - model.delta * model.delta;
  const double disc = std::sqrt(std::max(0.0, b * b - 4.0 * a * c));
  double tau;
  if (b <= 0.0)
    tau = (-b + disc) / (2.0 * a);
  else
    tau = -2.0 * c / (b + disc);
  tau = std::clamp(tau, 0.0, 1.0);
  return Vector(steepest + tau * leg);
}

Vector eigen_step(const ModelSpec& model) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(model.B);
  const double lam = es.eigenvalues()(0);
  if (lam >= 0.0)
    throw std::invalid_argument("eigen_step needs lambda_min(B) < 0");
  Vector v = es.eigenvectors().col(0);
  if (model.g.dot(v) > 0.0) v = -v;
  return Vector(model.delta * v);
}

double model_decrease(const ModelSpec& model, const Vector& d) {
  return -model.g.dot(d) - 0.5 * d.dot(model.B * d);
}

namespace {

double cauchy_term(const ModelSpec& model, double b_norm) {
  const double gnorm = model.g.norm();
  const double cap =
      b_norm > 0.0 ? std::min(model.delta, gnorm / b_norm) : model.delta;
  return 0.5 * gnorm * cap;
}

}  // namespace

bool verify_first_order(const ModelSpec& model, const Vector& d) {
  return verify_first_order(model, d, spectral_norm(model.B));
}

bool verify_first_order(const ModelSpec& model, const Vector& d,
                        double b_norm_upper) {
  return model_decrease(model, d) >=
         cauchy_term(model, b_norm_upper) - slack(model);
}

bool verify_second_order(const ModelSpec& model, const Vector& d,
                         double kappa) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(model.B, Eigen::EigenvaluesOnly);
  const double b_norm = es.eigenvalues().cwiseAbs().maxCoeff();
  const double neg_curv = std::max(0.0, -es.eigenvalues().minCoeff());
  const double target =
      std::max(cauchy_term(model, b_norm),
               kappa * neg_curv * model.delta * model.delta);
  return model_decrease(model, d) >= target - slack(model);
}

Vector solve_second_order(const ModelSpec& model) {
  const double lam = smallest_eigenvalue(model.B);
  const bool has_gradient = model.g.norm() > 0.0;
  const bool has_neg_curv = lam < -kEigZero;

  if (!has_gradient && !has_neg_curv)
    throw std::invalid_argument(
        "degenerate model: g = 0 and B positive semidefinite");

  std::optional<Vector> best;
  double best_dec = -std::numeric_limits<double>::infinity();
  auto consider = [&](Vector cand) {
    const double dec = model_decrease(model, cand);
    if (dec > best_dec) {
      best_dec = dec;
      best = std::move(cand);
    }
  };

  if (has_gradient) consider(cauchy_point(model));
  if (has_neg_curv) consider(eigen_step(model));
  if (has_gradient && lam > 0.0) {
    if (auto dl = dogleg(model)) consider(*dl);
  }
  return *best;
}

}  // namespace subtr
