#include "subtr/problem.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <memory>

namespace subtr {

int ceil_pp(double z) {
  if (z <= 1.0) return 1;
  return static_cast<int>(std::ceil(z));
}

namespace {

void check_point(const FiniteSumProblem& problem, const Vector& x) {
  if (x.size() != problem.n)
    throw std::invalid_argument("point dimension does not match problem");
}

void check_sample(const FiniteSumProblem& problem, const SampleSet& sample) {
  if (sample.indices.empty())
    throw std::invalid_argument("empty sample");
  for (int i : sample.indices)
    if (i < 1 || i > problem.d)
      throw std::invalid_argument("sample index out of range");
}

std::vector<int> sorted_indices(const SampleSet& sample) {
  std::vector<int> idx = sample.indices;
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace

FullValueResult full_value(const FiniteSumProblem& problem, const Vector& x,
                           EvaluationLedger& ledger) {
  check_point(problem, x);
  ledger.charge_full_value();
  FullValueResult out;
  out.component_values.resize(problem.d);
  double sum = 0.0;
  for (int i = 1; i <= problem.d; ++i) {
    const double v = problem.component_value(i, x);
    out.component_values[i - 1] = v;
    sum += v;
  }
  out.value = sum / problem.d;
  return out;
}

Vector sample_gradient(const FiniteSumProblem& problem, const SampleSet& sample,
                       const Vector& x, EvaluationLedger& ledger) {
  check_point(problem, x);
  check_sample(problem, sample);
  Vector sum = Vector::Zero(problem.n);
  for (int i : sorted_indices(sample))
    sum += ledger.component_gradient(problem, i, x);
  return sum / sample.cardinality();
}

Matrix sample_hessian(const FiniteSumProblem& problem, const SampleSet& sample,
                      const Vector& x, EvaluationLedger& ledger) {
  check_point(problem, x);
  check_sample(problem, sample);
  Matrix sum = Matrix::Zero(problem.n, problem.n);
  for (int i : sorted_indices(sample))
    sum += ledger.component_hessian(problem, i, x);
  sum /= sample.cardinality();
  return 0.5 * (sum + sum.transpose());
}

double full_value_unc(const FiniteSumProblem& problem, const Vector& x) {
  check_point(problem, x);
  double sum = 0.0;
  for (int i = 1; i <= problem.d; ++i) sum += problem.component_value(i, x);
  return sum / problem.d;
}

Vector full_gradient_unc(const FiniteSumProblem& problem, const Vector& x) {
  check_point(problem, x);
  Vector sum = Vector::Zero(problem.n);
  for (int i = 1; i <= problem.d; ++i) sum += problem.component_gradient(i, x);
  return sum / problem.d;
}

Matrix full_hessian_unc(const FiniteSumProblem& problem, const Vector& x) {
  check_point(problem, x);
  Matrix sum = Matrix::Zero(problem.n, problem.n);
  for (int i = 1; i <= problem.d; ++i) sum += problem.component_hessian(i, x);
  sum /= problem.d;
  return 0.5 * (sum + sum.transpose());
}

// ---------------------------------------------------------------------------
// Trigonometric benchmark problem.
//
// With t_i(x) = d - sum_j cos x_j + i(1 - cos x_i) - sin x_i:
//   f_i      = t_i^2
//   grad t_i = sin(x) + e_i (i sin x_i - cos x_i)
//   hess t_i = diag(cos x) + e_i e_i' (i cos x_i + sin x_i)

namespace {

double trig_inner(int d, int i, const Vector& x) {
  double s = 0.0;
  for (int j = 0; j < d; ++j) s += std::cos(x[j]);
  const double xi = x[i - 1];
  return d - s + i * (1.0 - std::cos(xi)) - std::sin(xi);
}

}  // namespace

FiniteSumProblem make_trig_problem(int d) {
  if (d < 1) throw std::invalid_argument("d must be positive");
  FiniteSumProblem p;
  p.n = d;
  p.d = d;
  p.component_value = [d](int i, const Vector& x) {
    const double t = trig_inner(d, i, x);
    return t * t;
  };
  p.component_gradient = [d](int i, const Vector& x) {
    const double t = trig_inner(d, i, x);
    Vector g(d);
    for (int j = 0; j < d; ++j) g[j] = std::sin(x[j]);
    g[i - 1] += i * std::sin(x[i - 1]) - std::cos(x[i - 1]);
    return Vector(2.0 * t * g);
  };
  p.component_hessian = [d](int i, const Vector& x) {
    const double t = trig_inner(d, i, x);
    Vector gt(d);
    for (int j = 0; j < d; ++j) gt[j] = std::sin(x[j]);
    gt[i - 1] += i * std::sin(x[i - 1]) - std::cos(x[i - 1]);
    Matrix h = 2.0 * gt * gt.transpose();
    for (int j = 0; j < d; ++j) h(j, j) += 2.0 * t * std::cos(x[j]);
    h(i - 1, i - 1) +=
        2.0 * t * (i * std::cos(x[i - 1]) + std::sin(x[i - 1]));
    return h;
  };
  return p;
}

// ---------------------------------------------------------------------------
// Quadratic oracle: f_i(x) = 0.5 ||x - c_i||^2, minimizer at the centroid.

FiniteSumProblem make_quadratic_oracle(int n, int d,
                                       const std::vector<Vector>& centers) {
  if (static_cast<int>(centers.size()) != d)
    throw std::invalid_argument("need exactly d centers");
  for (const auto& c : centers)
    if (c.size() != n) throw std::invalid_argument("center dimension mismatch");

  auto cs = std::make_shared<std::vector<Vector>>(centers);
  Vector centroid = Vector::Zero(n);
  for (const auto& c : centers) centroid += c;
  centroid /= d;

  double f_low = 0.0;  // f at the centroid
  for (const auto& c : centers) f_low += 0.5 * (centroid - c).squaredNorm();
  f_low /= d;

  FiniteSumProblem p;
  p.n = n;
  p.d = d;
  p.component_value = [cs](int i, const Vector& x) {
    return 0.5 * (x - (*cs)[i - 1]).squaredNorm();
  };
  p.component_gradient = [cs](int i, const Vector& x) {
    return Vector(x - (*cs)[i - 1]);
  };
  p.component_hessian = [n](int, const Vector&) {
    return Matrix(Matrix::Identity(n, n));
  };
  p.constants_for_start = [cs, centroid, f_low](const Vector& x0) {
    // Sublevel set is the ball ||x - centroid|| <= ||x0 - centroid||,
    // so the sup over it of ||x - c_i|| is attained on the boundary.
    const double r = (x0 - centroid).norm();
    double spread = 0.0;
    for (const auto& c : *cs)
      spread = std::max(spread, (centroid - c).norm() + r);
    KnownConstants k;
    k.lipschitz_gradient = 1.0;
    k.lipschitz_hessian = 0.0;
    k.stationary_spread = spread;
    k.f_low = f_low;
    return k;
  };
  return p;
}

// ---------------------------------------------------------------------------
// Saddle oracle: f_i(x) = 0.5 x'A_i x + 0.25 ||x||^4 with the mean of
// the A_i equal to diag(-1, 1, ..., 1). Every f_i is stationary at the
// origin (A2 with x*_i = 0) and the quartic keeps f bounded below.

FiniteSumProblem make_saddle_problem(int n, int d) {
  if (n < 2 || d < 2) throw std::invalid_argument("need n >= 2 and d >= 2");

  auto mats = std::make_shared<std::vector<Matrix>>();
  Matrix base = Matrix::Identity(n, n);
  base(0, 0) = -1.0;
  Matrix wobble = Matrix::Zero(n, n);
  wobble(0, 0) = 1.0;
  wobble(1, 1) = -1.0;
  for (int i = 0; i < d; ++i) {
    // Alternating +/- perturbation; zero weight on the last component
    // when d is odd so the mean stays exactly `base`.
    double sigma = (i % 2 == 0) ? 1.0 : -1.0;
    if (d % 2 == 1 && i == d - 1) sigma = 0.0;
    mats->push_back(base + sigma * wobble);
  }

  FiniteSumProblem p;
  p.n = n;
  p.d = d;
  p.component_value = [mats](int i, const Vector& x) {
    const double q = x.squaredNorm();
    return 0.5 * x.dot((*mats)[i - 1] * x) + 0.25 * q * q;
  };
  p.component_gradient = [mats](int i, const Vector& x) {
    return Vector((*mats)[i - 1] * x + x.squaredNorm() * x);
  };
  p.component_hessian = [mats, n](int i, const Vector& x) {
    return Matrix((*mats)[i - 1] + x.squaredNorm() * Matrix::Identity(n, n) +
                  2.0 * x * x.transpose());
  };
  p.constants_for_start = [mats, n, d](const Vector& x0) {
    Matrix mean = Matrix::Zero(n, n);
    for (const auto& a : *mats) mean += a;
    mean /= d;
    Eigen::SelfAdjointEigenSolver<Matrix> es(mean);
    const double lam_min = es.eigenvalues().minCoeff();
    const double a = std::max(0.0, -lam_min);

    double f0 = 0.0;
    {
      const double q = x0.squaredNorm();
      for (int i = 0; i < d; ++i)
        f0 += 0.5 * x0.dot((*mats)[i] * x0) + 0.25 * q * q;
      f0 /= d;
    }
    // f(x) >= 0.5*lam_min*r^2 + 0.25*r^4, so f <= f0 bounds r^2 by
    // a + sqrt(a^2 + 4 f0).
    const double u = a + std::sqrt(std::max(0.0, a * a + 4.0 * f0));
    const double radius = std::sqrt(u);

    double max_norm_a = 0.0;
    for (const auto& m : *mats) {
      Eigen::SelfAdjointEigenSolver<Matrix> e(m);
      max_norm_a = std::max(max_norm_a, e.eigenvalues().cwiseAbs().maxCoeff());
    }
    KnownConstants k;
    k.lipschitz_gradient = max_norm_a + 3.0 * u;
    k.lipschitz_hessian = 6.0 * radius;
    k.stationary_spread = radius;
    k.f_low = -0.25 * a * a;
    return k;
  };
  return p;
}

FiniteSumProblem make_problem(const std::string& name, int d) {
  if (name == "trig") return make_trig_problem(d);
  if (name == "quadratic") {
    // Centers spread on coordinate axes so components genuinely differ.
    const int n = std::max(2, std::min(d, 10));
    std::vector<Vector> centers;
    for (int i = 0; i < d; ++i) {
      Vector c = Vector::Zero(n);
      c[i % n] = (i % 2 == 0) ? 1.0 : -1.0;
      centers.push_back(c);
    }
    return make_quadratic_oracle(n, d, centers);
  }
  if (name == "saddle") return make_saddle_problem(std::max(2, std::min(d, 10)), d);
  throw std::invalid_argument("unknown problem: " + name);
}

}  // namespace subtr
