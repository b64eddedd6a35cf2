#include "subtr/sampling.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace subtr {

double fraction(const SampleSchedule& schedule, double delta, int j) {
  if (delta <= 0.0 || delta > schedule.delta_max)
    throw std::invalid_argument("delta outside (0, delta_max]");
  if (j < 0) throw std::invalid_argument("trial index must be nonnegative");
  const double gj = std::pow(schedule.gamma, j);
  switch (schedule.mode) {
    case ScheduleMode::kFirstOrder:
    case ScheduleMode::kSecondOrderHessian:
      return delta / (gj * schedule.delta_max);
    case ScheduleMode::kSecondOrderGradient: {
      const double r = delta / schedule.delta_max;
      return r * r / gj;
    }
  }
  throw std::logic_error("unreachable");
}

int required_cardinality(double h, int d) {
  if (h < 0.0 || h > 1.0) throw std::invalid_argument("h outside [0, 1]");
  if (d < 1) throw std::invalid_argument("d must be positive");
  return std::min(d, ceil_pp((1.0 - h) * d));
}

ComponentOrdering order_components(const std::vector<double>& component_values,
                                   long anchored_at) {
  ComponentOrdering ordering;
  ordering.anchored_at = anchored_at;
  ordering.permutation.resize(component_values.size());
  std::iota(ordering.permutation.begin(), ordering.permutation.end(), 1);
  std::stable_sort(ordering.permutation.begin(), ordering.permutation.end(),
                   [&](int a, int b) {
                     return component_values[a - 1] > component_values[b - 1];
                   });
  return ordering;
}

SampleSet select_prefix(const ComponentOrdering& ordering, int m, double h) {
  const int d = static_cast<int>(ordering.permutation.size());
  if (m < 1 || m > d) throw std::invalid_argument("prefix length out of range");
  SampleSet s;
  s.fraction_h = h;
  s.indices.assign(ordering.permutation.begin(),
                   ordering.permutation.begin() + m);
  return s;
}

namespace {

// Smallest j at which the schedule already forces the full sample,
// plus two spare trials. Exceeding this means the caller skipped the
// stopping check.
int trial_cap(const SampleSchedule& schedule, double delta, int d) {
  int j = 0;
  while (required_cardinality(fraction(schedule, delta, j), d) < d) {
    ++j;
    if (j > 10000) break;  // gamma > 1 makes this unreachable
  }
  return j + 2;
}

// Running prefix mean, extended component by component.
class PrefixGradientSum {
 public:
  PrefixGradientSum(const FiniteSumProblem& problem, const Vector& x,
                    const ComponentOrdering& ordering, EvaluationLedger& ledger)
      : problem_(problem), x_(x), ordering_(ordering), ledger_(ledger),
        sum_(Vector::Zero(problem.n)) {}

  Vector mean_at(int m) {
    while (count_ < m) {
      sum_ += ledger_.component_gradient(
          problem_, ordering_.permutation[count_], x_);
      ++count_;
    }
    return sum_ / m;
  }

 private:
  const FiniteSumProblem& problem_;
  const Vector& x_;
  const ComponentOrdering& ordering_;
  EvaluationLedger& ledger_;
  Vector sum_;
  int count_ = 0;
};

class PrefixHessianSum {
 public:
  PrefixHessianSum(const FiniteSumProblem& problem, const Vector& x,
                   const ComponentOrdering& ordering, EvaluationLedger& ledger)
      : problem_(problem), x_(x), ordering_(ordering), ledger_(ledger),
        sum_(Matrix::Zero(problem.n, problem.n)) {}

  Matrix mean_at(int m) {
    while (count_ < m) {
      sum_ += ledger_.component_hessian(
          problem_, ordering_.permutation[count_], x_);
      ++count_;
    }
    Matrix mean = sum_ / m;
    return 0.5 * (mean + mean.transpose());
  }

 private:
  const FiniteSumProblem& problem_;
  const Vector& x_;
  const ComponentOrdering& ordering_;
  EvaluationLedger& ledger_;
  Matrix sum_;
  int count_ = 0;
};

}  // namespace

FirstOrderInnerResult inner_loop_first_order(const FiniteSumProblem& problem,
                                             const Vector& x, double delta,
                                             const SampleSchedule& schedule,
                                             double eps_g,
                                             const ComponentOrdering& ordering,
                                             EvaluationLedger& ledger) {
  PrefixGradientSum running(problem, x, ordering, ledger);
  const int cap = trial_cap(schedule, delta, problem.d);
  for (int j = 0; j <= cap; ++j) {
    const double h = fraction(schedule, delta, j);
    const int m = required_cardinality(h, problem.d);
    Vector g = running.mean_at(m);
    if (g.norm() > 0.8 * eps_g) {
      FirstOrderInnerResult out;
      out.sample = select_prefix(ordering, m, h);
      out.gradient = std::move(g);
      out.j_k = j;
      return out;
    }
  }
  throw invariant_violation(
      "first-order inner loop failed at the full sample; the stopping test "
      "was skipped");
}

SecondOrderInnerResult inner_loop_second_order(
    const FiniteSumProblem& problem, const Vector& x, double delta,
    const SampleSchedule& schedule_g, const SampleSchedule& schedule_h,
    double eps_g, double eps_h, const ComponentOrdering& ordering,
    EvaluationLedger& ledger) {
  PrefixGradientSum running_g(problem, x, ordering, ledger);
  PrefixHessianSum running_h(problem, x, ordering, ledger);
  const int cap = std::max(trial_cap(schedule_g, delta, problem.d),
                           trial_cap(schedule_h, delta, problem.d));
  for (int j = 0; j <= cap; ++j) {
    const double h_g = fraction(schedule_g, delta, j);
    const double h_h = fraction(schedule_h, delta, j);
    const int m_g = required_cardinality(h_g, problem.d);
    const int m_h = required_cardinality(h_h, problem.d);

    Vector g = running_g.mean_at(m_g);
    if (g.norm() > 0.8 * eps_g) {
      // Hessian sample size is free here; tie it to the same trial's
      // Hessian fraction so accuracy tracks the radius either way.
      SecondOrderInnerResult out;
      out.gradient_sample = select_prefix(ordering, m_g, h_g);
      out.hessian_sample = select_prefix(ordering, m_h, h_h);
      out.gradient = std::move(g);
      out.hessian = running_h.mean_at(m_h);
      out.j_k = j;
      out.branch = Branch::kGradient;
      return out;
    }

    Matrix hess = running_h.mean_at(m_h);
    Eigen::SelfAdjointEigenSolver<Matrix> es(hess);
    if (-es.eigenvalues().minCoeff() > 0.8 * eps_h) {
      SecondOrderInnerResult out;
      out.gradient_sample = select_prefix(ordering, m_g, h_g);
      out.hessian_sample = select_prefix(ordering, m_h, h_h);
      out.gradient = std::move(g);
      out.hessian = std::move(hess);
      out.j_k = j;
      out.branch = Branch::kHessian;
      return out;
    }
  }
  throw invariant_violation(
      "second-order inner loop failed at the full sample; the stopping test "
      "was skipped");
}

}  // namespace subtr
