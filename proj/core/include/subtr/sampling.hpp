#ifndef SUBTR_SAMPLING_HPP
#define SUBTR_SAMPLING_HPP

#include "subtr/problem.hpp"

#include <optional>

namespace subtr {

enum class ScheduleMode {
  kFirstOrder,            // h = Delta / (gamma^j Delta_max)
  kSecondOrderGradient,   // h = (Delta / Delta_max)^2 / gamma^j
  kSecondOrderHessian,    // h = Delta / (gamma^j Delta_max)
};

/// Deterministic sample-fraction schedule; fractions shrink strictly
/// in the trial index j, so the required cardinality grows.
struct SampleSchedule {
  double gamma = 1.1;
  double delta_max = 50.0;
  ScheduleMode mode = ScheduleMode::kFirstOrder;
};

/// Nonincreasing ordering of component values at the anchoring point,
/// ties broken by ascending component index.
struct ComponentOrdering {
  std::vector<int> permutation;  // 1-based component indices
  long anchored_at = 0;          // iteration index where it was computed
};

double fraction(const SampleSchedule& schedule, double delta, int j);

/// ceil_pp((1 - h) * d): d at h = 0, 1 at h = 1, nonincreasing in h.
int required_cardinality(double h, int d);

ComponentOrdering order_components(const std::vector<double>& component_values,
                                   long anchored_at);

/// First m entries of the permutation; prefixes are nested in m.
SampleSet select_prefix(const ComponentOrdering& ordering, int m, double h);

/// Ordering enum kept for experimentation; only value ordering matches
/// the published selection rule.
enum class OrderingRule { kComponentValue };

struct FirstOrderInnerResult {
  SampleSet sample;
  Vector gradient;
  int j_k = 0;
};

/// Inner sampling loop of the first-order method: grows the prefix
/// sample until ||grad_G|| > 4 eps_g / 5. Caller must have verified
/// ||grad f(x)|| > eps_g, which guarantees the full-sample trial
/// passes.
FirstOrderInnerResult inner_loop_first_order(const FiniteSumProblem& problem,
                                             const Vector& x, double delta,
                                             const SampleSchedule& schedule,
                                             double eps_g,
                                             const ComponentOrdering& ordering,
                                             EvaluationLedger& ledger);

enum class Branch { kGradient, kHessian, kNone };

struct SecondOrderInnerResult {
  SampleSet gradient_sample;
  SampleSet hessian_sample;
  Vector gradient;
  Matrix hessian;
  int j_k = 0;
  Branch branch = Branch::kGradient;
};

/// Inner sampling loop of the second-order method. At each trial j the
/// gradient test is tried first; on failure the Hessian negative-
/// curvature test is tried with its own fraction. Caller must have
/// verified x is not (eps_g, eps_H)-stationary in full derivatives.
SecondOrderInnerResult inner_loop_second_order(
    const FiniteSumProblem& problem, const Vector& x, double delta,
    const SampleSchedule& schedule_g, const SampleSchedule& schedule_h,
    double eps_g, double eps_h, const ComponentOrdering& ordering,
    EvaluationLedger& ledger);

}  // namespace subtr

#endif  // SUBTR_SAMPLING_HPP
