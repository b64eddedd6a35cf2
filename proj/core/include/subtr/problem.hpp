#ifndef SUBTR_PROBLEM_HPP
#define SUBTR_PROBLEM_HPP

#include <Eigen/Core>

#include <functional>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace subtr {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Raised when a run breaks one of the solver's internal guarantees
/// (cardinality rule, decrease condition, inner-loop termination).
class invariant_violation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Constants of an oracle problem with analytically known structure.
/// All entries are valid bounds (possibly conservative) on the region
/// the solver traverses, so complexity formulas evaluated with them
/// are sound upper bounds.
struct KnownConstants {
  std::optional<double> lipschitz_gradient;  // L_g
  std::optional<double> lipschitz_hessian;   // L_H
  std::optional<double> stationary_spread;   // D_0
  std::optional<double> f_low;
};

/// Finite-sum objective f(x) = (1/d) sum_i f_i(x) given by its components.
struct FiniteSumProblem {
  int n = 0;  // dimension
  int d = 0;  // component count

  std::function<double(int, const Vector&)> component_value;
  std::function<Vector(int, const Vector&)> component_gradient;
  std::function<Matrix(int, const Vector&)> component_hessian;

  // For oracle problems only; depends on the start point through the
  // sublevel-set radius.
  std::function<KnownConstants(const Vector&)> constants_for_start;
};

/// Ordered subset of {1..d} produced by the cardinality rule.
/// Indices are 1-based and kept in selection order.
struct SampleSet {
  std::vector<int> indices;
  double fraction_h = 0.0;

  int cardinality() const { return static_cast<int>(indices.size()); }
};

/// Evaluation counters plus the per-point component-gradient memo.
/// FE = full function evaluations, GE = unique component gradient
/// evaluations, HE = component Hessian evaluations. The memo is keyed
/// by a point token owned by the driver; it is cleared exactly when
/// the token changes, so re-sampling at an unchanged iterate is free.
class EvaluationLedger {
 public:
  long fe_count() const { return fe_; }
  long ge_count() const { return ge_; }
  long he_count() const { return he_; }

  long point_token() const { return token_; }

  /// Driver call on iterate change; invalidates the gradient memo.
  void on_new_point(long token) {
    if (token != token_) {
      token_ = token;
      gradient_memo_.clear();
    }
  }

  void charge_full_value() { ++fe_; }

  /// Memoized component gradient at the current point. `i` is 1-based.
  const Vector& component_gradient(const FiniteSumProblem& problem, int i,
                                   const Vector& x) {
    auto it = gradient_memo_.find(i);
    if (it != gradient_memo_.end()) return it->second;
    ++ge_;
    auto [pos, inserted] =
        gradient_memo_.emplace(i, problem.component_gradient(i, x));
    return pos->second;
  }

  /// Component Hessians are not memoized; every call is charged.
  Matrix component_hessian(const FiniteSumProblem& problem, int i,
                           const Vector& x) {
    ++he_;
    return problem.component_hessian(i, x);
  }

  bool gradient_cached(int i) const { return gradient_memo_.count(i) > 0; }

 private:
  long fe_ = 0;
  long ge_ = 0;
  long he_ = 0;
  long token_ = 0;
  std::unordered_map<int, Vector> gradient_memo_;
};

/// ceil over the strictly positive integers: min{x in Z_++ : x >= z}.
/// Maps 0 to 1, so samples are never empty.
int ceil_pp(double z);

/// f(x) with all component values, summed in ascending index order.
/// Charges one FE.
struct FullValueResult {
  double value;
  std::vector<double> component_values;
};
FullValueResult full_value(const FiniteSumProblem& problem, const Vector& x,
                           EvaluationLedger& ledger);

/// Mean of component gradients over the sample, accumulated in
/// ascending index order; memoized components are not re-charged.
Vector sample_gradient(const FiniteSumProblem& problem, const SampleSet& sample,
                       const Vector& x, EvaluationLedger& ledger);

/// Mean of component Hessians over the sample, symmetrized.
Matrix sample_hessian(const FiniteSumProblem& problem, const SampleSet& sample,
                      const Vector& x, EvaluationLedger& ledger);

/// Uncounted side channel for stopping monitors.
double full_value_unc(const FiniteSumProblem& problem, const Vector& x);
Vector full_gradient_unc(const FiniteSumProblem& problem, const Vector& x);
Matrix full_hessian_unc(const FiniteSumProblem& problem, const Vector& x);

/// Benchmark objective: f_i(x) = (d - sum_j cos x_j + i(1 - cos x_i)
/// - sin x_i)^2 with n = d.
FiniteSumProblem make_trig_problem(int d);

/// Oracle with f_i(x) = 0.5*||x - c_i||^2; L_g = 1 and D_0, f_low
/// computable in closed form.
FiniteSumProblem make_quadratic_oracle(int n, int d,
                                       const std::vector<Vector>& centers);

/// Nonconvex oracle whose full Hessian at the origin has a negative
/// eigenvalue: f_i(x) = 0.5*x'A_i x + 0.25*||x||^4.
FiniteSumProblem make_saddle_problem(int n, int d);

/// Built-in problem lookup by name ("trig", "quadratic", "saddle").
FiniteSumProblem make_problem(const std::string& name, int d);

}  // namespace subtr

#endif  // SUBTR_PROBLEM_HPP
