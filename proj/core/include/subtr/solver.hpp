#ifndef SUBTR_SOLVER_HPP
#define SUBTR_SOLVER_HPP

#include "subtr/bfgs.hpp"
#include "subtr/sampling.hpp"
#include "subtr/subproblem.hpp"

#include <optional>

namespace subtr {

enum class Algorithm { kBaselineTr, kSubsampledFirstOrder, kSubsampledSecondOrder };

struct SolverParams {
  double eps_g = 1e-5;
  double eps_h = 1e-4;     // second-order runs only
  double gamma = 1.1;
  double alpha = 1e-4;
  double delta0 = 1.0;
  double delta_max = 50.0;
  double kappa_eigen = 0.5;
  long max_iterations = 0;  // 0 -> 100 * d
  Algorithm algorithm = Algorithm::kSubsampledFirstOrder;
  // When false, the second-order stopping monitor computes the full
  // Hessian eigenvalue every iteration instead of only once the full
  // gradient is small.
  bool lazy_hessian_monitor = true;
};

struct IterationRecord {
  long k = 0;
  bool success = false;
  double delta = 0.0;
  std::optional<int> j_k;
  int sample_size_g = 0;
  std::optional<int> sample_size_h;
  double f_value = 0.0;
  double full_grad_norm = 0.0;  // monitor channel, uncounted
  double rho = 0.0;
  double model_decrease = 0.0;
  Branch branch = Branch::kNone;
  double cumulative_cost = 0.0;
};

enum class Termination { kConverged, kMaxIterations, kDegenerateModel };

struct SolveReport {
  std::optional<long> hitting_index;
  Termination termination = Termination::kMaxIterations;
  long fe_count = 0;
  long ge_count = 0;
  long he_count = 0;
  double cost = 0.0;  // FE * d + 3 * GE
  Vector final_point;
  std::vector<IterationRecord> records;

  bool converged() const { return termination == Termination::kConverged; }
};

/// rho = (f_old - f_new) / decrease; decrease must be positive.
double acceptance_ratio(double f_old, double f_new, double decrease);

/// min{2 delta, delta_max} on success, delta / 2 on failure.
double radius_update(double delta, bool success, double delta_max);

SolveReport run_first_order(const FiniteSumProblem& problem, const Vector& x0,
                            const SolverParams& params);
SolveReport run_second_order(const FiniteSumProblem& problem, const Vector& x0,
                             const SolverParams& params);
SolveReport run_baseline_tr(const FiniteSumProblem& problem, const Vector& x0,
                            const SolverParams& params);

const char* to_string(Branch b);
const char* to_string(Termination t);

}  // namespace subtr

#endif  // SUBTR_SOLVER_HPP
