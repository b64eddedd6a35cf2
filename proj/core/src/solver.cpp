#include "subtr/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace subtr {

namespace {

void validate(const SolverParams& p) {
  if (p.eps_g <= 0.0) throw std::invalid_argument("eps_g must be positive");
  if (p.gamma <= 1.0) throw std::invalid_argument("gamma must exceed 1");
  if (p.alpha <= 0.0 || p.alpha >= 1.0)
    throw std::invalid_argument("alpha must lie in (0, 1)");
  if (p.delta_max <= 0.0 || p.delta0 <= 0.0 || p.delta0 > p.delta_max)
    throw std::invalid_argument("need 0 < delta0 <= delta_max");
}

long effective_max_iterations(const SolverParams& p, int d) {
  return p.max_iterations > 0 ? p.max_iterations : 100L * d;
}

double ledger_cost(const EvaluationLedger& ledger, int d) {
  return static_cast<double>(ledger.fe_count()) * d +
         3.0 * static_cast<double>(ledger.ge_count());
}

// Certified upper bound on the spectral norm; exact for desk-scale n,
// row-sum bound beyond that so the per-iteration live assertion stays
// O(n^2) on the large benchmark instances.
double spectral_norm_upper(const Matrix& B) {
  if (B.rows() <= 512) return spectral_norm(B);
  const double inf_norm = B.cwiseAbs().rowwise().sum().maxCoeff();
  return std::min(inf_norm, B.norm());
}

double decrease_slack(double f0) { return 1e-12 * (1.0 + std::abs(f0)); }

}  // namespace

double acceptance_ratio(double f_old, double f_new, double decrease) {
  if (decrease <= decrease_slack(f_old))
    throw std::invalid_argument("degenerate model: nonpositive decrease");
  return (f_old - f_new) / decrease;
}

double radius_update(double delta, bool success, double delta_max) {
  if (delta <= 0.0 || delta > delta_max)
    throw std::invalid_argument("radius outside (0, delta_max]");
  return success ? std::min(2.0 * delta, delta_max) : 0.5 * delta;
}

const char* to_string(Branch b) {
  switch (b) {
    case Branch::kGradient: return "gradient";
    case Branch::kHessian: return "hessian";
    case Branch::kNone: return "";
  }
  return "";
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::kConverged: return "converged";
    case Termination::kMaxIterations: return "max_iterations";
    case Termination::kDegenerateModel: return "degenerate_model";
  }
  return "";
}

namespace {

SolveReport run_first_order_impl(const FiniteSumProblem& problem,
                                 const Vector& x0, const SolverParams& params,
                                 bool subsampled) {
  validate(params);
  const int d = problem.d;
  const long max_iter = effective_max_iterations(params, d);

  EvaluationLedger ledger;
  long token = 0;
  Vector x = x0;
  auto fv = full_value(problem, x, ledger);
  double f_k = fv.value;
  std::vector<double> comps = std::move(fv.component_values);

  SampleSchedule schedule{params.gamma, params.delta_max,
                          ScheduleMode::kFirstOrder};
  SampleSet full_set;
  full_set.fraction_h = 0.0;
  full_set.indices.resize(d);
  std::iota(full_set.indices.begin(), full_set.indices.end(), 1);

  BfgsState bfgs(problem.n);            // baseline: consecutive pairs
  SubsampledBfgs curvature(problem.n, problem.d);
  ComponentOrdering ordering;
  bool prev_success = false;
  Vector prev_x, prev_g;

  double delta = params.delta0;
  SolveReport report;

  for (long k = 0; k < max_iter; ++k) {
    const double grad_norm = full_gradient_unc(problem, x).norm();
    if (grad_norm <= params.eps_g) {
      report.hitting_index = k;
      report.termination = Termination::kConverged;
      break;
    }

    SampleSet sample;
    Vector g;
    std::optional<int> j_k;
    Matrix B;
    if (subsampled) {
      if (k == 0 || prev_success) {
        ordering = order_components(comps, k);
        curvature.begin_point(x, ordering);
      }
      auto inner = inner_loop_first_order(problem, x, delta, schedule,
                                          params.eps_g, ordering, ledger);
      sample = std::move(inner.sample);
      g = std::move(inner.gradient);
      j_k = inner.j_k;
      B = curvature.model_matrix(problem, x, sample.cardinality(), ledger);
    } else {
      sample = full_set;
      g = sample_gradient(problem, sample, x, ledger);
      if (k >= 1) bfgs_update(bfgs, x - prev_x, g - prev_g);
      B = bfgs.B;
    }

    ModelSpec model{g, B, delta, f_k};
    Vector step;
    if (auto dl = dogleg(model))
      step = std::move(*dl);
    else
      step = cauchy_point(model);

    if (!verify_first_order(model, step, spectral_norm_upper(model.B)))
      throw invariant_violation("first-order decrease condition violated");

    const double decrease = model_decrease(model, step);
    if (decrease <= decrease_slack(f_k)) {
      report.termination = Termination::kDegenerateModel;
      break;
    }
    auto trial = full_value(problem, x + step, ledger);
    const double rho = acceptance_ratio(f_k, trial.value, decrease);
    const bool success = rho >= params.alpha;

    prev_x = x;
    prev_g = g;

    IterationRecord rec;
    rec.k = k;
    rec.success = success;
    rec.delta = delta;
    rec.j_k = j_k;
    rec.sample_size_g = sample.cardinality();
    rec.f_value = f_k;
    rec.full_grad_norm = grad_norm;
    rec.rho = rho;
    rec.model_decrease = decrease;
    rec.cumulative_cost = ledger_cost(ledger, d);
    report.records.push_back(rec);

    if (success) {
      x += step;
      ledger.on_new_point(++token);
      f_k = trial.value;
      comps = std::move(trial.component_values);
      if (subsampled) curvature.step_accepted();
    }
    delta = radius_update(delta, success, params.delta_max);
    prev_success = success;
  }

  report.fe_count = ledger.fe_count();
  report.ge_count = ledger.ge_count();
  report.he_count = ledger.he_count();
  report.cost = ledger_cost(ledger, d);
  report.final_point = x;
  return report;
}

}  // namespace

SolveReport run_first_order(const FiniteSumProblem& problem, const Vector& x0,
                            const SolverParams& params) {
  if (params.algorithm != Algorithm::kSubsampledFirstOrder)
    throw std::invalid_argument("params.algorithm mismatch");
  return run_first_order_impl(problem, x0, params, /*subsampled=*/true);
}

SolveReport run_baseline_tr(const FiniteSumProblem& problem, const Vector& x0,
                            const SolverParams& params) {
  if (params.algorithm != Algorithm::kBaselineTr)
    throw std::invalid_argument("params.algorithm mismatch");
  return run_first_order_impl(problem, x0, params, /*subsampled=*/false);
}

SolveReport run_second_order(const FiniteSumProblem& problem, const Vector& x0,
                             const SolverParams& params) {
  if (params.algorithm != Algorithm::kSubsampledSecondOrder)
    throw std::invalid_argument("params.algorithm mismatch");
  validate(params);
  if (params.eps_h <= 0.0) throw std::invalid_argument("eps_h must be positive");

  const int d = problem.d;
  const long max_iter = effective_max_iterations(params, d);

  EvaluationLedger ledger;
  long token = 0;
  Vector x = x0;
  auto fv = full_value(problem, x, ledger);
  double f_k = fv.value;
  std::vector<double> comps = std::move(fv.component_values);

  SampleSchedule schedule_g{params.gamma, params.delta_max,
                            ScheduleMode::kSecondOrderGradient};
  SampleSchedule schedule_h{params.gamma, params.delta_max,
                            ScheduleMode::kSecondOrderHessian};

  ComponentOrdering ordering;
  bool prev_success = false;
  double delta = params.delta0;
  SolveReport report;

  for (long k = 0; k < max_iter; ++k) {
    const double grad_norm = full_gradient_unc(problem, x).norm();
    bool stationary = false;
    if (grad_norm <= params.eps_g || !params.lazy_hessian_monitor) {
      const double lam = smallest_eigenvalue(full_hessian_unc(problem, x));
      stationary = grad_norm <= params.eps_g && lam >= -params.eps_h;
    }
    if (stationary) {
      report.hitting_index = k;
      report.termination = Termination::kConverged;
      break;
    }

    if (k == 0 || prev_success) ordering = order_components(comps, k);
    auto inner = inner_loop_second_order(problem, x, delta, schedule_g,
                                         schedule_h, params.eps_g,
                                         params.eps_h, ordering, ledger);

    ModelSpec model{inner.gradient, inner.hessian, delta, f_k};
    Vector step;
    try {
      step = solve_second_order(model);
    } catch (const std::invalid_argument&) {
      report.termination = Termination::kDegenerateModel;
      break;
    }
    if (!verify_second_order(model, step, params.kappa_eigen))
      throw invariant_violation("second-order decrease condition violated");

    const double decrease = model_decrease(model, step);
    if (decrease <= decrease_slack(f_k)) {
      report.termination = Termination::kDegenerateModel;
      break;
    }
    auto trial = full_value(problem, x + step, ledger);
    const double rho = acceptance_ratio(f_k, trial.value, decrease);
    const bool success = rho >= params.alpha;

    IterationRecord rec;
    rec.k = k;
    rec.success = success;
    rec.delta = delta;
    rec.j_k = inner.j_k;
    rec.sample_size_g = inner.gradient_sample.cardinality();
    rec.sample_size_h = inner.hessian_sample.cardinality();
    rec.f_value = f_k;
    rec.full_grad_norm = grad_norm;
    rec.rho = rho;
    rec.model_decrease = decrease;
    rec.branch = inner.branch;
    rec.cumulative_cost = ledger_cost(ledger, d);
    report.records.push_back(rec);

    if (success) {
      x += step;
      ledger.on_new_point(++token);
      f_k = trial.value;
      comps = std::move(trial.component_values);
    }
    delta = radius_update(delta, success, params.delta_max);
    prev_success = success;
  }

  report.fe_count = ledger.fe_count();
  report.ge_count = ledger.ge_count();
  report.he_count = ledger.he_count();
  report.cost = ledger_cost(ledger, d);
  report.final_point = x;
  return report;
}

}  // namespace subtr
