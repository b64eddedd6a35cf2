#include "subtr/bench.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace subtr {

namespace {

std::string fp17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

SolveReport run_one(const std::string& algorithm,
                    const FiniteSumProblem& problem, const Vector& x0,
                    SolverParams params) {
  if (algorithm == "tr") {
    params.algorithm = Algorithm::kBaselineTr;
    return run_baseline_tr(problem, x0, params);
  }
  if (algorithm == "str") {
    params.algorithm = Algorithm::kSubsampledFirstOrder;
    return run_first_order(problem, x0, params);
  }
  if (algorithm == "str2") {
    params.algorithm = Algorithm::kSubsampledSecondOrder;
    return run_second_order(problem, x0, params);
  }
  throw std::invalid_argument("unknown algorithm: " + algorithm);
}

}  // namespace

BenchResult run_benchmark(const BenchConfig& config) {
  if (config.algorithms.empty())
    throw std::invalid_argument("need at least one algorithm");
  for (int d : config.sizes)
    if (d < 1) throw std::invalid_argument("sizes must be positive");

  BenchResult result;
  for (int d : config.sizes) {
    FiniteSumProblem problem = make_problem(config.problem, d);
    const Vector x0 = Vector::Ones(problem.n);

    BenchRow row;
    row.d = d;
    for (const auto& algorithm : config.algorithms) {
      SolveReport report = run_one(algorithm, problem, x0, config.params);
      if (!report.converged()) {
        row.failed = true;
        result.all_converged = false;
      }
      if (algorithm == "tr") row.cost_tr = report.cost;
      if (algorithm == "str") row.cost_str = report.cost;
      result.reports.emplace(algorithm + "_d" + std::to_string(d),
                             std::move(report));
    }
    if (row.cost_tr && row.cost_str && *row.cost_tr > 0.0)
      row.reduction_percent = static_cast<int>(
          std::lround(100.0 * (1.0 - *row.cost_str / *row.cost_tr)));
    result.rows.push_back(std::move(row));
  }
  return result;
}

void emit_trace_csv(const SolveReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "k,success,delta,j_k,sample_size_g,sample_size_h,f_value,"
         "full_grad_norm,rho,model_decrease,branch,cumulative_cost\n";
  for (const auto& r : report.records) {
    out << r.k << ',' << (r.success ? "true" : "false") << ','
        << fp17(r.delta) << ',';
    if (r.j_k) out << *r.j_k;
    out << ',' << r.sample_size_g << ',';
    if (r.sample_size_h) out << *r.sample_size_h;
    out << ',' << fp17(r.f_value) << ',' << fp17(r.full_grad_norm) << ','
        << fp17(r.rho) << ',' << fp17(r.model_decrease) << ','
        << to_string(r.branch) << ',' << fp17(r.cumulative_cost) << '\n';
  }
  if (!out) throw std::runtime_error("write failure on " + path);
}

void emit_report_json(const BenchConfig& config, const BenchResult& result,
                      const std::string& path) {
  nlohmann::ordered_json doc;
  doc["config"] = {
      {"problem", config.problem},
      {"sizes", config.sizes},
      {"algorithms", config.algorithms},
      {"eps_g", config.params.eps_g},
      {"eps_h", config.params.eps_h},
      {"gamma", config.params.gamma},
      {"alpha", config.params.alpha},
      {"delta0", config.params.delta0},
      {"delta_max", config.params.delta_max},
      {"kappa_eigen", config.params.kappa_eigen},
  };
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : result.rows) {
    nlohmann::ordered_json r;
    r["d"] = row.d;
    r["cost_tr"] = row.cost_tr ? nlohmann::ordered_json(*row.cost_tr)
                               : nlohmann::ordered_json(nullptr);
    r["cost_str"] = row.cost_str ? nlohmann::ordered_json(*row.cost_str)
                                 : nlohmann::ordered_json(nullptr);
    r["reduction_percent"] =
        row.reduction_percent ? nlohmann::ordered_json(*row.reduction_percent)
                              : nlohmann::ordered_json(nullptr);
    r["failed"] = row.failed;
    doc["rows"].push_back(std::move(r));
  }
  doc["runs"] = nlohmann::ordered_json::object();
  for (const auto& [key, report] : result.reports) {
    nlohmann::ordered_json r;
    r["termination"] = to_string(report.termination);
    r["hitting_index"] = report.hitting_index
                             ? nlohmann::ordered_json(*report.hitting_index)
                             : nlohmann::ordered_json(nullptr);
    r["fe_count"] = report.fe_count;
    r["ge_count"] = report.ge_count;
    r["he_count"] = report.he_count;
    r["cost"] = report.cost;
    r["iterations"] = report.records.size();
    doc["runs"][key] = std::move(r);
  }

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << doc.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failure on " + path);
}

std::string format_summary(const BenchResult& result) {
  std::ostringstream os;
  os << "d\tCost(TR)\tCost(STR)\tReduction\n";
  for (const auto& row : result.rows) {
    os << row.d << '\t';
    if (row.cost_tr) os << *row.cost_tr; else os << '-';
    os << '\t';
    if (row.cost_str) os << *row.cost_str; else os << '-';
    os << '\t';
    if (row.reduction_percent) os << *row.reduction_percent << '%';
    else os << '-';
    if (row.failed) os << "\t[FAILED]";
    os << '\n';
  }
  return os.str();
}

}  // namespace subtr
