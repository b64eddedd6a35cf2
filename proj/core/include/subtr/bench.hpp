#ifndef SUBTR_BENCH_HPP
#define SUBTR_BENCH_HPP

#include "subtr/solver.hpp"

#include <map>
#include <string>

namespace subtr {

struct BenchConfig {
  std::string problem = "trig";
  std::vector<int> sizes = {100, 500, 1000, 3000};
  // Algorithm keys: "tr", "str", "str2".
  std::vector<std::string> algorithms = {"tr", "str"};
  SolverParams params;
};

struct BenchRow {
  int d = 0;
  std::optional<double> cost_tr;
  std::optional<double> cost_str;
  std::optional<int> reduction_percent;  // round(100 (1 - str/tr))
  bool failed = false;
};

struct BenchResult {
  std::vector<BenchRow> rows;
  // Keyed by "<algorithm>_d<size>".
  std::map<std::string, SolveReport> reports;
  bool all_converged = true;
};

/// Runs every configured algorithm on every size from x0 = (1,...,1).
BenchResult run_benchmark(const BenchConfig& config);

/// One CSV row per iteration; floating-point fields use 17 significant
/// digits and absent fields stay empty.
void emit_trace_csv(const SolveReport& report, const std::string& path);

/// Machine-readable summary with stable key order.
void emit_report_json(const BenchConfig& config, const BenchResult& result,
                      const std::string& path);

/// Table-style summary for stdout.
std::string format_summary(const BenchResult& result);

}  // namespace subtr

#endif  // SUBTR_BENCH_HPP
