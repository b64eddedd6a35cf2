#include <doctest.h>

#include "subtr/bench.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

using namespace subtr;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("/tmp/subtr_test_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("benchmark runs both solvers and reports reductions") {
  BenchConfig cfg;
  cfg.sizes = {30};
  auto result = run_benchmark(cfg);
  CHECK(result.all_converged);
  REQUIRE(result.rows.size() == 1);
  const auto& row = result.rows[0];
  CHECK(row.d == 30);
  REQUIRE(row.cost_tr.has_value());
  REQUIRE(row.cost_str.has_value());
  REQUIRE(row.reduction_percent.has_value());
  const int expect =
      static_cast<int>(std::lround(100.0 * (1.0 - *row.cost_str / *row.cost_tr)));
  CHECK(*row.reduction_percent == expect);
  CHECK(result.reports.count("tr_d30") == 1);
  CHECK(result.reports.count("str_d30") == 1);
}

TEST_CASE("trace CSV shape and round-trip precision") {
  BenchConfig cfg;
  cfg.sizes = {20};
  cfg.algorithms = {"str"};
  auto result = run_benchmark(cfg);
  const auto& report = result.reports.at("str_d20");

  TempFile tmp("trace.csv");
  emit_trace_csv(report, tmp.path);
  std::ifstream in(tmp.path);
  std::string header;
  std::getline(in, header);
  CHECK(header ==
        "k,success,delta,j_k,sample_size_g,sample_size_h,f_value,"
        "full_grad_norm,rho,model_decrease,branch,cumulative_cost");

  size_t rows = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++rows;
    // f_value is the 7th field; 17 significant digits must round-trip.
    std::istringstream ls(line);
    std::string field;
    for (int i = 0; i < 7; ++i) std::getline(ls, field, ',');
    const double parsed = std::stod(field);
    CHECK(parsed == report.records[rows - 1].f_value);
  }
  CHECK(rows == report.records.size());
}

TEST_CASE("report JSON carries config and per-run summaries") {
  BenchConfig cfg;
  cfg.sizes = {20};
  auto result = run_benchmark(cfg);
  TempFile tmp("report.json");
  emit_report_json(cfg, result, tmp.path);
  const std::string text = slurp(tmp.path);
  CHECK(text.find("\"problem\": \"trig\"") != std::string::npos);
  CHECK(text.find("\"tr_d20\"") != std::string::npos);
  CHECK(text.find("\"str_d20\"") != std::string::npos);
  CHECK(text.find("\"cost\"") != std::string::npos);
  CHECK(text.find("\"reduction_percent\"") != std::string::npos);
}

TEST_CASE("benchmark outputs are byte-identical across invocations") {
  BenchConfig cfg;
  cfg.sizes = {25};
  TempFile csv1("det1.csv"), csv2("det2.csv");
  TempFile json1("det1.json"), json2("det2.json");

  auto r1 = run_benchmark(cfg);
  emit_trace_csv(r1.reports.at("str_d25"), csv1.path);
  emit_report_json(cfg, r1, json1.path);

  auto r2 = run_benchmark(cfg);
  emit_trace_csv(r2.reports.at("str_d25"), csv2.path);
  emit_report_json(cfg, r2, json2.path);

  CHECK(slurp(csv1.path) == slurp(csv2.path));
  CHECK(slurp(json1.path) == slurp(json2.path));
}

TEST_CASE("summary table prints one line per size") {
  BenchConfig cfg;
  cfg.sizes = {20};
  auto result = run_benchmark(cfg);
  const std::string s = format_summary(result);
  CHECK(s.find("20") != std::string::npos);
  CHECK(s.find("Cost") != std::string::npos);
}
