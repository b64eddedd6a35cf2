#include <doctest.h>

#include "subtr/bfgs.hpp"
#include "subtr/sampling.hpp"
#include "subtr/subproblem.hpp"

#include <Eigen/Cholesky>

#include <random>

using namespace subtr;

TEST_CASE("bfgs update satisfies the secant equation") {
  std::mt19937 rng(55);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    const int n = 6;
    BfgsState state(n);
    // Warm up with a couple of curvature-consistent pairs.
    for (int u = 0; u < 3; ++u) {
      Vector s(n), y(n);
      for (int i = 0; i < n; ++i) s[i] = g(rng);
      for (int i = 0; i < n; ++i) y[i] = g(rng);
      if (s.dot(y) <= 0) y = -y;
      if (s.dot(y) <= 0) continue;
      bfgs_update(state, s, y);
      if (!state.last_update_skipped) {
        CHECK((state.B * s - y).norm() <= 1e-10 * (1.0 + y.norm()));
      }
      // Positive definiteness is preserved.
      Eigen::LLT<Matrix> llt(state.B);
      CHECK(llt.info() == Eigen::Success);
    }
  }
}

TEST_CASE("bfgs safeguard leaves the matrix bit-identical") {
  BfgsState state(3);
  Vector s(3), y(3);
  s << 1.0, 0.0, 0.0;
  y << 2.0, 1.0, 0.0;
  bfgs_update(state, s, y);
  CHECK(!state.last_update_skipped);
  Matrix before = state.B;

  y << -1.0, 0.5, 0.0;  // s'y < 0: skip
  bfgs_update(state, s, y);
  CHECK(state.last_update_skipped);
  CHECK((state.B.array() == before.array()).all());

  y << 0.0, 3.0, 0.0;  // s'y = 0: also skip
  bfgs_update(state, s, y);
  CHECK(state.last_update_skipped);
  CHECK((state.B.array() == before.array()).all());

  Vector bad(2);
  CHECK_THROWS_AS(bfgs_update(state, bad, bad), std::invalid_argument);
}

TEST_CASE("subsampled curvature model starts at the identity") {
  auto p = make_problem("quadratic", 8);
  SubsampledBfgs model(p.n, p.d);
  EvaluationLedger ledger;
  Vector x = Vector::Ones(p.n);
  auto fv = full_value(p, x, ledger);
  auto ord = order_components(fv.component_values, 0);

  model.begin_point(x, ord);
  Matrix b = model.model_matrix(p, x, 3, ledger);
  CHECK((b - Matrix::Identity(p.n, p.n)).norm() == 0.0);
}

TEST_CASE("rescaled model matches sampled curvature along the step") {
  // Components 0.5||x - c_i||^2 have unit Hessians, so with a fixed
  // component ordering every matched-cardinality secant is exactly
  // y = (m*/d) s. A BFGS update always lands on s'B s = s'y, so the
  // rescaled model (d/m) B must show Rayleigh quotient m*/m along the
  // step that produced the latest pair, never more than 1.
  auto p = make_problem("quadratic", 10);
  SubsampledBfgs model(p.n, p.d);
  EvaluationLedger ledger;
  long token = 0;
  std::mt19937 rng(9);
  std::normal_distribution<double> g(0.0, 1.0);

  ComponentOrdering ord;
  ord.permutation.resize(p.d);
  std::iota(ord.permutation.begin(), ord.permutation.end(), 1);

  std::uniform_int_distribution<int> um(1, p.d);
  Vector x = Vector::Ones(p.n) * 2.0;
  Vector prev_x = x;
  int prev_avail = 0;
  int checked = 0;
  for (int step = 0; step < 30; ++step) {
    model.begin_point(x, ord);
    // Cardinality grows within a point, as in the solver (radius halves
    // on every failure before the next trial).
    int ms[3] = {um(rng), um(rng), um(rng)};
    std::sort(ms, ms + 3);
    for (int m : ms) {
      Matrix b = model.model_matrix(p, x, m, ledger);
      if (step > 0) {
        const Vector s = x - prev_x;
        const int mstar = std::min(m, prev_avail);
        CHECK(s.dot(b * s) / s.squaredNorm() ==
              doctest::Approx(static_cast<double>(mstar) / m).epsilon(1e-10));
        CHECK(s.dot(b * s) <= (1.0 + 1e-10) * s.squaredNorm());
        ++checked;
      }
    }
    model.step_accepted();
    prev_x = x;
    prev_avail = ms[2];
    ledger.on_new_point(++token);
    Vector dir(p.n);
    for (int i = 0; i < p.n; ++i) dir[i] = g(rng);
    x += 0.3 * dir;
  }
  CHECK(checked == 87);
}

TEST_CASE("subsampled curvature adds no gradient evaluations of its own") {
  auto p = make_trig_problem(9);
  SubsampledBfgs model(p.n, p.d);
  EvaluationLedger ledger;
  Vector x = Vector::Ones(p.n);
  auto fv = full_value(p, x, ledger);
  auto ord = order_components(fv.component_values, 0);

  // The inner loop pays for the prefix first...
  SampleSchedule sched;
  auto inner = inner_loop_first_order(p, x, 1.0, sched, 1e-5, ord, ledger);
  const long ge_before = ledger.ge_count();

  // ...and the curvature model reuses the memo exactly.
  model.begin_point(x, ord);
  model.model_matrix(p, x, inner.sample.cardinality(), ledger);
  CHECK(ledger.ge_count() == ge_before);
}
