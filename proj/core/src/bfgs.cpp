#include "subtr/bfgs.hpp"

#include "subtr/sampling.hpp"

#include <algorithm>
#include <unordered_map>

namespace subtr {

void bfgs_update(BfgsState& state, const Vector& s, const Vector& y) {
  if (s.size() != state.B.rows() || y.size() != state.B.rows())
    throw std::invalid_argument("bfgs_update dimension mismatch");

  const double sy = s.dot(y);
  if (sy <= 1e-12 * s.norm() * y.norm()) {
    state.last_update_skipped = true;
    return;
  }
  const Vector Bs = state.B * s;
  const double sBs = s.dot(Bs);
  if (sBs <= 0.0) {
    // Numerically lost definiteness; keep the previous matrix.
    state.last_update_skipped = true;
    return;
  }
  state.B += (y * y.transpose()) / sy - (Bs * Bs.transpose()) / sBs;
  state.B = 0.5 * (state.B + state.B.transpose()).eval();
  state.last_update_skipped = false;
}

SubsampledBfgs::SubsampledBfgs(int n, int d) : state_(n), d_(d) {
  if (d < 1) throw std::invalid_argument("component count must be positive");
}

void SubsampledBfgs::begin_point(const Vector& x,
                                 const ComponentOrdering& ordering) {
  current_.x = x;
  current_.prefix = ordering.permutation;
  current_.cumsum.clear();
}

void SubsampledBfgs::extend(PointData& p, const FiniteSumProblem& problem,
                            EvaluationLedger& ledger, int m) {
  while (static_cast<int>(p.cumsum.size()) < m) {
    const int idx = p.prefix[p.cumsum.size()];
    Vector g = ledger.component_gradient(problem, idx, p.x);
    if (p.cumsum.empty())
      p.cumsum.push_back(g);
    else
      p.cumsum.push_back(p.cumsum.back() + g);
    p.grads.push_back(std::move(g));
  }
}

// Gradient difference restricted to components sampled at both points.
// The orderings are recomputed per point, so the two m*-prefixes need
// not coincide; summing the difference over their intersection and
// rescaling by m* / |I| keeps the pair an unbiased secant of the
// partial-sum function without mixing mismatched component sets.
Vector SubsampledBfgs::intersection_secant(int mstar, int* overlap) const {
  std::unordered_map<int, int> prev_pos;
  prev_pos.reserve(mstar);
  for (int t = 0; t < mstar; ++t) prev_pos.emplace(previous_.prefix[t], t);

  Vector y = Vector::Zero(state_.B.rows());
  int count = 0;
  for (int t = 0; t < mstar; ++t) {
    const auto it = prev_pos.find(current_.prefix[t]);
    if (it == prev_pos.end()) continue;
    y += current_.grads[t] - previous_.grads[it->second];
    ++count;
  }
  *overlap = count;
  if (count > 0)
    y *= static_cast<double>(mstar) / (static_cast<double>(count) * d_);
  return y;
}

Matrix SubsampledBfgs::model_matrix(const FiniteSumProblem& problem,
                                    const Vector& x, int m,
                                    EvaluationLedger& ledger) {
  if (m < 1 || m > d_) throw std::invalid_argument("sample size out of range");
  extend(current_, problem, ledger, m);

  if (have_previous_) {
    const int mstar =
        std::min<int>(m, static_cast<int>(previous_.cumsum.size()));
    if (mstar > last_mstar_) {
      const Vector s = x - previous_.x;
      int overlap = 0;
      Vector y = intersection_secant(mstar, &overlap);
      if (overlap == 0)
        y = (current_.cumsum[mstar - 1] - previous_.cumsum[mstar - 1]) / d_;
      const double sy = s.dot(y);
      const double sBs = s.dot(state_.B * s);
      if (sy > 0.0 && sBs > 0.0) {
        const double shrink = std::min(1.0, sy / sBs);
        state_.B *= shrink;
      }
      bfgs_update(state_, s, y);
      if (!state_.last_update_skipped) any_update_ = true;
      last_mstar_ = mstar;
    }
  }

  if (!any_update_) return Matrix::Identity(state_.B.rows(), state_.B.rows());
  return (static_cast<double>(d_) / m) * state_.B;
}

void SubsampledBfgs::step_accepted() {
  previous_ = std::move(current_);
  have_previous_ = true;
  last_mstar_ = 0;
  current_ = PointData{};
}

}  // namespace subtr
