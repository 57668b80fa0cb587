#pragma once

#include <stdexcept>
#include <vector>

#include "fictdisc/values.hpp"

namespace fictdisc {

inline double span(const Vec& j) { return j.maxCoeff() - j.minCoeff(); }

inline Vec max_reward_vector(const Mdp& m) { return m.r.rowwise().maxCoeff(); }

// [LJ]_s = max_a ( r(s,a) + p(.|s,a)·J ). Greedy ties go to the lowest
// action index.
inline Vec bellman_apply(const Mdp& m, const Vec& j, std::vector<int>* greedy = nullptr) {
  const int S = m.num_states, A = m.num_actions;
  if (j.size() != S) throw std::invalid_argument("bellman_apply: J has wrong length");
  Mat q(S, A);
  for (int a = 0; a < A; ++a) q.col(a) = m.r.col(a) + m.p[a] * j;
  Vec out(S);
  if (greedy) greedy->assign(S, 0);
  for (int s = 0; s < S; ++s) {
    int best = 0;
    for (int a = 1; a < A; ++a)
      if (q(s, a) > q(s, best)) best = a;
    out[s] = q(s, best);
    if (greedy) (*greedy)[s] = best;
  }
  return out;
}

struct FiniteHorizonSolution {
  double value = 0.0;      // V^{H,*}
  PolicySequence policy;   // greedy, possibly non-stationary; length H
};

// Exact H-step optimum by backward induction: J_{H-1} = max_a r, then H-1
// Bellman sweeps; V^{H,*} = rho·J / H. The greedy sequence is returned
// in forward time order and is never collapsed to a stationary policy.
inline FiniteHorizonSolution finite_horizon_optimal(const Mdp& m, int H) {
  if (H < 1) throw std::invalid_argument("finite_horizon_optimal: H must be >= 1");
  const int S = m.num_states, A = m.num_actions;
  FiniteHorizonSolution sol;
  sol.policy.resize(H);
  std::vector<int> greedy(S);
  Vec j(S);
  {
    Mat q = m.r;
    for (int s = 0; s < S; ++s) {
      int best = 0;
      for (int a = 1; a < A; ++a)
        if (q(s, a) > q(s, best)) best = a;
      greedy[s] = best;
      j[s] = q(s, best);
    }
  }
  sol.policy[H - 1] = deterministic_policy(S, A, greedy);
  for (int h = H - 2; h >= 0; --h) {
    j = bellman_apply(m, j, &greedy);
    sol.policy[h] = deterministic_policy(S, A, greedy);
  }
  sol.value = m.rho.dot(j) / H;
  return sol;
}

struct RviResult {
  double lo = 0.0;   // min_s [LJ - J]_s  <= eta*
  double hi = 0.0;   // eta* <= max_s [LJ - J]_s
  Policy greedy;
  int iterations = 0;
  std::vector<double> span_trace;  // sp(LJ_n - J_n) per sweep, J_0 = max_a r
};

// Relative value iteration for eta*. Each sweep subtracts J(s_0=0) to stop
// drift; the bracket [min, max] of LJ - J certifies eta* and shrinks by the
// span contraction of L. Returns when hi - lo <= tol.
inline RviResult relative_value_iteration(const Mdp& m, double tol = 1e-9, int max_iter = 100000) {
  const int S = m.num_states, A = m.num_actions;
  Vec j = max_reward_vector(m);
  RviResult res;
  std::vector<int> greedy(S, 0);
  for (int n = 0; n < max_iter; ++n) {
    const Vec lj = bellman_apply(m, j, &greedy);
    const Vec diff = lj - j;
    res.lo = diff.minCoeff();
    res.hi = diff.maxCoeff();
    res.span_trace.push_back(span(diff));
    res.iterations = n + 1;
    if (res.hi - res.lo <= tol) {
      res.greedy = deterministic_policy(S, A, greedy);
      return res;
    }
    j = lj.array() - lj[0];
  }
  throw std::runtime_error("relative_value_iteration: bracket width " + std::to_string(res.hi - res.lo) +
                           " after max_iter sweeps");
}

struct DiscountedSolution {
  double value = 0.0;   // V^{gamma,*} (normalized), exact policy evaluation of greedy
  Policy greedy;
  Vec visitation;       // d_rho under the greedy policy
  double bellman_residual = 0.0;  // optimality certificate for greedy
};

// Value iteration on the normalized Bellman operator, greedy extraction,
// then exact evaluation of the greedy policy. bellman_residual near zero
// certifies that the greedy policy is optimal, so `value` is exact up to
// the linear solve.
inline DiscountedSolution discounted_optimal(const Mdp& m, double gamma, double tol = 1e-10) {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("discounted_optimal: gamma must lie in [0, 1)");
  const int S = m.num_states, A = m.num_actions;
  Vec v = Vec::Zero(S);
  std::vector<int> greedy(S, 0);
  const double stop = std::max(tol * (1.0 - gamma) / 2.0, 1e-15);
  for (int it = 0; it < 1000000; ++it) {
    Mat q(S, A);
    for (int a = 0; a < A; ++a) q.col(a) = (1.0 - gamma) * m.r.col(a) + gamma * (m.p[a] * v);
    Vec nv(S);
    for (int s = 0; s < S; ++s) {
      int best = 0;
      for (int a = 1; a < A; ++a)
        if (q(s, a) > q(s, best)) best = a;
      greedy[s] = best;
      nv[s] = q(s, best);
    }
    const double delta = (nv - v).cwiseAbs().maxCoeff();
    v = nv;
    if (delta <= stop) break;
  }
  DiscountedSolution sol;
  sol.greedy = deterministic_policy(S, A, greedy);
  const QvaTables t = discounted_q_v_a(m, sol.greedy, gamma);
  sol.value = m.rho.dot(t.v);
  sol.visitation = discounted_visitation(m, sol.greedy, gamma);
  Vec lv(S);
  for (int s = 0; s < S; ++s) {
    double best = -1e300;
    for (int a = 0; a < A; ++a) best = std::max(best, (1.0 - gamma) * m.r(s, a) + gamma * m.p[a].row(s).dot(t.v));
    lv[s] = best;
  }
  sol.bellman_residual = (lv - t.v).cwiseAbs().maxCoeff();
  return sol;
}

}  // namespace fictdisc
