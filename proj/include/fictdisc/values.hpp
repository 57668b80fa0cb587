#pragma once

#include <stdexcept>
#include <string>

#include "fictdisc/mdp.hpp"

namespace fictdisc {

enum class Setting { FiniteHorizon, Discounted, Average };

struct ValueReport {
  double value = 0.0;
  Setting setting = Setting::Average;
  int horizon = 0;     // finite-horizon only
  double gamma = 0.0;  // discounted only
};

// P_pi(s, s') = sum_a p(s'|s,a) pi(a|s).
inline Mat transition_matrix(const Mdp& m, const Policy& pi) {
  validate_policy(pi, m);
  Mat P = Mat::Zero(m.num_states, m.num_states);
  for (int a = 0; a < m.num_actions; ++a) P += pi.probs.col(a).asDiagonal() * m.p[a];
  return P;
}

// r_pi(s) = sum_a pi(a|s) r(s,a).
inline Vec policy_reward(const Mdp& m, const Policy& pi) {
  return (pi.probs.cwiseProduct(m.r)).rowwise().sum();
}

// Unique stationary distribution of an ergodic chain, via the augmented
// least-squares system [P^T - I; 1^T] mu = [0; 1]. A large residual or a
// non-positive component signals a broken ergodicity assumption.
inline Vec stationary_distribution(const Mat& P) {
  const int S = int(P.rows());
  if (P.cols() != S) throw std::invalid_argument("stationary_distribution: square matrix required");
  Mat A(S + 1, S);
  A.topRows(S) = P.transpose() - Mat::Identity(S, S);
  A.bottomRows(1).setOnes();
  Vec b = Vec::Zero(S + 1);
  b[S] = 1.0;
  Vec mu = A.colPivHouseholderQr().solve(b);
  const double residual = ((P.transpose() * mu) - mu).cwiseAbs().maxCoeff();
  if (!mu.allFinite() || residual > 1e-10)
    throw std::runtime_error("stationary_distribution: solve residual " + std::to_string(residual) +
                             " (irreducible+aperiodic chain expected)");
  if (mu.minCoeff() <= 0.0)
    throw std::runtime_error("stationary_distribution: non-positive component (irreducible+aperiodic chain expected)");
  return mu;
}

inline Vec stationary_distribution(const Mdp& m, const Policy& pi) {
  return stationary_distribution(transition_matrix(m, pi));
}

// Mean reward per step over an H-step episode, by exact forward propagation
// of the state distribution. No sampling.
inline ValueReport finite_horizon_value(const Mdp& m, const PolicySequence& seq, int H) {
  if (H < 1) throw std::invalid_argument("finite_horizon_value: H must be >= 1");
  if (int(seq.size()) != H) throw std::invalid_argument("finite_horizon_value: policy sequence length must equal H");
  Vec dist = m.rho;
  double total = 0.0;
  for (int h = 0; h < H; ++h) {
    validate_policy(seq[h], m);
    total += dist.dot(policy_reward(m, seq[h]));
    if (h + 1 < H) dist = transition_matrix(m, seq[h]).transpose() * dist;
  }
  return {total / H, Setting::FiniteHorizon, H, 0.0};
}

inline ValueReport finite_horizon_value(const Mdp& m, const Policy& pi, int H) {
  if (H < 1) throw std::invalid_argument("finite_horizon_value: H must be >= 1");
  validate_policy(pi, m);
  const Mat P = transition_matrix(m, pi);
  const Vec r_pi = policy_reward(m, pi);
  Vec dist = m.rho;
  double total = 0.0;
  for (int h = 0; h < H; ++h) {
    total += dist.dot(r_pi);
    if (h + 1 < H) dist = P.transpose() * dist;
  }
  return {total / H, Setting::FiniteHorizon, H, 0.0};
}

// (1-gamma)-normalized infinite-horizon discounted value, by direct solve:
// V = (1-gamma) rho' (I - gamma P)^{-1} r_pi.
inline ValueReport discounted_value(const Mdp& m, const Policy& pi, double gamma) {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("discounted_value: gamma must lie in [0, 1)");
  const Mat P = transition_matrix(m, pi);
  const Vec r_pi = policy_reward(m, pi);
  const int S = m.num_states;
  Vec x = (Mat::Identity(S, S) - gamma * P).partialPivLu().solve(r_pi);
  return {(1.0 - gamma) * m.rho.dot(x), Setting::Discounted, 0, gamma};
}

// Long-run reward per step of the induced ergodic chain.
inline ValueReport average_reward(const Mdp& m, const Policy& pi) {
  const Vec mu = stationary_distribution(m, pi);
  return {mu.dot(policy_reward(m, pi)), Setting::Average, 0, 0.0};
}

struct QvaTables {
  Mat q;    // S×A
  Vec v;    // S
  Mat adv;  // S×A, advantage q - v
};

// Normalized discounted tables: V solves V = (1-g) r_pi + g P V,
// Q(s,a) = (1-g) r(s,a) + g p(.|s,a)·V, A = Q - V. Note the (1-gamma)
// prefactor; the un-normalized per-step variant is truncated_discounted_q.
inline QvaTables discounted_q_v_a(const Mdp& m, const Policy& pi, double gamma) {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("discounted_q_v_a: gamma must lie in [0, 1)");
  const int S = m.num_states, A = m.num_actions;
  const Mat P = transition_matrix(m, pi);
  const Vec r_pi = policy_reward(m, pi);
  QvaTables t;
  t.v = (Mat::Identity(S, S) - gamma * P).partialPivLu().solve((1.0 - gamma) * r_pi);
  t.q = Mat::Zero(S, A);
  for (int a = 0; a < A; ++a) t.q.col(a) = (1.0 - gamma) * m.r.col(a) + gamma * (m.p[a] * t.v);
  t.adv = t.q - t.v.replicate(1, A);
  return t;
}

struct BiasTables {
  Mat q;    // S×A
  Vec v;    // S, mu-weighted mean zero
  Mat adv;  // S×A
  double eta = 0.0;
};

// Deviation matrix of an ergodic chain: Y = (I - P + 1 mu')^{-1} - 1 mu',
// the Abel/Cesaro sum of (P^h - P^inf). Satisfies Y 1 = 0 and mu' Y = 0.
inline Mat deviation_matrix(const Mat& P) {
  const int S = int(P.rows());
  const Vec mu = stationary_distribution(P);
  const Mat Pinf = Vec::Ones(S) * mu.transpose();
  Mat Y = (Mat::Identity(S, S) - P + Pinf).partialPivLu().solve(Mat::Identity(S, S)) - Pinf;
  if (!Y.allFinite()) throw std::runtime_error("deviation_matrix: singular solve");
  const double null_resid = std::max((Y * Vec::Ones(S)).cwiseAbs().maxCoeff(), (mu.transpose() * Y).cwiseAbs().maxCoeff());
  if (null_resid > 1e-10) throw std::runtime_error("deviation_matrix: null-space residual " + std::to_string(null_resid));
  return Y;
}

// Average-reward bias tables. Qbar(s,a) = r(s,a) - eta + p(.|s,a)·(Y r_pi);
// Vbar = Y r_pi is its policy average and has mu-weighted mean zero.
inline BiasTables bias_q_v_a(const Mdp& m, const Policy& pi) {
  const int S = m.num_states, A = m.num_actions;
  const Mat P = transition_matrix(m, pi);
  const Vec r_pi = policy_reward(m, pi);
  const Vec mu = stationary_distribution(P);
  const Mat Y = deviation_matrix(P);
  BiasTables t;
  t.eta = mu.dot(r_pi);
  t.v = Y * r_pi;
  t.q = Mat::Zero(S, A);
  for (int a = 0; a < A; ++a) t.q.col(a) = m.r.col(a).array() - t.eta + (m.p[a] * t.v).array();
  t.adv = t.q - t.v.replicate(1, A);
  return t;
}

// Discounted state visitation d = (1-gamma) rho' (I - gamma P)^{-1}.
inline Vec discounted_visitation(const Mdp& m, const Policy& pi, double gamma) {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("discounted_visitation: gamma must lie in [0, 1)");
  const int S = m.num_states;
  const Mat P = transition_matrix(m, pi);
  Vec d = (Mat::Identity(S, S) - gamma * P).transpose().partialPivLu().solve((1.0 - gamma) * m.rho);
  return d;
}

// w^H(s) = (1/H) sum_{h<H} [rho P^h]_s.
inline Vec finite_horizon_occupancy(const Mdp& m, const Policy& pi, int H) {
  if (H < 1) throw std::invalid_argument("finite_horizon_occupancy: H must be >= 1");
  const Mat Pt = transition_matrix(m, pi).transpose();
  Vec dist = m.rho;
  Vec acc = Vec::Zero(m.num_states);
  for (int h = 0; h < H; ++h) {
    acc += dist;
    if (h + 1 < H) dist = Pt * dist;
  }
  return acc / H;
}

// q_h(s,a) = E[sum_{h'=h}^{H-1} gamma^{h'-h} r_{h'} | s_h = s, a_h = a] under
// a stationary policy, by backward recursion over the H-h remaining steps.
// This is the un-normalized return target inside the sampled estimators.
inline Mat truncated_discounted_q(const Mdp& m, const Policy& pi, double gamma, int H, int h) {
  if (!(h >= 0 && h < H)) throw std::invalid_argument("truncated_discounted_q: need 0 <= h < H");
  const int A = m.num_actions;
  Mat q = m.r;  // one remaining step
  for (int step = 0; step < H - h - 1; ++step) {
    const Vec q_pi = (pi.probs.cwiseProduct(q)).rowwise().sum();
    Mat next(m.num_states, A);
    for (int a = 0; a < A; ++a) next.col(a) = m.r.col(a) + gamma * (m.p[a] * q_pi);
    q = next;
  }
  return q;
}

}  // namespace fictdisc
