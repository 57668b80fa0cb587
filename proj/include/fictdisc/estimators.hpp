#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "fictdisc/mixing.hpp"
#include "fictdisc/rng.hpp"
#include "fictdisc/softmax.hpp"
#include "fictdisc/values.hpp"

namespace fictdisc {

struct Trajectory {
  std::vector<int> states;
  std::vector<int> actions;
  std::vector<double> rewards;

  int horizon() const { return int(states.size()); }
};

enum class EstimatorKind { Dae, Dd };

struct EstimatorConfig {
  double gamma = 0.9;
  double beta = 0.5;   // truncation fraction; used by the DAE estimator only
  int N = 1;           // batch size
  int H = 16;          // trajectory horizon
  Vec baseline;        // per-state offset b(s); empty means b == 0
  double baseline_bound = 0.0;  // B with max_s |b(s)| <= B

  double b(int s) const { return baseline.size() ? baseline[s] : 0.0; }
};

// floor(beta * H) with a nudge for binary representation of beta.
inline int truncation_steps(double beta, int H) { return int(std::floor(beta * H + 1e-9)); }

inline void validate_estimator_config(const EstimatorConfig& cfg, const Mdp& m) {
  if (!(cfg.gamma >= 0.0 && cfg.gamma < 1.0)) throw std::invalid_argument("estimator: gamma must lie in [0, 1)");
  if (!(cfg.beta > 0.0 && cfg.beta < 1.0)) throw std::invalid_argument("estimator: beta must lie in (0, 1)");
  if (cfg.N < 1) throw std::invalid_argument("estimator: N must be >= 1");
  if (cfg.H < 1) throw std::invalid_argument("estimator: H must be >= 1");
  if (cfg.baseline.size() && cfg.baseline.size() != m.num_states)
    throw std::invalid_argument("estimator: baseline has wrong length");
  if (cfg.baseline.size() && cfg.baseline.cwiseAbs().maxCoeff() > cfg.baseline_bound + 1e-12)
    throw std::invalid_argument("estimator: baseline exceeds its stated bound B");
}

struct GradEstimate {
  Mat g;
  int batch_size = 0;
  std::uint64_t seed = 0;
};

// Almost-sure norm bounds of the two estimators (r_max = 1):
//   ||g_dae|| <= G_gamma + 2 lambda,  G_gamma = 2(1 + (1-g)B)/(1-g)
//   ||g_dd||  <= G + 2 lambda,        G       = 2(1 + B(1-g))/(1-g)^2
inline double dae_grad_const(double gamma, double B) { return 2.0 * (1.0 + (1.0 - gamma) * B) / (1.0 - gamma); }
inline double dd_grad_const(double gamma, double B) {
  return 2.0 * (1.0 + B * (1.0 - gamma)) / ((1.0 - gamma) * (1.0 - gamma));
}

// Gbar = 4 (1 + C/(1-alpha)); bounds the exact average-objective gradient.
inline double average_grad_const(const MixingConstants& mix) { return 4.0 * (1.0 + mix.C / (1.0 - mix.alpha)); }

// Bias bound of the truncated DAE estimator against the average objective
// gradient (r_max = 1):
//   16C/(bH (1-a)) (1 + C/(1-a)) + 8C (1-g)/(1-a)^2 + 4 g^{(1-b)H} (1 + C/(1-a))
inline double dae_bias_bound(const MixingConstants& mix, double gamma, int H, double beta) {
  const int bh = truncation_steps(beta, H);
  if (bh < 1) throw std::invalid_argument("dae_bias_bound: floor(beta*H) must be >= 1");
  const double e = mix.C / (1.0 - mix.alpha);
  return 16.0 * e / bh * (1.0 + e) + 8.0 * mix.C * (1.0 - gamma) / ((1.0 - mix.alpha) * (1.0 - mix.alpha)) +
         4.0 * std::pow(gamma, (1.0 - beta) * H) * (1.0 + e);
}

// Bias bound of the doubly discounted estimator against the discounted
// objective gradient: Delta = 2 g^H/(1-g) (H + 1/(1-g)).
inline double dd_bias_bound(double gamma, int H) {
  return 2.0 * std::pow(gamma, H) / (1.0 - gamma) * (H + 1.0 / (1.0 - gamma));
}

// Second-moment constants: Mbar = 2 Delta_bar^2 + (G_gamma + 2 lambda)^2 / N
// and M = 2 Delta^2 + (G + 2 lambda)^2 / N.
inline double second_moment_const(double bias_bound, double grad_const, double lambda, int N) {
  const double gl = grad_const + 2.0 * lambda;
  return 2.0 * bias_bound * bias_bound + gl * gl / N;
}

// ---------------------------------------------------------------------------

inline Trajectory sample_trajectory(const Mdp& m, const Policy& pi, int H, Rng& rng) {
  if (H < 1) throw std::invalid_argument("sample_trajectory: H must be >= 1");
  Trajectory t;
  t.states.reserve(H);
  t.actions.reserve(H);
  t.rewards.reserve(H);
  int s = rng.next_categorical(m.rho);
  for (int h = 0; h < H; ++h) {
    const int a = rng.next_categorical(pi.probs.row(s).transpose());
    t.states.push_back(s);
    t.actions.push_back(a);
    t.rewards.push_back(m.r(s, a));
    if (h + 1 < H) s = rng.next_categorical(m.p[a].row(s).transpose());
  }
  return t;
}

namespace detail {

// Discounted suffix returns ret[h] = sum_{h'>=h} gamma^{h'-h} r_{h'}.
inline std::vector<double> suffix_returns(const Trajectory& t, double gamma) {
  std::vector<double> ret(t.horizon());
  double acc = 0.0;
  for (int h = t.horizon() - 1; h >= 0; --h) {
    acc = t.rewards[h] + gamma * acc;
    ret[h] = acc;
  }
  return ret;
}

// Single-trajectory score-weighted sum (no regularizer, no batch average).
inline Mat trajectory_term(const Policy& pi, const EstimatorConfig& cfg, const Trajectory& t, EstimatorKind kind) {
  const int S = pi.num_states(), A = pi.num_actions();
  Mat g = Mat::Zero(S, A);
  const std::vector<double> ret = suffix_returns(t, cfg.gamma);
  if (kind == EstimatorKind::Dae) {
    const int bh = truncation_steps(cfg.beta, cfg.H);
    for (int h = 0; h < bh; ++h) {
      const int s = t.states[h], a = t.actions[h];
      const double w = (ret[h] - cfg.b(s)) / bh;
      g.row(s) -= w * pi.probs.row(s);
      g(s, a) += w;
    }
  } else {
    double gh = 1.0;
    for (int h = 0; h < t.horizon(); ++h) {
      const int s = t.states[h], a = t.actions[h];
      const double w = gh * (ret[h] - cfg.b(s));
      g.row(s) -= w * pi.probs.row(s);
      g(s, a) += w;
      gh *= cfg.gamma;
    }
  }
  return g;
}

}  // namespace detail

// Truncated DAE estimator:
//   g = 1/(N floor(bH)) sum_i sum_{h<floor(bH)} score_h (ret_h - b(s_h)) + grad Omega.
inline GradEstimate dae_estimator(const Mdp& m, const SoftmaxParams& params, const EstimatorConfig& cfg,
                                  std::span<const Trajectory> trajectories) {
  validate_estimator_config(cfg, m);
  if (truncation_steps(cfg.beta, cfg.H) < 1)
    throw std::invalid_argument("dae_estimator: floor(beta*H) = 0; increase beta or H");
  if (int(trajectories.size()) != cfg.N) throw std::invalid_argument("dae_estimator: expected N trajectories");
  const Policy pi = policy_from_params(params);
  Mat g = Mat::Zero(params.num_states(), params.num_actions());
  for (const Trajectory& t : trajectories) {
    if (t.horizon() != cfg.H) throw std::invalid_argument("dae_estimator: trajectory horizon mismatch");
    g += detail::trajectory_term(pi, cfg, t, EstimatorKind::Dae);
  }
  return {g / cfg.N + regularizer(params).grad, cfg.N, 0};
}

// Doubly discounted estimator:
//   g = 1/N sum_i sum_h gamma^h score_h (ret_h - b(s_h)) + grad Omega.
inline GradEstimate dd_estimator(const Mdp& m, const SoftmaxParams& params, const EstimatorConfig& cfg,
                                 std::span<const Trajectory> trajectories) {
  validate_estimator_config(cfg, m);
  if (int(trajectories.size()) != cfg.N) throw std::invalid_argument("dd_estimator: expected N trajectories");
  const Policy pi = policy_from_params(params);
  Mat g = Mat::Zero(params.num_states(), params.num_actions());
  for (const Trajectory& t : trajectories) {
    if (t.horizon() != cfg.H) throw std::invalid_argument("dd_estimator: trajectory horizon mismatch");
    g += detail::trajectory_term(pi, cfg, t, EstimatorKind::Dd);
  }
  return {g / cfg.N + regularizer(params).grad, cfg.N, 0};
}

// Exact E[g] via step occupancies nu_h(s,a) = [rho P^h]_s pi(a|s) and the
// truncated per-step return targets. Independent of the batch size.
inline Mat exact_estimator_expectation(const Mdp& m, const SoftmaxParams& params, const EstimatorConfig& cfg,
                                       EstimatorKind kind) {
  validate_estimator_config(cfg, m);
  const Policy pi = policy_from_params(params);
  const int S = m.num_states, A = m.num_actions, H = cfg.H;
  const int h_end = kind == EstimatorKind::Dae ? truncation_steps(cfg.beta, cfg.H) : H;
  if (h_end < 1) throw std::invalid_argument("exact_estimator_expectation: floor(beta*H) = 0");

  // q[h](s,a) = E[sum_{h'=h}^{H-1} gamma^{h'-h} r | s,a], backward in one pass
  std::vector<Mat> q(H);
  q[H - 1] = m.r;
  for (int h = H - 2; h >= 0; --h) {
    const Vec q_pi = (pi.probs.cwiseProduct(q[h + 1])).rowwise().sum();
    q[h] = Mat(S, A);
    for (int a = 0; a < A; ++a) q[h].col(a) = m.r.col(a) + cfg.gamma * (m.p[a] * q_pi);
  }

  const Mat Pt = transition_matrix(m, pi).transpose();
  Vec dist = m.rho;
  Mat g = Mat::Zero(S, A);
  double gh = 1.0;
  for (int h = 0; h < h_end; ++h) {
    const double wh = kind == EstimatorKind::Dae ? 1.0 / h_end : gh;
    for (int s = 0; s < S; ++s) {
      if (dist[s] == 0.0) continue;
      double total = 0.0;
      for (int a = 0; a < A; ++a) {
        const double c = pi.probs(s, a) * (q[h](s, a) - cfg.b(s));
        g(s, a) += wh * dist[s] * c;
        total += c;
      }
      g.row(s) -= wh * dist[s] * total * pi.probs.row(s);
    }
    dist = Pt * dist;
    gh *= cfg.gamma;
  }
  return g + regularizer(params).grad;
}

// Number of (state, action) paths of length H; throws beyond the cap.
inline std::uint64_t trajectory_space_size(const Mdp& m, int H, std::uint64_t cap) {
  std::uint64_t n = 1;
  for (int h = 0; h < H; ++h) {
    n *= std::uint64_t(m.num_states) * std::uint64_t(m.num_actions);
    if (n > cap) throw std::runtime_error("trajectory enumeration: (S*A)^H exceeds cap " + std::to_string(cap));
  }
  return n;
}

// Exact E||g||^2 for a single-trajectory (N=1) estimate, by full
// probability-weighted enumeration of the trajectory space.
inline double exact_second_moment(const Mdp& m, const SoftmaxParams& params, const EstimatorConfig& cfg,
                                  EstimatorKind kind, std::uint64_t cap = 100000) {
  validate_estimator_config(cfg, m);
  trajectory_space_size(m, cfg.H, cap);
  const Policy pi = policy_from_params(params);
  const Mat omega = regularizer(params).grad;
  const int H = cfg.H;
  Trajectory t;
  t.states.resize(H);
  t.actions.resize(H);
  t.rewards.resize(H);
  double acc = 0.0;
  // DFS over (s_0, a_0, ..., s_{H-1}, a_{H-1}) with running probability
  auto walk = [&](auto&& self, int h, int s, double prob) -> void {
    if (prob == 0.0) return;
    if (h == H) {
      const Mat g = detail::trajectory_term(pi, cfg, t, kind) + omega;
      acc += prob * g.squaredNorm();
      return;
    }
    for (int a = 0; a < m.num_actions; ++a) {
      const double pa = pi.probs(s, a);
      if (pa == 0.0) continue;
      t.states[h] = s;
      t.actions[h] = a;
      t.rewards[h] = m.r(s, a);
      if (h + 1 == H) {
        self(self, h + 1, -1, prob * pa);
      } else {
        for (int s2 = 0; s2 < m.num_states; ++s2) self(self, h + 1, s2, prob * pa * m.p[a](s, s2));
      }
    }
  };
  for (int s0 = 0; s0 < m.num_states; ++s0) walk(walk, 0, s0, m.rho[s0]);
  return acc;
}

// E||g_N||^2 from the N=1 moments: ||E g||^2 + (E||g_1||^2 - ||E g||^2)/N.
inline double batch_second_moment(double mean_sq_norm, double single_second_moment, int N) {
  return mean_sq_norm + (single_second_moment - mean_sq_norm) / N;
}

}  // namespace fictdisc
