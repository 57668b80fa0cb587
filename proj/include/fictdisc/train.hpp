#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fictdisc/dp.hpp"
#include "fictdisc/estimators.hpp"
#include "fictdisc/softmax.hpp"

namespace fictdisc {

// Regularization weight as the larger root of
//   2 (G + 2 lambda) Delta = (lambda - eps)^2 / (4 S^2 A^2),
// i.e. lambda^2 - (2 eps + 16 S^2 A^2 Delta) lambda + (eps^2 - 8 S^2 A^2 Delta G) = 0.
// The discriminant is 4Q(2 eps + Q + G) with Q = 8 S^2 A^2 Delta, so it is
// nonnegative whenever Delta >= 0; lambda >= eps, with equality iff Delta = 0.
inline double lambda_from_quadratic(double eps, double g_const, double delta_const, int S, int A) {
  if (!(eps > 0.0)) throw std::invalid_argument("lambda_from_quadratic: eps must be positive");
  if (!(delta_const >= 0.0)) throw std::invalid_argument("lambda_from_quadratic: Delta must be nonnegative");
  if (!(g_const > 0.0)) throw std::invalid_argument("lambda_from_quadratic: G must be positive");
  const double q = 8.0 * double(S) * S * A * A * delta_const;
  const double b = 2.0 * eps + 2.0 * q;
  const double c = eps * eps - q * g_const;
  const double disc = 4.0 * q * (2.0 * eps + q + g_const);
  const double lambda = (b + std::sqrt(disc)) / 2.0;
  const double lhs = 2.0 * (g_const + 2.0 * lambda) * delta_const;
  const double rhs = (lambda - eps) * (lambda - eps) / (4.0 * double(S) * S * A * A);
  if (std::abs(lhs - rhs) > 1e-10 * std::max(1.0, std::abs(lhs)))
    throw std::runtime_error("lambda_from_quadratic: root does not satisfy the defining equation");
  return lambda;
}

// alpha^k = 1 / (2 beta_smooth sqrt(k+3) log2(k+3)); beta_smooth alpha^k <= 1/2.
inline double step_size(int k, double beta_smooth) {
  if (k < 0 || !(beta_smooth > 0.0)) throw std::invalid_argument("step_size: bad arguments");
  const double t = k + 3.0;
  return 1.0 / (2.0 * beta_smooth * std::sqrt(t) * std::log2(t));
}

enum class Algorithm { Dae, Dd };

struct TrainConfig {
  Algorithm algorithm = Algorithm::Dd;
  int H = 32;
  double sigma = 0.5;    // gamma = 1 - H^{-sigma}
  double epsilon = 0.05;
  double delta = 0.1;    // confidence level (reported only)
  double beta = 0.5;     // DAE truncation fraction
  int N = 8;
  int K_max = 2000;
  int log_every = 10;
  std::uint64_t seed = 0;
  Vec baseline;          // empty = zero baseline
  double baseline_bound = 0.0;
  std::optional<Mat> theta0;  // defaults to zeros (uniform policy)
  bool stop_on_certificate = true;
  // Diagnostic overrides; defaults follow the prescribed lambda and schedule.
  std::optional<double> lambda_override;
  std::optional<double> step_size_override;

  double gamma() const { return 1.0 - std::pow(double(H), -sigma); }
};

struct TraceRow {
  int k = 0;
  double grad_norm = 0.0;
  double gap_eta = 0.0;     // eta* - eta(theta_k), bracket midpoint for eta*
  double gap_vh = 0.0;      // V^{H,*} - V^H(theta_k)
  double gap_vgamma = 0.0;  // V^{gamma,*} - V^gamma(theta_k)
  double best_gap_eta = 0.0;
  double best_gap_vh = 0.0;
  double best_gap_vgamma = 0.0;
  double step = 0.0;
};

struct Certificate {
  int k = 0;
  double grad_norm = 0.0;
  double threshold = 0.0;  // lambda/(2SA)
  double lambda = 0.0;
  double bound = 0.0;      // gradient-domination sub-optimality bound
};

struct TrainResult {
  std::vector<TraceRow> trace;
  Mat theta;       // final iterate
  Mat best_theta;  // iterate with the smallest exact gradient norm
  int best_k = 0;
  std::optional<Certificate> certificate;
  bool diverged = false;
  double lambda = 0.0;
  double gamma = 0.0;
  double beta_smooth = 0.0;
  double delta_const = 0.0;  // bias bound used in the lambda quadratic
  double g_const = 0.0;
  // Exact problem context, for audits.
  double eta_star_lo = 0.0, eta_star_hi = 0.0;
  double vh_star = 0.0;
  double vgamma_star = 0.0;
  double mu_star_inf = 0.0;   // ||mu_{pi*}||_inf
  double dom_bound = 0.0;     // domination bound at this lambda
  double wall_ms = 0.0;
};

namespace detail {

using GradProvider = std::function<Mat(const Mat& theta, double lambda, int k)>;

inline TrainResult train_loop(const Mdp& m, const TrainConfig& cfg, const GradProvider& provider) {
  if (cfg.H < 2) throw std::invalid_argument("train: H must be >= 2 so gamma lies in (0,1)");
  if (!(cfg.sigma > 0.0 && cfg.sigma < 1.0)) throw std::invalid_argument("train: sigma must lie in (0,1)");
  const auto t_start = std::chrono::steady_clock::now();
  const int S = m.num_states, A = m.num_actions;
  const double gamma = cfg.gamma();
  const MixingConstants mix = mixing_constants(m);

  TrainResult res;
  res.gamma = gamma;
  if (cfg.algorithm == Algorithm::Dae) {
    res.delta_const = dae_bias_bound(mix, gamma, cfg.H, cfg.beta);
    res.g_const = average_grad_const(mix);
  } else {
    res.delta_const = dd_bias_bound(gamma, cfg.H);
    res.g_const = dd_grad_const(gamma, cfg.baseline_bound);
  }
  res.lambda = cfg.lambda_override ? *cfg.lambda_override
                                   : lambda_from_quadratic(cfg.epsilon, res.g_const, res.delta_const, S, A);
  const SmoothnessConstants sm = smoothness_constants(mix, gamma, res.lambda, S);
  res.beta_smooth = cfg.algorithm == Algorithm::Dae ? sm.beta_bar_lambda : sm.beta_lambda;

  // Exact references the certificate and trace gaps are measured against.
  const RviResult rvi = relative_value_iteration(m);
  res.eta_star_lo = rvi.lo;
  res.eta_star_hi = rvi.hi;
  res.vh_star = finite_horizon_optimal(m, cfg.H).value;
  const DiscountedSolution dsol = discounted_optimal(m, gamma);
  res.vgamma_star = dsol.value;
  res.mu_star_inf = stationary_distribution(m, rvi.greedy).maxCoeff();
  if (cfg.algorithm == Algorithm::Dae) {
    res.dom_bound = res.lambda * S * res.mu_star_inf / (1.0 - mix.alpha);
  } else {
    double ratio = 0.0;
    for (int s = 0; s < S; ++s) {
      if (m.rho[s] > 0.0)
        ratio = std::max(ratio, dsol.visitation[s] / m.rho[s]);
      else if (dsol.visitation[s] > 0.0)
        ratio = std::numeric_limits<double>::infinity();
    }
    res.dom_bound = res.lambda * std::min(ratio, S * dsol.visitation.maxCoeff() / (1.0 - mix.alpha));
  }

  const double threshold = res.lambda / (2.0 * S * A);
  const double eta_star_mid = 0.5 * (rvi.lo + rvi.hi);

  Mat theta = cfg.theta0.value_or(Mat::Zero(S, A));
  if (theta.rows() != S || theta.cols() != A) throw std::invalid_argument("train: theta0 has wrong shape");
  res.best_theta = theta;
  double best_norm = std::numeric_limits<double>::infinity();
  double best_eta = std::numeric_limits<double>::infinity();
  double best_vh = std::numeric_limits<double>::infinity();
  double best_vg = std::numeric_limits<double>::infinity();

  auto gaps = [&](const Mat& th, double* ge, double* gh, double* gg) {
    const SoftmaxParams p{th, res.lambda};
    const Policy pi = policy_from_params(p);
    *ge = eta_star_mid - average_reward(m, pi).value;
    *gh = res.vh_star - finite_horizon_value(m, pi, cfg.H).value;
    *gg = res.vgamma_star - discounted_value(m, pi, gamma).value;
  };
  auto log_row = [&](int k, double norm) {
    double ge, gh, gg;
    gaps(theta, &ge, &gh, &gg);
    best_eta = std::min(best_eta, ge);
    best_vh = std::min(best_vh, gh);
    best_vg = std::min(best_vg, gg);
    res.trace.push_back({k, norm, ge, gh, gg, best_eta, best_vh, best_vg,
                         cfg.step_size_override.value_or(step_size(k, res.beta_smooth))});
  };

  int k = 0;
  for (; k <= cfg.K_max; ++k) {
    const SoftmaxParams p{theta, res.lambda};
    const double norm = cfg.algorithm == Algorithm::Dae
                            ? grad_average_objective(m, p).grad.norm()
                            : grad_discounted_objective(m, p, gamma).grad.norm();
    if (norm < best_norm) {
      best_norm = norm;
      res.best_theta = theta;
      res.best_k = k;
    }
    const bool logged = (k % cfg.log_every == 0) || k == cfg.K_max;
    if (logged) log_row(k, norm);
    if (!res.certificate && norm <= threshold) {
      res.certificate = Certificate{k, norm, threshold, res.lambda, res.dom_bound};
      if (cfg.stop_on_certificate) {
        if (!logged) log_row(k, norm);
        break;
      }
    }
    if (k == cfg.K_max) break;
    const Mat g = provider(theta, res.lambda, k);
    if (!g.allFinite()) {
      res.diverged = true;
      if (!logged) log_row(k, norm);
      break;
    }
    theta += cfg.step_size_override.value_or(step_size(k, res.beta_smooth)) * g;
    if (!theta.allFinite()) {
      res.diverged = true;
      break;
    }
  }
  res.theta = theta;

  // Fold the best-gradient-norm iterate into the best-so-far columns.
  if (!res.trace.empty()) {
    double ge, gh, gg;
    const Mat saved = theta;
    theta = res.best_theta;
    gaps(theta, &ge, &gh, &gg);
    theta = saved;
    TraceRow& last = res.trace.back();
    last.best_gap_eta = std::min(last.best_gap_eta, ge);
    last.best_gap_vh = std::min(last.best_gap_vh, gh);
    last.best_gap_vgamma = std::min(last.best_gap_vgamma, gg);
  }
  res.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t_start).count();
  return res;
}

}  // namespace detail

// Stochastic training with the sampled estimator. Trajectories are seeded
// per (seed, iteration, index), so runs are reproducible and independent of
// how the batch is scheduled.
inline TrainResult run_training(const Mdp& m, const TrainConfig& cfg) {
  EstimatorConfig est;
  est.gamma = cfg.gamma();
  est.beta = cfg.beta;
  est.N = cfg.N;
  est.H = cfg.H;
  est.baseline = cfg.baseline;
  est.baseline_bound = cfg.baseline_bound;
  const EstimatorKind kind = cfg.algorithm == Algorithm::Dae ? EstimatorKind::Dae : EstimatorKind::Dd;
  return detail::train_loop(m, cfg, [&m, &cfg, est, kind](const Mat& theta, double lambda, int k) {
    const SoftmaxParams p{theta, lambda};
    const Policy pi = policy_from_params(p);
    std::vector<Trajectory> trajs;
    trajs.reserve(est.N);
    for (int i = 0; i < est.N; ++i) {
      Rng rng = Rng::derive(cfg.seed, {0x74726au /* "trj" */, std::uint64_t(k), std::uint64_t(i)});
      trajs.push_back(sample_trajectory(m, pi, est.H, rng));
    }
    return kind == EstimatorKind::Dae ? dae_estimator(m, p, est, trajs).g : dd_estimator(m, p, est, trajs).g;
  });
}

// Deterministic variant: the sampled estimator is replaced by its exact
// expectation, isolating the discount/truncation bias from sampling noise.
inline TrainResult run_exact_gradient_training(const Mdp& m, const TrainConfig& cfg) {
  EstimatorConfig est;
  est.gamma = cfg.gamma();
  est.beta = cfg.beta;
  est.N = cfg.N;
  est.H = cfg.H;
  est.baseline = cfg.baseline;
  est.baseline_bound = cfg.baseline_bound;
  const EstimatorKind kind = cfg.algorithm == Algorithm::Dae ? EstimatorKind::Dae : EstimatorKind::Dd;
  return detail::train_loop(m, cfg, [&m, est, kind](const Mat& theta, double lambda, int) {
    return exact_estimator_expectation(m, SoftmaxParams{theta, lambda}, est, kind);
  });
}

}  // namespace fictdisc
