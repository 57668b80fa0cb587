#pragma once

#include <iostream>
#include <limits>
#include <optional>
#include <stdexcept>

#include "fictdisc/dp.hpp"
#include "fictdisc/mixing.hpp"
#include "fictdisc/values.hpp"

namespace fictdisc {

// Softmax logits theta (S×A) plus the log-barrier regularization weight.
struct SoftmaxParams {
  Mat theta;
  double lambda = 0.0;

  int num_states() const { return int(theta.rows()); }
  int num_actions() const { return int(theta.cols()); }
};

struct ObjectiveGradient {
  double value = 0.0;
  Mat grad;  // S×A
};

// pi(a|s) = exp(theta_sa) / sum_a' exp(theta_sa'), stabilized by row-max
// subtraction. Logits beyond |500| are clipped (trained iterates stay
// interior; this only guards pathological inputs).
inline Policy policy_from_params(const SoftmaxParams& params) {
  if (!params.theta.allFinite()) throw std::invalid_argument("policy_from_params: non-finite logits");
  Mat theta = params.theta;
  if (theta.cwiseAbs().maxCoeff() > 500.0) {
    std::cerr << "[fictdisc] warning: clipping logits to |theta| <= 500\n";
    theta = theta.cwiseMax(-500.0).cwiseMin(500.0);
  }
  const int S = int(theta.rows()), A = int(theta.cols());
  Mat probs(S, A);
  for (int s = 0; s < S; ++s) {
    const Vec row = theta.row(s).transpose();
    const Vec e = (row.array() - row.maxCoeff()).exp();
    probs.row(s) = (e / e.sum()).transpose();
  }
  return Policy{probs};
}

// Omega(theta) = (lambda/SA) sum_{s,a} log pi(a|s), and its gradient
// d Omega / d theta_{s,a} = lambda/(SA) - (lambda/S) pi(a|s).
inline ObjectiveGradient regularizer(const SoftmaxParams& params) {
  const int S = params.num_states(), A = params.num_actions();
  const Policy pi = policy_from_params(params);
  ObjectiveGradient out;
  out.value = (params.lambda / (S * A)) * pi.probs.array().log().sum();
  out.grad = Mat::Constant(S, A, params.lambda / (S * A)) - (params.lambda / S) * pi.probs;
  return out;
}

// Score function d log pi(a|s) / d theta: nonzero only in row s, where it
// equals e_a - pi(.|s).
inline Vec score_row(const Policy& pi, int s, int a) {
  Vec r = -pi.probs.row(s).transpose();
  r[a] += 1.0;
  return r;
}

// Lbar(theta) = eta(pi_theta) + Omega(theta); exact gradient via
// d eta / d theta_{s,a} = mu(s) pi(a|s) Abar(s,a).
inline ObjectiveGradient grad_average_objective(const Mdp& m, const SoftmaxParams& params) {
  const Policy pi = policy_from_params(params);
  const BiasTables t = bias_q_v_a(m, pi);
  const Vec mu = stationary_distribution(m, pi);
  const ObjectiveGradient omega = regularizer(params);
  ObjectiveGradient out;
  out.value = t.eta + omega.value;
  out.grad = mu.asDiagonal() * pi.probs.cwiseProduct(t.adv) + omega.grad;
  return out;
}

// Gradient of the normalized discounted value itself:
// d V^gamma / d theta_{s,a} = d(s) pi(a|s) A(s,a)/(1-gamma), with A the
// normalized advantage. No regularizer term.
inline ObjectiveGradient grad_discounted_value(const Mdp& m, const SoftmaxParams& params, double gamma) {
  const Policy pi = policy_from_params(params);
  const QvaTables t = discounted_q_v_a(m, pi, gamma);
  const Vec d = discounted_visitation(m, pi, gamma);
  ObjectiveGradient out;
  out.value = m.rho.dot(t.v);
  out.grad = d.asDiagonal() * pi.probs.cwiseProduct(t.adv) / (1.0 - gamma);
  return out;
}

// L^gamma(theta) = V^gamma(pi_theta)/(1-gamma) + Omega(theta).
inline ObjectiveGradient grad_discounted_objective(const Mdp& m, const SoftmaxParams& params, double gamma) {
  const ObjectiveGradient v = grad_discounted_value(m, params, gamma);
  const ObjectiveGradient omega = regularizer(params);
  ObjectiveGradient out;
  out.value = v.value / (1.0 - gamma) + omega.value;
  out.grad = v.grad / (1.0 - gamma) + omega.grad;
  return out;
}

struct SmoothnessConstants {
  double beta_lambda = 0.0;      // discounted objective
  double beta_bar_lambda = 0.0;  // average objective
};

// beta_lambda = 8/(1-gamma)^3 + 2 lambda / S,
// beta_bar_lambda = 22 sqrt(S) (2C/(1-alpha) + 1)^3 + 2 lambda / S.
inline SmoothnessConstants smoothness_constants(const MixingConstants& mix, double gamma, double lambda, int S) {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("smoothness_constants: gamma must lie in [0, 1)");
  SmoothnessConstants out;
  out.beta_lambda = 8.0 / std::pow(1.0 - gamma, 3) + 2.0 * lambda / S;
  const double e = 2.0 * mix.C / (1.0 - mix.alpha) + 1.0;
  out.beta_bar_lambda = 22.0 * std::sqrt(double(S)) * e * e * e + 2.0 * lambda / S;
  return out;
}

struct DominationBound {
  bool premise_holds = false;
  double grad_norm = 0.0;
  double threshold = 0.0;  // defaults to lambda/(2SA)
  double bound = 0.0;      // sub-optimality bound, valid when the premise holds
};

// Small-gradient implies small sub-optimality:
//   average:    eta* - eta(pi)      <= lambda S ||mu_{pi*}||_inf / (1-alpha)
//   discounted: V^{g,*} - V^g(pi)   <= lambda min{ ||d*/rho||_inf, S ||d*||_inf/(1-alpha) }
// The bound is always computed; it certifies only when premise_holds.
inline DominationBound gradient_domination_bound(const Mdp& m, const SoftmaxParams& params, Setting setting,
                                                 double gamma = 0.0,
                                                 std::optional<double> threshold = std::nullopt) {
  if (params.lambda <= 0.0) throw std::invalid_argument("gradient_domination_bound: lambda must be positive");
  const int S = params.num_states(), A = params.num_actions();
  const MixingConstants mix = mixing_constants(m);
  DominationBound out;
  out.threshold = threshold.value_or(params.lambda / (2.0 * S * A));
  if (setting == Setting::Average) {
    out.grad_norm = grad_average_objective(m, params).grad.norm();
    const RviResult rvi = relative_value_iteration(m);
    const Vec mu_star = stationary_distribution(m, rvi.greedy);
    out.bound = params.lambda * S * mu_star.maxCoeff() / (1.0 - mix.alpha);
  } else if (setting == Setting::Discounted) {
    out.grad_norm = grad_discounted_objective(m, params, gamma).grad.norm();
    const DiscountedSolution sol = discounted_optimal(m, gamma);
    double ratio = 0.0;
    for (int s = 0; s < S; ++s) {
      if (m.rho[s] > 0.0)
        ratio = std::max(ratio, sol.visitation[s] / m.rho[s]);
      else if (sol.visitation[s] > 0.0)
        ratio = std::numeric_limits<double>::infinity();
    }
    out.bound = params.lambda * std::min(ratio, S * sol.visitation.maxCoeff() / (1.0 - mix.alpha));
  } else {
    throw std::invalid_argument("gradient_domination_bound: finite-horizon setting has no domination bound");
  }
  out.premise_holds = out.grad_norm <= out.threshold;
  return out;
}

}  // namespace fictdisc
