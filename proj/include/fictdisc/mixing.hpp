#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "fictdisc/values.hpp"

namespace fictdisc {

// Constructive, policy-uniform chain constants of the MDP.
//   alpha_tilde = 1 - S p_min / n_sa^{m_p - 1},  alpha = alpha_tilde^{1/m_p},
//   C = 1/alpha_tilde,  beta_tilde = 1 - S p_min,  beta = beta_tilde^{1/m_p},
//   E = 1/beta_tilde,   D = 1 + 2 E m_p beta / (1 - beta).
// d_TV(rho P_pi^h, mu_pi) <= C alpha^h for every policy pi and h >= 0.
struct MixingConstants {
  int m_p = 0;          // smallest power making every deterministic chain positive
  double p_min = 0.0;   // min entry of P_pi^{m_p} over deterministic pi
  int n_sa = 0;         // S(A-1)+1
  double alpha_tilde = 0.0;
  double alpha = 0.0;   // in [0,1)
  double C = 1.0;       // > 1
  double beta_tilde = 0.0;
  double beta = 0.0;    // in [0,1)
  double E = 1.0;       // > 1
  double D = 1.0;       // > 1
};

inline std::uint64_t num_deterministic_policies(int S, int A, std::uint64_t cap = 1000000) {
  std::uint64_t n = 1;
  for (int s = 0; s < S; ++s) {
    n *= std::uint64_t(A);
    if (n > cap) throw std::runtime_error("deterministic policy count A^S exceeds cap " + std::to_string(cap));
  }
  return n;
}

// Visits all A^S deterministic policies (as action vectors), lexicographically.
inline void for_each_deterministic_policy(int S, int A, const std::function<void(const std::vector<int>&)>& fn,
                                          std::uint64_t cap = 1000000) {
  num_deterministic_policies(S, A, cap);
  std::vector<int> actions(S, 0);
  for (;;) {
    fn(actions);
    int s = S - 1;
    while (s >= 0 && actions[s] == A - 1) actions[s--] = 0;
    if (s < 0) return;
    ++actions[s];
  }
}

// Scans every deterministic chain for the first power m with all entries
// positive (capped at the Wielandt bound (S-1)^2+1); positivity of all
// chains is re-checked at the returned m on every scan pass by construction.
inline MixingConstants mixing_constants(const Mdp& m, std::uint64_t cap = 1000000) {
  const int S = m.num_states, A = m.num_actions;
  std::vector<Mat> chains;
  chains.reserve(size_t(num_deterministic_policies(S, A, cap)));
  for_each_deterministic_policy(S, A, [&](const std::vector<int>& actions) {
    Mat P(S, S);
    for (int s = 0; s < S; ++s) P.row(s) = m.p[actions[s]].row(s);
    chains.push_back(P);
  }, cap);

  const int wielandt = (S - 1) * (S - 1) + 1;
  std::vector<Mat> powers = chains;
  MixingConstants out;
  out.n_sa = S * (A - 1) + 1;
  for (int mp = 1; mp <= wielandt; ++mp) {
    bool all_positive = true;
    double p_min = 1.0;
    for (const Mat& P : powers) {
      const double lo = P.minCoeff();
      if (lo <= 0.0) {
        all_positive = false;
        break;
      }
      p_min = std::min(p_min, lo);
    }
    if (all_positive) {
      out.m_p = mp;
      out.p_min = p_min;
      break;
    }
    for (size_t i = 0; i < powers.size(); ++i) powers[i] = powers[i] * chains[i];
  }
  if (out.m_p == 0)
    throw std::runtime_error("mixing_constants: no power up to the Wielandt bound is positive for every "
                             "deterministic policy (irreducibility/aperiodicity assumption violated)");

  const double pow_n = std::pow(double(out.n_sa), double(out.m_p - 1));
  out.alpha_tilde = std::max(0.0, 1.0 - S * out.p_min / pow_n);
  out.alpha = std::pow(out.alpha_tilde, 1.0 / out.m_p);
  out.C = out.alpha_tilde > 0.0 ? 1.0 / out.alpha_tilde : 1.0 + 1e-9;
  out.beta_tilde = std::max(0.0, 1.0 - S * out.p_min);
  out.beta = std::pow(out.beta_tilde, 1.0 / out.m_p);
  out.E = out.beta_tilde > 0.0 ? 1.0 / out.beta_tilde : 1.0 + 1e-9;
  out.D = std::max(1.0 + 1e-9, 1.0 + 2.0 * out.E * out.m_p * out.beta / (1.0 - out.beta));
  return out;
}

struct DobrushinRow {
  int h;
  double tv;     // d_TV(rho P^h, mu)
  double bound;  // C alpha^h
};

inline double total_variation(const Vec& a, const Vec& b) { return 0.5 * (a - b).lpNorm<1>(); }

// Measures d_TV(rho P_pi^h, mu_pi) against C alpha^h for h = 0..h_max.
inline std::vector<DobrushinRow> verify_dobrushin(const Mdp& m, const Policy& pi, int h_max,
                                                  const MixingConstants& mix) {
  const Mat Pt = transition_matrix(m, pi).transpose();
  const Vec mu = stationary_distribution(m, pi);
  std::vector<DobrushinRow> rows;
  rows.reserve(h_max + 1);
  Vec dist = m.rho;
  for (int h = 0; h <= h_max; ++h) {
    rows.push_back({h, total_variation(dist, mu), mix.C * std::pow(mix.alpha, h)});
    dist = Pt * dist;
  }
  return rows;
}

// Convex decomposition of a randomized policy into at most S(A-1)+1
// deterministic atoms, by repeatedly peeling the smallest positive entry.
struct PolicyDecomposition {
  struct Atom {
    double coeff;
    std::vector<int> actions;
  };
  std::vector<Atom> atoms;

  Mat reconstruct(int S, int A) const {
    Mat out = Mat::Zero(S, A);
    for (const Atom& at : atoms)
      for (int s = 0; s < S; ++s) out(s, at.actions[s]) += at.coeff;
    return out;
  }
};

inline PolicyDecomposition decompose_policy(const Policy& pi) {
  constexpr double kZero = 1e-14;  // entries below this count as unsupported
  const int S = pi.num_states(), A = pi.num_actions();
  Mat cur = pi.probs;
  double remaining = 1.0;
  PolicyDecomposition out;
  const int max_atoms = S * (A - 1) + 1;
  for (int iter = 0; iter <= max_atoms; ++iter) {
    // smallest positive entry; ties broken by lowest (s, a)
    int s_min = -1, a_min = -1;
    double c = 2.0;
    for (int s = 0; s < S; ++s)
      for (int a = 0; a < A; ++a)
        if (cur(s, a) > kZero && cur(s, a) < c) {
          c = cur(s, a);
          s_min = s;
          a_min = a;
        }
    if (s_min < 0) throw std::runtime_error("decompose_policy: ran out of support before mass was exhausted");
    std::vector<int> actions(S);
    for (int s = 0; s < S; ++s) {
      if (s == s_min) {
        actions[s] = a_min;
        continue;
      }
      int pick = -1;
      for (int a = 0; a < A; ++a)
        if (cur(s, a) > kZero) {
          pick = a;
          break;
        }
      if (pick < 0) throw std::runtime_error("decompose_policy: empty support row");
      actions[s] = pick;
    }
    out.atoms.push_back({remaining * c, actions});
    if (c >= 1.0 - kZero) return out;  // current residual was deterministic
    for (int s = 0; s < S; ++s) cur(s, actions[s]) -= c;
    cur /= (1.0 - c);
    remaining *= (1.0 - c);
  }
  throw std::runtime_error("decompose_policy: atom count exceeded S(A-1)+1");
}

// l1 residual of the stationary-distribution perturbation identity
// mu_1 - mu_2 = mu_1 (P_1 - P_2) Y_2. Exact up to solver roundoff.
inline double perturbation_residual(const Mdp& m, const Policy& pi1, const Policy& pi2) {
  const Mat P1 = transition_matrix(m, pi1), P2 = transition_matrix(m, pi2);
  const Vec mu1 = stationary_distribution(P1), mu2 = stationary_distribution(P2);
  const Mat Y2 = deviation_matrix(P2);
  const Vec rhs = Y2.transpose() * ((P1 - P2).transpose() * mu1);
  return ((mu1 - mu2) - rhs).lpNorm<1>();
}

}  // namespace fictdisc
