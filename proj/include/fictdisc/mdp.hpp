#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fictdisc/rng.hpp"
#include "json.hpp"

namespace fictdisc {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kProbTol = 1e-12;

// Tabular MDP. p[a](s, s') is the chance of landing in s' from s under
// action a; r(s, a) is the deterministic instantaneous reward; rho is the
// initial state distribution. Rewards live in [0, r_max], r_max = 1.
struct Mdp {
  int num_states = 0;
  int num_actions = 0;
  std::vector<Mat> p;  // one S×S matrix per action
  Mat r;               // S×A
  Vec rho;             // length S
  double r_max = 1.0;
};

// Row-stochastic S×A action distribution per state.
struct Policy {
  Mat probs;

  int num_states() const { return int(probs.rows()); }
  int num_actions() const { return int(probs.cols()); }
};

// One policy per step; length must match the horizon it is evaluated on.
using PolicySequence = std::vector<Policy>;

inline Policy uniform_policy(int S, int A) {
  return Policy{Mat::Constant(S, A, 1.0 / A)};
}

// actions[s] = the single action taken in state s.
inline Policy deterministic_policy(int S, int A, const std::vector<int>& actions) {
  if (int(actions.size()) != S) throw std::invalid_argument("deterministic_policy: need one action per state");
  Mat m = Mat::Zero(S, A);
  for (int s = 0; s < S; ++s) {
    if (actions[s] < 0 || actions[s] >= A) throw std::invalid_argument("deterministic_policy: action out of range");
    m(s, actions[s]) = 1.0;
  }
  return Policy{m};
}

inline void validate_policy(const Policy& pi, const Mdp& m) {
  if (pi.num_states() != m.num_states || pi.num_actions() != m.num_actions)
    throw std::invalid_argument("policy shape does not match mdp");
  for (int s = 0; s < pi.num_states(); ++s) {
    if (pi.probs.row(s).minCoeff() < -kProbTol)
      throw std::invalid_argument("policy has a negative probability in state " + std::to_string(s));
    if (std::abs(pi.probs.row(s).sum() - 1.0) > kProbTol)
      throw std::invalid_argument("policy row " + std::to_string(s) + " does not sum to 1");
  }
}

// Hard invariants; throws with the offending field on violation.
inline void validate_mdp(const Mdp& m) {
  if (m.num_states < 1 || m.num_actions < 1) throw std::invalid_argument("mdp: S and A must be >= 1");
  if (int(m.p.size()) != m.num_actions) throw std::invalid_argument("mdp: p must have one S x S block per action");
  for (int a = 0; a < m.num_actions; ++a) {
    if (m.p[a].rows() != m.num_states || m.p[a].cols() != m.num_states)
      throw std::invalid_argument("mdp: p[" + std::to_string(a) + "] has wrong shape");
    for (int s = 0; s < m.num_states; ++s) {
      if (m.p[a].row(s).minCoeff() < 0.0)
        throw std::invalid_argument("mdp: p[" + std::to_string(s) + "][" + std::to_string(a) + "] has a negative entry");
      if (std::abs(m.p[a].row(s).sum() - 1.0) > kProbTol)
        throw std::invalid_argument("mdp: p[" + std::to_string(s) + "][" + std::to_string(a) + "] rows must sum to 1, got " +
                                    std::to_string(m.p[a].row(s).sum()));
    }
  }
  if (m.r.rows() != m.num_states || m.r.cols() != m.num_actions) throw std::invalid_argument("mdp: r has wrong shape");
  if (m.r.minCoeff() < 0.0 || m.r.maxCoeff() > m.r_max)
    throw std::invalid_argument("mdp: rewards must lie in [0, " + std::to_string(m.r_max) + "]");
  if (m.rho.size() != m.num_states) throw std::invalid_argument("mdp: rho has wrong length");
  if (m.rho.minCoeff() < 0.0) throw std::invalid_argument("mdp: rho has a negative entry");
  if (std::abs(m.rho.sum() - 1.0) > kProbTol) throw std::invalid_argument("mdp: rho must sum to 1");
}

// Exploratory-start diagnostic: strict positivity of rho. Not a hard
// invariant (fixtures may start deterministically); consumers that divide
// by rho must check this.
inline bool initial_dist_positive(const Mdp& m) { return m.rho.minCoeff() > 0.0; }

// ---------------------------------------------------------------------------
// JSON file format: {"S": int, "A": int, "p": [S][A][S], "r": [S][A],
// "rho": [S]}. Load validates and rejects bad files with a field-level
// diagnostic.

inline nlohmann::json mdp_to_json(const Mdp& m) {
  nlohmann::json j;
  j["S"] = m.num_states;
  j["A"] = m.num_actions;
  auto p = nlohmann::json::array();
  for (int s = 0; s < m.num_states; ++s) {
    auto row_s = nlohmann::json::array();
    for (int a = 0; a < m.num_actions; ++a) {
      auto row_a = nlohmann::json::array();
      for (int s2 = 0; s2 < m.num_states; ++s2) row_a.push_back(m.p[a](s, s2));
      row_s.push_back(row_a);
    }
    p.push_back(row_s);
  }
  j["p"] = p;
  auto r = nlohmann::json::array();
  for (int s = 0; s < m.num_states; ++s) {
    auto row = nlohmann::json::array();
    for (int a = 0; a < m.num_actions; ++a) row.push_back(m.r(s, a));
    r.push_back(row);
  }
  j["r"] = r;
  auto rho = nlohmann::json::array();
  for (int s = 0; s < m.num_states; ++s) rho.push_back(m.rho[s]);
  j["rho"] = rho;
  return j;
}

inline Mdp mdp_from_json(const nlohmann::json& j) {
  Mdp m;
  try {
    m.num_states = j.at("S").get<int>();
    m.num_actions = j.at("A").get<int>();
    if (m.num_states < 1 || m.num_actions < 1) throw std::invalid_argument("S and A must be >= 1");
    const auto& p = j.at("p");
    if (int(p.size()) != m.num_states) throw std::invalid_argument("p: expected " + std::to_string(m.num_states) + " state rows");
    m.p.assign(m.num_actions, Mat::Zero(m.num_states, m.num_states));
    for (int s = 0; s < m.num_states; ++s) {
      if (int(p[s].size()) != m.num_actions) throw std::invalid_argument("p[" + std::to_string(s) + "]: expected " + std::to_string(m.num_actions) + " action rows");
      for (int a = 0; a < m.num_actions; ++a) {
        if (int(p[s][a].size()) != m.num_states) throw std::invalid_argument("p[" + std::to_string(s) + "][" + std::to_string(a) + "]: expected " + std::to_string(m.num_states) + " entries");
        for (int s2 = 0; s2 < m.num_states; ++s2) m.p[a](s, s2) = p[s][a][s2].get<double>();
      }
    }
    const auto& r = j.at("r");
    if (int(r.size()) != m.num_states) throw std::invalid_argument("r: expected " + std::to_string(m.num_states) + " rows");
    m.r = Mat::Zero(m.num_states, m.num_actions);
    for (int s = 0; s < m.num_states; ++s) {
      if (int(r[s].size()) != m.num_actions) throw std::invalid_argument("r[" + std::to_string(s) + "]: expected " + std::to_string(m.num_actions) + " entries");
      for (int a = 0; a < m.num_actions; ++a) m.r(s, a) = r[s][a].get<double>();
    }
    const auto& rho = j.at("rho");
    if (int(rho.size()) != m.num_states) throw std::invalid_argument("rho: expected " + std::to_string(m.num_states) + " entries");
    m.rho = Vec::Zero(m.num_states);
    for (int s = 0; s < m.num_states; ++s) m.rho[s] = rho[s].get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("mdp json: ") + e.what());
  }
  validate_mdp(m);
  return m;
}

inline Mdp load_mdp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open mdp file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
  try {
    return mdp_from_json(j);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

inline void save_mdp(const Mdp& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write mdp file: " + path);
  out << mdp_to_json(m).dump(1) << "\n";
}

// ---------------------------------------------------------------------------
// Random ergodic MDP generator. Transition rows are uniform on the simplex,
// floored and renormalized so every entry stays >= floor/2 (one-step
// positivity makes every induced chain irreducible and aperiodic). Rewards
// uniform in [0,1], rho uniform.
inline Mdp generate_random_mdp(int S, int A, std::uint64_t seed, double floor) {
  if (S < 1 || A < 1) throw std::invalid_argument("generate_random_mdp: S and A must be >= 1");
  if (!(floor > 0.0 && floor < 1.0 / S)) throw std::invalid_argument("generate_random_mdp: floor must lie in (0, 1/S)");
  Rng rng = Rng::derive(seed, {0x6d6470u /* "mdp" */});
  Mdp m;
  m.num_states = S;
  m.num_actions = A;
  m.p.assign(A, Mat::Zero(S, S));
  for (int s = 0; s < S; ++s) {
    for (int a = 0; a < A; ++a) {
      Vec row(S);
      for (int s2 = 0; s2 < S; ++s2) row[s2] = rng.next_exponential();
      row /= row.sum();
      row = row.cwiseMax(floor);
      row /= row.sum();
      m.p[a].row(s) = row.transpose();
    }
  }
  m.r = Mat::Zero(S, A);
  for (int s = 0; s < S; ++s)
    for (int a = 0; a < A; ++a) m.r(s, a) = rng.next_double();
  m.rho = Vec::Constant(S, 1.0 / S);
  validate_mdp(m);
  return m;
}

// ---------------------------------------------------------------------------
// Reference fixtures; shipped as JSON under fixtures/ as well.

// Single state, two actions, r = (1, 0).
inline Mdp fix1() {
  Mdp m;
  m.num_states = 1;
  m.num_actions = 2;
  m.p = {Mat::Constant(1, 1, 1.0), Mat::Constant(1, 1, 1.0)};
  m.r = Mat::Zero(1, 2);
  m.r(0, 0) = 1.0;
  m.rho = Vec::Constant(1, 1.0);
  return m;
}

// Two states: action 0 stays put w.p. 0.9, action 1 switches w.p. 0.9.
// State 0 pays 1, state 1 pays 0. Starts in state 0.
inline Mdp fix2() {
  Mdp m;
  m.num_states = 2;
  m.num_actions = 2;
  Mat stay(2, 2), sw(2, 2);
  stay << 0.9, 0.1, 0.1, 0.9;
  sw << 0.1, 0.9, 0.9, 0.1;
  m.p = {stay, sw};
  m.r = Mat::Zero(2, 2);
  m.r.row(0).setConstant(1.0);
  m.rho = Vec::Zero(2);
  m.rho[0] = 1.0;
  return m;
}

// Seeded random ergodic MDP, S=4, A=3.
inline Mdp fix3() { return generate_random_mdp(4, 3, 42, 0.01); }

}  // namespace fictdisc
