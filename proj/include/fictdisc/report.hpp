#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

#include "fictdisc/mdp.hpp"
#include "fictdisc/softmax.hpp"
#include "json.hpp"

namespace fictdisc {

// Shortest exact decimal for a double; stable across reruns.
inline std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h = 0xcbf29ce484222325ull) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::string hash_matrix(const Mat& m) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      const double v = m(i, j);
      h = fnv1a(&v, sizeof v, h);
    }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string hash_mdp(const Mdp& m) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix_mat = [&h](const Mat& x) {
    for (int i = 0; i < x.rows(); ++i)
      for (int j = 0; j < x.cols(); ++j) {
        const double v = x(i, j);
        h = fnv1a(&v, sizeof v, h);
      }
  };
  for (const Mat& pa : m.p) mix_mat(pa);
  mix_mat(m.r);
  for (int s = 0; s < m.num_states; ++s) {
    const double v = m.rho[s];
    h = fnv1a(&v, sizeof v, h);
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// theta checkpoint: logits, lambda, and the fixture hash they were trained on.
inline void save_checkpoint(const SoftmaxParams& params, const std::string& fixture_hash, const std::string& path) {
  nlohmann::json j;
  j["lambda"] = params.lambda;
  j["fixture_hash"] = fixture_hash;
  auto rows = nlohmann::json::array();
  for (int s = 0; s < params.num_states(); ++s) {
    auto row = nlohmann::json::array();
    for (int a = 0; a < params.num_actions(); ++a) row.push_back(params.theta(s, a));
    rows.push_back(row);
  }
  j["theta"] = rows;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
  out << j.dump(1) << "\n";
}

struct Checkpoint {
  SoftmaxParams params;
  std::string fixture_hash;
};

inline Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open checkpoint: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
  Checkpoint c;
  try {
    c.params.lambda = j.at("lambda").get<double>();
    c.fixture_hash = j.value("fixture_hash", "");
    const auto& rows = j.at("theta");
    const int S = int(rows.size());
    if (S < 1) throw std::invalid_argument("theta: empty");
    const int A = int(rows[0].size());
    c.params.theta = Mat::Zero(S, A);
    for (int s = 0; s < S; ++s) {
      if (int(rows[s].size()) != A) throw std::invalid_argument("theta: ragged rows");
      for (int a = 0; a < A; ++a) c.params.theta(s, a) = rows[s][a].get<double>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
  return c;
}

}  // namespace fictdisc
