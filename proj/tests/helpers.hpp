#pragma once

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "rigidity/attach.hpp"
#include "rigidity/core.hpp"
#include "rigidity/generate.hpp"
#include "rigidity/stress.hpp"
#include "rigidity/types.hpp"

namespace testutil {

using namespace rigidity;

inline Framework make_fw(int d, const std::vector<double>& flat_coords,
                         const std::vector<Edge>& edges) {
  const int v = static_cast<int>(flat_coords.size()) / d;
  Eigen::MatrixXd pts(d, v);
  for (int i = 0; i < v; ++i) {
    for (int r = 0; r < d; ++r) pts(r, i) = flat_coords[static_cast<std::size_t>(i * d + r)];
  }
  return Framework(Graph(v, edges), Configuration(d, pts));
}

inline Eigen::MatrixXd random_rotation(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd m(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) m(i, j) = gauss(rng);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  Eigen::MatrixXd q = qr.householderQ();
  if (q.determinant() < 0) q.col(0) = -q.col(0);
  return q;
}

// direct evaluation of the equilibrium equation at every vertex, reading
// the edge stresses off the matrix; independent of the library's property
// checks
inline double equilibrium_residual(const Framework& fw, const Eigen::MatrixXd& omega) {
  double worst = 0.0;
  for (int i = 0; i < fw.graph().vertex_count(); ++i) {
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(fw.dim());
    for (const Edge& e : fw.graph().edges()) {
      if (e.first == i) {
        sum += omega(i, e.second) * (fw.config().point(i) - fw.config().point(e.second));
      } else if (e.second == i) {
        sum += omega(i, e.first) * (fw.config().point(i) - fw.config().point(e.first));
      }
    }
    worst = std::max(worst, sum.norm());
  }
  return worst;
}

// brute-force general position oracle: determinant of every bordered
// (d+1)x(d+1) submatrix
inline bool det_general_position(const Configuration& cfg, double eps = 1e-12) {
  const int d = cfg.dim();
  const int v = cfg.count();
  const int k = d + 1;
  if (v <= d) return true;
  const Eigen::MatrixXd b = bordered_matrix(cfg);
  std::vector<int> pick(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) pick[static_cast<std::size_t>(i)] = i;
  while (true) {
    Eigen::MatrixXd sub(k, k);
    for (int c = 0; c < k; ++c) sub.col(c) = b.col(pick[static_cast<std::size_t>(c)]);
    if (std::abs(sub.determinant()) <= eps) return false;
    int pos = k - 1;
    while (pos >= 0 && pick[static_cast<std::size_t>(pos)] == v - k + pos) --pos;
    if (pos < 0) break;
    ++pick[static_cast<std::size_t>(pos)];
    for (int t = pos + 1; t < k; ++t) {
      pick[static_cast<std::size_t>(t)] = pick[static_cast<std::size_t>(t - 1)] + 1;
    }
  }
  return true;
}

// structural validator for the lateration definition: complete seed clique,
// every later vertex adjacent to exactly d+1 earlier ones and nothing else
inline bool is_lateration_graph(const Graph& g, int d) {
  const int v = g.vertex_count();
  if (v < d + 1) return false;
  for (int i = 0; i <= d; ++i) {
    for (int j = i + 1; j <= d; ++j) {
      if (!g.has_edge(i, j)) return false;
    }
  }
  for (int i = d + 1; i < v; ++i) {
    int earlier = 0;
    for (int j = 0; j < i; ++j) {
      if (g.has_edge(j, i)) ++earlier;
    }
    if (earlier != d + 1) return false;
  }
  int expected = d * (d + 1) / 2 + (v - d - 1) * (d + 1);
  return g.edge_count() == expected;
}

// a certified complete framework whose first pinned.cols() coordinates are
// prescribed and the rest sampled nearby
inline CertifiedFramework complete_on(const Eigen::MatrixXd& pinned, int extra,
                                      std::uint64_t seed) {
  const int d = static_cast<int>(pinned.rows());
  const int v = static_cast<int>(pinned.cols()) + extra;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int attempt = 0; attempt < 100; ++attempt) {
    Eigen::MatrixXd pts(d, v);
    pts.leftCols(pinned.cols()) = pinned;
    for (int c = static_cast<int>(pinned.cols()); c < v; ++c) {
      for (int r = 0; r < d; ++r) pts(r, c) = unit(rng);
    }
    Configuration cfg(d, pts);
    if (!is_general_position(cfg)) continue;
    Framework fw(Graph::complete(v), cfg);
    return CertifiedFramework{fw, complete_graph_stress(fw)};
  }
  throw std::runtime_error("complete_on failed to find a general-position fill");
}

}  // namespace testutil
