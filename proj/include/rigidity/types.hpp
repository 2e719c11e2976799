#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace rigidity {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Named failure conditions. The CLI maps all of these to exit code 1,
// except ParseError which maps to exit code 2.
struct DimensionMismatch : Error { using Error::Error; };
struct DegenerateSpan : Error { using Error::Error; };
struct IncompatibleDistances : Error { using Error::Error; };
struct TooFewVertices : Error { using Error::Error; };
struct PreconditionFailed : Error { using Error::Error; };
struct NotComplete : Error { using Error::Error; };
struct NotGeneralPosition : Error { using Error::Error; };
struct NotPsd : Error { using Error::Error; };
struct KernelNotContained : Error { using Error::Error; };
struct NotEnoughSharedVertices : Error { using Error::Error; };
struct UncertifiedInput : Error { using Error::Error; };
struct NotInfinitesimallyRigid : Error { using Error::Error; };
struct ResidualTooLarge : Error { using Error::Error; };
struct EdgeAlreadyPresent : Error { using Error::Error; };
struct DegenerateReflection : Error { using Error::Error; };
struct GeneralPositionFailure : Error { using Error::Error; };
struct ExhaustedRetries : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

// Vertices are 0-based indices in memory; the file format and the CLI
// use 1-based labels.
using Edge = std::pair<int, int>;

inline Edge make_edge(int i, int j) {
  if (i == j) {
    throw Error("self-loop edge at vertex " + std::to_string(i));
  }
  return i < j ? Edge{i, j} : Edge{j, i};
}

// Undirected graph on vertices 0..v-1. Edges are kept normalized
// (first < second), lexicographically sorted and unique; this ordering
// is the edge order used by every edge-indexed quantity.
class Graph {
 public:
  Graph() = default;

  Graph(int vertex_count, std::vector<Edge> edges) : v_(vertex_count) {
    if (vertex_count <= 0) {
      throw Error("graph needs at least one vertex");
    }
    edges_.reserve(edges.size());
    for (const Edge& e : edges) {
      Edge n = make_edge(e.first, e.second);
      if (n.first < 0 || n.second >= v_) {
        throw Error("edge {" + std::to_string(e.first) + "," +
                    std::to_string(e.second) + "} out of range for v=" +
                    std::to_string(v_));
      }
      edges_.push_back(n);
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  }

  static Graph complete(int vertex_count) {
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(vertex_count) * (vertex_count - 1) / 2);
    for (int i = 0; i < vertex_count; ++i) {
      for (int j = i + 1; j < vertex_count; ++j) {
        edges.push_back({i, j});
      }
    }
    return Graph(vertex_count, std::move(edges));
  }

  int vertex_count() const { return v_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }

  bool has_edge(int i, int j) const { return edge_index(i, j) >= 0; }

  // Position of {i,j} in the edge order, or -1.
  int edge_index(int i, int j) const {
    Edge e = make_edge(i, j);
    auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
    if (it == edges_.end() || *it != e) return -1;
    return static_cast<int>(it - edges_.begin());
  }

  bool is_complete() const {
    return edge_count() == v_ * (v_ - 1) / 2;
  }

  bool operator==(const Graph& other) const {
    return v_ == other.v_ && edges_ == other.edges_;
  }

 private:
  int v_ = 0;
  std::vector<Edge> edges_;
};

// Point assignment in R^d, stored as a d x v matrix of column vectors.
class Configuration {
 public:
  Configuration() = default;

  Configuration(int dim, Eigen::MatrixXd points) : points_(std::move(points)) {
    if (dim <= 0) throw Error("dimension must be positive");
    if (points_.rows() != dim) {
      throw DimensionMismatch("configuration rows != dimension");
    }
    if (!points_.allFinite()) {
      throw Error("configuration has non-finite coordinates");
    }
  }

  int dim() const { return static_cast<int>(points_.rows()); }
  int count() const { return static_cast<int>(points_.cols()); }
  const Eigen::MatrixXd& points() const { return points_; }
  Eigen::VectorXd point(int i) const { return points_.col(i); }

 private:
  Eigen::MatrixXd points_;
};

class Framework {
 public:
  Framework() = default;

  Framework(Graph graph, Configuration config)
      : graph_(std::move(graph)), config_(std::move(config)) {
    if (graph_.vertex_count() != config_.count()) {
      throw DimensionMismatch("graph has " + std::to_string(graph_.vertex_count()) +
                              " vertices but configuration has " +
                              std::to_string(config_.count()) + " points");
    }
  }

  const Graph& graph() const { return graph_; }
  const Configuration& config() const { return config_; }
  int dim() const { return config_.dim(); }

 private:
  Graph graph_;
  Configuration config_;
};

struct Tolerances {
  // Singular values / eigenvalues at or below zero_rel * largest count as zero.
  double zero_rel = 1e-9;
  // Absolute agreement threshold for coordinates and distances.
  double geom_abs = 1e-8;
};

inline void validate(const Tolerances& tol) {
  if (!(tol.zero_rel > 0.0 && tol.zero_rel < 1.0) ||
      !(tol.geom_abs > 0.0 && tol.geom_abs < 1.0)) {
    throw Error("tolerances must lie strictly between 0 and 1");
  }
}

// Jacobian of the squared-edge-length map. Row r carries p_i - p_j in the
// block of vertex i and p_j - p_i in the block of vertex j, for
// edge_order[r] = {i,j}; all other blocks are zero.
struct RigidityMatrix {
  Eigen::MatrixXd m;  // e x (v*d)
  std::vector<Edge> edge_order;
};

}  // namespace rigidity
