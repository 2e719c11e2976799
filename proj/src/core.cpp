#include "rigidity/core.hpp"

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

namespace rigidity {

Eigen::VectorXd edge_function(const Framework& fw) {
  const auto& edges = fw.graph().edges();
  const auto& p = fw.config().points();
  Eigen::VectorXd f(edges.size());
  for (std::size_t r = 0; r < edges.size(); ++r) {
    f(static_cast<Eigen::Index>(r)) =
        0.5 * (p.col(edges[r].first) - p.col(edges[r].second)).squaredNorm();
  }
  return f;
}

RigidityMatrix rigidity_matrix(const Framework& fw) {
  const auto& edges = fw.graph().edges();
  const auto& p = fw.config().points();
  const int d = fw.dim();
  RigidityMatrix rm;
  rm.edge_order = edges;
  rm.m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(edges.size()),
                               static_cast<Eigen::Index>(fw.graph().vertex_count()) * d);
  for (std::size_t r = 0; r < edges.size(); ++r) {
    const auto [i, j] = edges[r];
    const Eigen::VectorXd diff = p.col(i) - p.col(j);
    rm.m.block(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i) * d, 1, d) =
        diff.transpose();
    rm.m.block(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j) * d, 1, d) =
        -diff.transpose();
  }
  return rm;
}

Eigen::MatrixXd bordered_matrix(const Configuration& cfg) {
  Eigen::MatrixXd b(cfg.dim() + 1, cfg.count());
  b.topRows(cfg.dim()) = cfg.points();
  b.row(cfg.dim()).setOnes();
  return b;
}

int numerical_rank(const Eigen::MatrixXd& m, double zero_rel) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) <= 0.0) return 0;
  const double cutoff = zero_rel * sv(0);
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) ++rank;
  }
  return rank;
}

bool is_general_position(const Configuration& cfg, const Tolerances& tol) {
  const int d = cfg.dim();
  const int v = cfg.count();
  const int k = d + 1;
  if (v <= d) return true;  // no (d+1)-subset exists

  const Eigen::MatrixXd b = bordered_matrix(cfg);
  Eigen::MatrixXd sub(k, k);
  std::vector<int> pick(k);
  for (int i = 0; i < k; ++i) pick[i] = i;

  while (true) {
    for (int c = 0; c < k; ++c) sub.col(c) = b.col(pick[c]);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(sub);
    const auto& sv = svd.singularValues();
    if (!(sv(k - 1) > tol.zero_rel * sv(0))) return false;

    // next k-combination of 0..v-1
    int pos = k - 1;
    while (pos >= 0 && pick[pos] == v - k + pos) --pos;
    if (pos < 0) break;
    ++pick[pos];
    for (int t = pos + 1; t < k; ++t) pick[t] = pick[t - 1] + 1;
  }
  return true;
}

bool affinely_spans(const Configuration& cfg, const Tolerances& tol) {
  return numerical_rank(bordered_matrix(cfg), tol.zero_rel) == cfg.dim() + 1;
}

bool infinitesimal_rigidity(const Framework& fw, const Tolerances& tol) {
  const int d = fw.dim();
  const int v = fw.graph().vertex_count();
  if (v < d + 1) {
    throw PreconditionFailed("infinitesimal rigidity needs at least d+1 vertices");
  }
  if (!affinely_spans(fw.config(), tol)) {
    throw DegenerateSpan("configuration lies in a proper affine subspace");
  }
  const int target = v * d - (d + 1) * d / 2;
  return numerical_rank(rigidity_matrix(fw).m, tol.zero_rel) == target;
}

namespace {

// Orthonormal column-space basis with a fixed column count taken off the
// leading singular vectors.
Eigen::MatrixXd orthonormal_cols(const Eigen::MatrixXd& m, int count) {
  if (count <= 0) return Eigen::MatrixXd(m.rows(), 0);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU);
  return svd.matrixU().leftCols(count);
}

}  // namespace

Eigen::MatrixXd trivial_flex_basis(const Configuration& cfg, const Tolerances& tol) {
  const int d = cfg.dim();
  const int v = cfg.count();
  const int n_triv = d + d * (d - 1) / 2;
  Eigen::MatrixXd flex(static_cast<Eigen::Index>(v) * d, n_triv);
  flex.setZero();
  int col = 0;
  for (int k = 0; k < d; ++k, ++col) {
    for (int i = 0; i < v; ++i) flex(static_cast<Eigen::Index>(i) * d + k, col) = 1.0;
  }
  // rotation generator in the (a,b) plane: q_i = A p_i with A e_a = e_b, A e_b = -e_a
  for (int a = 0; a < d; ++a) {
    for (int b = a + 1; b < d; ++b, ++col) {
      for (int i = 0; i < v; ++i) {
        flex(static_cast<Eigen::Index>(i) * d + a, col) = -cfg.points()(b, i);
        flex(static_cast<Eigen::Index>(i) * d + b, col) = cfg.points()(a, i);
      }
    }
  }
  (void)tol;
  return orthonormal_cols(flex, n_triv);
}

Eigen::MatrixXd nontrivial_flex_space(const Framework& fw, const Tolerances& tol) {
  const int d = fw.dim();
  const int v = fw.graph().vertex_count();
  if (v < d + 1) {
    throw PreconditionFailed("flex space needs at least d+1 vertices");
  }
  if (!affinely_spans(fw.config(), tol)) {
    throw DegenerateSpan("configuration lies in a proper affine subspace");
  }
  const RigidityMatrix rm = rigidity_matrix(fw);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(rm.m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double sigma_max = sv.size() > 0 ? sv(0) : 0.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > tol.zero_rel * sigma_max) ++rank;
  }
  const Eigen::MatrixXd kernel =
      svd.matrixV().rightCols(static_cast<Eigen::Index>(v) * d - rank);

  const Eigen::MatrixXd triv = trivial_flex_basis(fw.config(), tol);
  const int n_nontriv = static_cast<int>(kernel.cols() - triv.cols());
  // the trivial flexes always lie inside ker(df), so projecting them out
  // leaves exactly n_nontriv directions
  const Eigen::MatrixXd residual = kernel - triv * (triv.transpose() * kernel);
  return orthonormal_cols(residual, n_nontriv);
}

Framework align_onto(const std::vector<std::pair<int, Eigen::VectorXd>>& targets,
                     const Framework& moving, const Tolerances& tol) {
  const int d = moving.dim();
  const int n = static_cast<int>(targets.size());
  if (n < 1) throw Error("alignment needs at least one correspondence");

  Eigen::MatrixXd from(d, n);
  Eigen::MatrixXd to(d, n);
  for (int k = 0; k < n; ++k) {
    const auto& [vk, target] = targets[k];
    if (vk < 0 || vk >= moving.graph().vertex_count()) {
      throw Error("alignment vertex " + std::to_string(vk) + " out of range");
    }
    if (target.size() != d) {
      throw DimensionMismatch("alignment target has wrong dimension");
    }
    from.col(k) = moving.config().point(vk);
    to.col(k) = target;
  }

  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const double da = (from.col(a) - from.col(b)).norm();
      const double db = (to.col(a) - to.col(b)).norm();
      if (std::abs(da - db) > tol.geom_abs) {
        throw IncompatibleDistances(
            "corresponding pairwise distances differ by " + std::to_string(std::abs(da - db)));
      }
    }
  }

  const Eigen::VectorXd from_mean = from.rowwise().mean();
  const Eigen::VectorXd to_mean = to.rowwise().mean();
  const Eigen::MatrixXd h =
      (from.colwise() - from_mean) * (to.colwise() - to_mean).transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::MatrixXd rot = svd.matrixV() * svd.matrixU().transpose();
  const Eigen::VectorXd shift = to_mean - rot * from_mean;

  Eigen::MatrixXd aligned = rot * moving.config().points();
  aligned.colwise() += shift;

  for (int k = 0; k < n; ++k) {
    const double miss = (aligned.col(targets[k].first) - to.col(k)).norm();
    if (miss > tol.geom_abs) {
      throw IncompatibleDistances("aligned vertex misses its target by " +
                                  std::to_string(miss));
    }
  }
  return Framework(moving.graph(), Configuration(d, std::move(aligned)));
}

}  // namespace rigidity
