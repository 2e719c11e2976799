#include "rigidity/attach.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "rigidity/core.hpp"

namespace rigidity {

AttachmentSpec::AttachmentSpec(std::vector<std::pair<int, int>> pairs)
    : pairs_(std::move(pairs)) {
  if (pairs_.empty()) throw Error("attachment needs at least one shared vertex");
  std::set<int> seen_a;
  std::set<int> seen_b;
  for (const auto& [a, b] : pairs_) {
    if (!seen_a.insert(a).second) {
      throw Error("vertex " + std::to_string(a) + " listed twice on side A");
    }
    if (!seen_b.insert(b).second) {
      throw Error("vertex " + std::to_string(b) + " listed twice on side B");
    }
  }
}

Attachment attach(const Framework& fw_a, const Framework& fw_b,
                  const AttachmentSpec& spec, const Tolerances& tol) {
  if (fw_a.dim() != fw_b.dim()) {
    throw DimensionMismatch("frameworks live in different dimensions");
  }
  const int d = fw_a.dim();
  const int va = fw_a.graph().vertex_count();
  const int vb = fw_b.graph().vertex_count();
  const int n = spec.shared_count();

  for (const auto& [a, b] : spec.pairs()) {
    if (a < 0 || a >= va || b < 0 || b >= vb) {
      throw Error("attachment pair (" + std::to_string(a) + "," + std::to_string(b) +
                  ") out of range");
    }
  }
  if (n >= va || n >= vb) {
    throw Error("shared vertices must be a proper subset of both frameworks");
  }

  // shared pairwise distances must agree before any motion is applied
  for (int x = 0; x < n; ++x) {
    for (int y = x + 1; y < n; ++y) {
      const double da = (fw_a.config().point(spec.pairs()[x].first) -
                         fw_a.config().point(spec.pairs()[y].first)).norm();
      const double db = (fw_b.config().point(spec.pairs()[x].second) -
                         fw_b.config().point(spec.pairs()[y].second)).norm();
      if (std::abs(da - db) > tol.geom_abs) {
        throw IncompatibleDistances("shared distance mismatch of " +
                                    std::to_string(std::abs(da - db)));
      }
    }
  }

  std::vector<std::pair<int, Eigen::VectorXd>> targets;
  targets.reserve(n);
  for (const auto& [a, b] : spec.pairs()) {
    targets.emplace_back(b, fw_a.config().point(a));
  }
  const Framework aligned_b = align_onto(targets, fw_b, tol);

  std::vector<int> index_map_a(va);
  for (int i = 0; i < va; ++i) index_map_a[i] = i;
  std::vector<int> index_map_b(vb, -1);
  for (const auto& [a, b] : spec.pairs()) index_map_b[b] = a;
  int next = va;
  for (int b = 0; b < vb; ++b) {
    if (index_map_b[b] < 0) index_map_b[b] = next++;
  }
  const int v = va + vb - n;

  Eigen::MatrixXd points(d, v);
  points.leftCols(va) = fw_a.config().points();
  for (int b = 0; b < vb; ++b) {
    if (index_map_b[b] >= va) points.col(index_map_b[b]) = aligned_b.config().point(b);
  }

  std::vector<Edge> edges;
  edges.reserve(fw_a.graph().edge_count() + fw_b.graph().edge_count());
  for (const Edge& e : fw_a.graph().edges()) edges.push_back(e);
  for (const Edge& e : fw_b.graph().edges()) {
    edges.push_back(make_edge(index_map_b[e.first], index_map_b[e.second]));
  }

  Attachment att;
  att.framework = Framework(Graph(v, std::move(edges)), Configuration(d, std::move(points)));
  att.index_map_a = std::move(index_map_a);
  att.index_map_b = std::move(index_map_b);
  for (const auto& [a, b] : spec.pairs()) att.shared_indices.push_back(a);
  att.source_a = fw_a;
  att.source_b = fw_b;
  return att;
}

bool check_attachment_rigidity_condition(const Attachment& att) {
  return static_cast<int>(att.shared_indices.size()) >= att.framework.dim() + 1;
}

namespace {

void scatter_add(Eigen::MatrixXd& into, const Eigen::MatrixXd& from,
                 const std::vector<int>& map) {
  for (int i = 0; i < from.rows(); ++i) {
    for (int j = 0; j < from.cols(); ++j) {
      into(map[i], map[j]) += from(i, j);
    }
  }
}

// Shared preconditions of the two stress-summing constructions: enough
// shared vertices and both inputs certified against their own frameworks.
void require_combinable(const Attachment& att, const StressMatrix& sm_a,
                        const StressMatrix& sm_b, const Tolerances& tol) {
  const int d = att.framework.dim();
  const int n = static_cast<int>(att.shared_indices.size());
  if (n < d + 1) {
    throw NotEnoughSharedVertices("attachment shares " + std::to_string(n) +
                                  " vertices; needs at least d+1 = " +
                                  std::to_string(d + 1));
  }
  if (!(sm_a.graph == att.source_a.graph())) {
    throw DimensionMismatch("stress matrix A does not match framework A's graph");
  }
  if (!(sm_b.graph == att.source_b.graph())) {
    throw DimensionMismatch("stress matrix B does not match framework B's graph");
  }
  const Certificate cert_a = certify_universal_rigidity(att.source_a, sm_a, tol);
  if (!cert_a.certified()) {
    throw UncertifiedInput("stress matrix A fails certification: " + cert_a.reasons.front());
  }
  const Certificate cert_b = certify_universal_rigidity(att.source_b, sm_b, tol);
  if (!cert_b.certified()) {
    throw UncertifiedInput("stress matrix B fails certification: " + cert_b.reasons.front());
  }
}

Eigen::MatrixXd drop_row_col(const Eigen::MatrixXd& m, int k) {
  const int size = static_cast<int>(m.rows());
  Eigen::MatrixXd out(size - 1, size - 1);
  out.topLeftCorner(k, k) = m.topLeftCorner(k, k);
  out.topRightCorner(k, size - 1 - k) = m.topRightCorner(k, size - 1 - k);
  out.bottomLeftCorner(size - 1 - k, k) = m.bottomLeftCorner(size - 1 - k, k);
  out.bottomRightCorner(size - 1 - k, size - 1 - k) =
      m.bottomRightCorner(size - 1 - k, size - 1 - k);
  return out;
}

}  // namespace

StressMatrix combined_stress(const Attachment& att, const StressMatrix& sm_a,
                             const StressMatrix& sm_b, const Tolerances& tol) {
  require_combinable(att, sm_a, sm_b, tol);
  const int v = att.framework.graph().vertex_count();
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(v, v);
  scatter_add(omega, sm_a.omega, att.index_map_a);
  scatter_add(omega, sm_b.omega, att.index_map_b);
  return StressMatrix{att.framework.graph(), std::move(omega)};
}

StressMatrix combined_stress_via_merge(const Attachment& att, const StressMatrix& sm_a,
                                       const StressMatrix& sm_b, const Tolerances& tol) {
  require_combinable(att, sm_a, sm_b, tol);
  const int d = att.framework.dim();
  const int n = static_cast<int>(att.shared_indices.size());
  if (n <= d + 1) {
    throw PreconditionFailed("merge path needs more than d+1 shared vertices");
  }
  const int va = att.source_a.graph().vertex_count();
  const int vb = att.source_b.graph().vertex_count();

  // intermediate attachment: only the first d+1 pairs are identified; the
  // remaining n-d-1 pairs coincide in space but keep separate indices
  std::vector<std::pair<int, int>> pairs;  // (A index, B index) in spec order
  {
    std::vector<int> b_of_a(va, -1);
    for (int b = 0; b < vb; ++b) {
      if (att.index_map_b[b] < va) b_of_a[att.index_map_b[b]] = b;
    }
    for (int a : att.shared_indices) pairs.emplace_back(a, b_of_a[a]);
  }

  std::vector<int> int_map_b(vb, -1);
  for (int k = 0; k < d + 1; ++k) int_map_b[pairs[k].second] = pairs[k].first;
  int next = va;
  for (int b = 0; b < vb; ++b) {
    if (int_map_b[b] < 0) int_map_b[b] = next++;
  }
  const int v_int = va + vb - (d + 1);

  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(v_int, v_int);
  {
    std::vector<int> identity(va);
    for (int i = 0; i < va; ++i) identity[i] = i;
    scatter_add(omega, sm_a.omega, identity);
  }
  scatter_add(omega, sm_b.omega, int_map_b);

  // fold each coinciding pair: add the B column/row into the A one
  // (an elementary congruence R*omega*R^T), then eliminate it
  std::vector<int> deleted;
  for (int k = d + 1; k < n; ++k) {
    const int pa = pairs[k].first;
    int pb = int_map_b[pairs[k].second];
    for (int del : deleted) {
      if (del < int_map_b[pairs[k].second]) --pb;
    }
    omega.row(pa) += omega.row(pb);
    omega.col(pa) += omega.col(pb);
    omega = drop_row_col(omega, pb);
    deleted.push_back(int_map_b[pairs[k].second]);
  }
  // surviving indices are A's vertices then B-only vertices in B's order,
  // which is exactly the direct attachment layout
  return StressMatrix{att.framework.graph(), std::move(omega)};
}

StressMatrix counter_stress(const Framework& fw_a,
                            const std::vector<std::pair<Edge, double>>& edges_to_add,
                            const Tolerances& tol) {
  if (!infinitesimal_rigidity(fw_a, tol)) {
    throw NotInfinitesimallyRigid("kept framework is not infinitesimally rigid");
  }
  const int va = fw_a.graph().vertex_count();
  const int d = fw_a.dim();

  std::vector<Edge> added;
  for (const auto& [e, w1] : edges_to_add) {
    const Edge norm = make_edge(e.first, e.second);
    if (norm.first < 0 || norm.second >= va) {
      throw Error("added edge endpoint out of range");
    }
    if (fw_a.graph().has_edge(norm.first, norm.second)) {
      throw EdgeAlreadyPresent("edge {" + std::to_string(norm.first) + "," +
                               std::to_string(norm.second) + "} already present");
    }
    if (std::find(added.begin(), added.end(), norm) != added.end()) {
      throw EdgeAlreadyPresent("edge listed twice");
    }
    added.push_back(norm);
  }

  std::vector<Edge> extended_edges = fw_a.graph().edges();
  extended_edges.insert(extended_edges.end(), added.begin(), added.end());
  const Graph extended(va, std::move(extended_edges));

  const RigidityMatrix rm = rigidity_matrix(fw_a);
  const Eigen::MatrixXd dft = rm.m.transpose();  // (va*d) x e
  Eigen::BDCSVD<Eigen::MatrixXd> svd(dft, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(tol.zero_rel);

  Eigen::VectorXd w_total(extended.edge_count());
  w_total.setZero();
  for (std::size_t k = 0; k < edges_to_add.size(); ++k) {
    const Edge e = make_edge(edges_to_add[k].first.first, edges_to_add[k].first.second);
    const double w1 = edges_to_add[k].second;

    Eigen::VectorXd rho = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(va) * d);
    const Eigen::VectorXd diff = fw_a.config().point(e.first) - fw_a.config().point(e.second);
    rho.segment(static_cast<Eigen::Index>(e.first) * d, d) = diff;
    rho.segment(static_cast<Eigen::Index>(e.second) * d, d) = -diff;

    const Eigen::VectorXd rhs = rho * w1;
    const Eigen::VectorXd w = svd.solve(rhs);
    const double rhs_norm = rhs.norm();
    if (rhs_norm > 0.0) {
      const double residual = (dft * w - rhs).norm();
      if (residual > tol.geom_abs * rhs_norm) {
        throw ResidualTooLarge("counter stress solve residual " + std::to_string(residual) +
                               " exceeds tolerance");
      }
    }

    for (int r = 0; r < fw_a.graph().edge_count(); ++r) {
      const Edge& ea = rm.edge_order[static_cast<std::size_t>(r)];
      w_total(extended.edge_index(ea.first, ea.second)) += w(r);
    }
    w_total(extended.edge_index(e.first, e.second)) += -w1;
  }

  return stress_vector_to_matrix(StressVector{extended, std::move(w_total)});
}

EdgeReducedResult edge_reduced_stress(const Attachment& att, const StressMatrix& sm_a,
                                      const StressMatrix& sm_b,
                                      const EdgeReduction& reduction,
                                      const Tolerances& tol) {
  require_combinable(att, sm_a, sm_b, tol);
  const int va = att.source_a.graph().vertex_count();
  const int vb = att.source_b.graph().vertex_count();
  const int v = att.framework.graph().vertex_count();

  std::vector<int> b_of_combined(v, -1);  // combined index -> B vertex
  for (int b = 0; b < vb; ++b) b_of_combined[att.index_map_b[b]] = b;

  std::vector<std::pair<Edge, double>> to_add;
  std::vector<Edge> removed_norm;
  for (const Edge& e : reduction.removed_edges) {
    const Edge norm = make_edge(e.first, e.second);
    const bool shared_i = std::find(att.shared_indices.begin(), att.shared_indices.end(),
                                    norm.first) != att.shared_indices.end();
    const bool shared_j = std::find(att.shared_indices.begin(), att.shared_indices.end(),
                                    norm.second) != att.shared_indices.end();
    if (!shared_i || !shared_j) {
      throw Error("removed edge {" + std::to_string(norm.first) + "," +
                  std::to_string(norm.second) + "} is not between shared vertices");
    }
    // shared vertices hold A's combined indices, so this is also the A-side edge
    if (att.source_a.graph().has_edge(norm.first, norm.second)) {
      throw EdgeAlreadyPresent("removed edge is inherited from both frameworks");
    }
    const int bi = b_of_combined[norm.first];
    const int bj = b_of_combined[norm.second];
    if (!att.source_b.graph().has_edge(bi, bj)) {
      throw Error("removed edge is not present in framework B");
    }
    if (std::find(removed_norm.begin(), removed_norm.end(), norm) != removed_norm.end()) {
      throw Error("removed edge listed twice");
    }
    removed_norm.push_back(norm);
    to_add.emplace_back(norm, sm_b.omega(bi, bj));
  }

  const StressMatrix omega_ak = counter_stress(att.source_a, to_add, tol);
  CombineResult kept = psd_combine(sm_a.omega, omega_ak.omega, tol);
  if (omega_ak.omega.cwiseAbs().maxCoeff() > 0.0) {
    // adding a PSD multiple on top of a passing c cannot break PSD-ness or
    // shrink the kernel, so any verified smaller c is as good as the bound
    const int target = psd_nullity(sm_a.omega, tol).nullity;
    const auto passes = [&](double c) {
      const PsdReport rep = psd_nullity(c * sm_a.omega + omega_ak.omega, tol);
      return rep.is_psd && rep.nullity == target;
    };
    double lo = 0.0;  // largest known failure (0 fails: omega_ak alone)
    double hi = kept.c;
    for (double candidate = 0.5 * kept.c; candidate > 1e-9 * kept.c; candidate *= 0.5) {
      if (!passes(candidate)) {
        lo = candidate;
        break;
      }
      hi = candidate;
    }
    if (lo > 0.0) {
      for (int step = 0; step < 8; ++step) {
        const double mid = std::sqrt(lo * hi);
        (passes(mid) ? hi : lo) = mid;
      }
    }
    kept.c = std::min(4.0 * hi, kept.c);
    kept.combined = kept.c * sm_a.omega + omega_ak.omega;
  }

  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(v, v);
  scatter_add(omega, kept.combined, att.index_map_a);
  scatter_add(omega, sm_b.omega, att.index_map_b);

  const double norm = spectral_norm(omega);
  for (const Edge& e : removed_norm) {
    if (std::abs(omega(e.first, e.second)) > tol.geom_abs * norm) {
      throw ResidualTooLarge("stress at removed edge did not cancel");
    }
  }

  std::vector<Edge> reduced_edges;
  for (const Edge& e : att.framework.graph().edges()) {
    if (std::find(removed_norm.begin(), removed_norm.end(), e) == removed_norm.end()) {
      reduced_edges.push_back(e);
    }
  }
  Framework reduced(Graph(v, std::move(reduced_edges)), att.framework.config());

  EdgeReducedResult result;
  result.c = kept.c;
  result.stress = StressMatrix{reduced.graph(), std::move(omega)};
  result.reduced = std::move(reduced);
  return result;
}

Framework reflection_counterexample(const Attachment& att, const Tolerances& tol) {
  const int d = att.framework.dim();
  const int v = att.framework.graph().vertex_count();
  const int va = att.source_a.graph().vertex_count();
  const int n = static_cast<int>(att.shared_indices.size());
  if (n > d) {
    throw PreconditionFailed("reflection needs at most d shared vertices");
  }

  const Eigen::MatrixXd& p = att.framework.config().points();
  Eigen::MatrixXd shared(d, n);
  for (int k = 0; k < n; ++k) shared.col(k) = p.col(att.shared_indices[k]);
  const Eigen::VectorXd center = shared.rowwise().mean();

  // orthonormal basis of the shared vertices' affine span
  const Eigen::MatrixXd centered = shared.colwise() - center;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeFullU);
  const auto& sv = svd.singularValues();
  int span_rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > tol.zero_rel * sv(0)) ++span_rank;
  }
  const Eigen::MatrixXd span = svd.matrixU().leftCols(span_rank);

  std::vector<int> b_only;
  for (int i = va; i < v; ++i) b_only.push_back(i);

  // residuals of B-only vertices orthogonal to the span pick the mirror normal
  Eigen::MatrixXd residuals(d, static_cast<int>(b_only.size()));
  for (std::size_t k = 0; k < b_only.size(); ++k) {
    const Eigen::VectorXd rel = p.col(b_only[k]) - center;
    residuals.col(static_cast<Eigen::Index>(k)) = rel - span * (span.transpose() * rel);
  }
  if (residuals.cwiseAbs().maxCoeff() <= tol.geom_abs) {
    throw DegenerateReflection("all B-only vertices lie on every candidate mirror");
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> rsvd(residuals, Eigen::ComputeFullU);
  const Eigen::VectorXd normal = rsvd.matrixU().col(0);

  Eigen::MatrixXd reflected = p;
  for (int i : b_only) {
    const double offset = normal.dot(p.col(i) - center);
    reflected.col(i) = p.col(i) - 2.0 * offset * normal;
  }
  Framework flipped(att.framework.graph(), Configuration(d, std::move(reflected)));

  const Eigen::VectorXd lengths_before = edge_function(att.framework);
  const Eigen::VectorXd lengths_after = edge_function(flipped);
  if ((lengths_before - lengths_after).cwiseAbs().maxCoeff() > tol.geom_abs) {
    throw Error("reflection failed to preserve edge lengths");
  }

  double max_change = 0.0;
  for (int a = 0; a < va; ++a) {
    if (std::find(att.shared_indices.begin(), att.shared_indices.end(), a) !=
        att.shared_indices.end()) {
      continue;
    }
    for (int b : b_only) {
      const double before = (p.col(a) - p.col(b)).norm();
      const double after = (p.col(a) - flipped.config().point(b)).norm();
      max_change = std::max(max_change, std::abs(before - after));
    }
  }
  if (max_change <= tol.geom_abs) {
    throw DegenerateReflection("no cross distance changed above tolerance");
  }
  return flipped;
}

}  // namespace rigidity
