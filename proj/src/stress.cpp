#include "rigidity/stress.hpp"

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "rigidity/core.hpp"

namespace rigidity {

namespace {

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m) {
  return 0.5 * (m + m.transpose());
}

void normalize_sign(Eigen::VectorXd& w) {
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (std::abs(w(i)) > 1e-9) {
      if (w(i) < 0.0) w = -w;
      return;
    }
  }
}

}  // namespace

std::vector<StressVector> stress_space_basis(const Framework& fw, const Tolerances& tol) {
  const RigidityMatrix rm = rigidity_matrix(fw);
  const int e = fw.graph().edge_count();
  std::vector<StressVector> basis;
  if (e == 0) return basis;

  // stresses = ker(df^T) = left null space of df
  Eigen::BDCSVD<Eigen::MatrixXd> svd(rm.m, Eigen::ComputeFullU);
  const auto& sv = svd.singularValues();
  const double sigma_max = sv.size() > 0 ? sv(0) : 0.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > tol.zero_rel * sigma_max) ++rank;
  }
  for (int c = rank; c < e; ++c) {
    Eigen::VectorXd w = svd.matrixU().col(c);
    normalize_sign(w);
    basis.push_back(StressVector{fw.graph(), std::move(w)});
  }
  return basis;
}

StressMatrix stress_vector_to_matrix(const StressVector& sv) {
  const int v = sv.graph.vertex_count();
  if (sv.w.size() != sv.graph.edge_count()) {
    throw DimensionMismatch("stress vector length != edge count");
  }
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(v, v);
  const auto& edges = sv.graph.edges();
  for (std::size_t r = 0; r < edges.size(); ++r) {
    const auto [i, j] = edges[r];
    const double w = sv.w(static_cast<Eigen::Index>(r));
    omega(i, j) = w;
    omega(j, i) = w;
    omega(i, i) -= w;
    omega(j, j) -= w;
  }
  return StressMatrix{sv.graph, std::move(omega)};
}

Certificate verify_stress_matrix(const StressMatrix& sm, const Framework& fw,
                                 const Tolerances& tol) {
  const int v = fw.graph().vertex_count();
  if (sm.omega.rows() != v || sm.omega.cols() != v || sm.graph.vertex_count() != v) {
    throw DimensionMismatch("stress matrix size does not match framework");
  }
  Certificate cert;
  cert.tolerances = tol;
  const Eigen::MatrixXd& omega = sm.omega;
  const double scale = omega.size() > 0 ? omega.cwiseAbs().maxCoeff() : 0.0;
  const double thr = tol.geom_abs * scale;

  if (((omega - omega.transpose()).cwiseAbs().maxCoeff()) > thr) {
    cert.reasons.push_back("property(1) symmetry");
  }
  double off_pattern = 0.0;
  for (int i = 0; i < v; ++i) {
    for (int j = i + 1; j < v; ++j) {
      if (!sm.graph.has_edge(i, j)) {
        off_pattern = std::max(off_pattern, std::abs(omega(i, j)));
        off_pattern = std::max(off_pattern, std::abs(omega(j, i)));
      }
    }
  }
  if (off_pattern > thr) {
    cert.reasons.push_back("property(2) nonzero entry at a non-edge");
  }
  if (omega.rowwise().sum().cwiseAbs().maxCoeff() > thr) {
    cert.reasons.push_back("property(3) row sums");
  }
  // sum_j omega_ij p_j = 0, one residual row per vertex
  const Eigen::MatrixXd equilibrium = omega * fw.config().points().transpose();
  if (equilibrium.cwiseAbs().maxCoeff() > thr) {
    cert.reasons.push_back("property(4) equilibrium");
  }

  cert.verdict = cert.reasons.empty() ? Verdict::Certified : Verdict::NotCertified;
  return cert;
}

PsdReport psd_nullity(const Eigen::MatrixXd& m, const Tolerances& tol) {
  if (m.rows() != m.cols()) throw DimensionMismatch("matrix is not square");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrized(m));
  PsdReport rep;
  rep.eigenvalues = es.eigenvalues();
  const double lam_max = rep.eigenvalues.size() > 0 ? rep.eigenvalues.cwiseAbs().maxCoeff() : 0.0;
  const double thr = tol.zero_rel * lam_max;
  rep.is_psd = rep.eigenvalues.size() == 0 || rep.eigenvalues(0) >= -thr;
  rep.nullity = 0;
  for (Eigen::Index i = 0; i < rep.eigenvalues.size(); ++i) {
    if (std::abs(rep.eigenvalues(i)) <= thr) ++rep.nullity;
  }
  return rep;
}

Certificate certify_universal_rigidity(const Framework& fw, const StressMatrix& sm,
                                       const Tolerances& tol) {
  const int d = fw.dim();
  if (fw.graph().vertex_count() < d + 2) {
    throw TooFewVertices("certification needs at least d+2 vertices");
  }
  Certificate cert = verify_stress_matrix(sm, fw, tol);
  if (!is_general_position(fw.config(), tol)) {
    cert.reasons.insert(cert.reasons.begin(), "general-position");
  }
  const PsdReport rep = psd_nullity(sm.omega, tol);
  cert.eigenvalues = rep.eigenvalues;
  cert.nullity = rep.nullity;
  if (!rep.is_psd) cert.reasons.push_back("not PSD");
  if (rep.nullity != d + 1) {
    cert.reasons.push_back("nullity " + std::to_string(rep.nullity) + " != " +
                           std::to_string(d + 1));
  }
  cert.verdict = cert.reasons.empty() ? Verdict::Certified : Verdict::NotCertified;
  return cert;
}

Eigen::MatrixXd kernel_basis(const Eigen::MatrixXd& sym, const Tolerances& tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrized(sym));
  const auto& lam = es.eigenvalues();
  const double lam_max = lam.size() > 0 ? lam.cwiseAbs().maxCoeff() : 0.0;
  const double thr = tol.zero_rel * lam_max;
  int count = 0;
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (std::abs(lam(i)) <= thr) ++count;
  }
  Eigen::MatrixXd basis(sym.rows(), count);
  int col = 0;
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (std::abs(lam(i)) <= thr) basis.col(col++) = es.eigenvectors().col(i);
  }
  return basis;
}

double spectral_norm(const Eigen::MatrixXd& sym) {
  if (sym.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrized(sym));
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

bool kernel_basis_check(const StressMatrix& sm, const Framework& fw,
                        const Tolerances& tol) {
  const int d = fw.dim();
  const PsdReport rep = psd_nullity(sm.omega, tol);
  if (!rep.is_psd || rep.nullity != d + 1) {
    throw PreconditionFailed("stress matrix is not PSD of nullity d+1");
  }
  const Eigen::MatrixXd kernel = kernel_basis(sm.omega, tol);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(bordered_matrix(fw.config()).transpose(),
                                        Eigen::ComputeThinU);
  const Eigen::MatrixXd span = svd.matrixU().leftCols(d + 1);

  const double r_kernel =
      (kernel - span * (span.transpose() * kernel)).cwiseAbs().maxCoeff();
  const double r_span =
      (span - kernel * (kernel.transpose() * span)).cwiseAbs().maxCoeff();
  return r_kernel <= tol.geom_abs && r_span <= tol.geom_abs;
}

StressMatrix complete_graph_stress(const Framework& fw, const Tolerances& tol) {
  const int v = fw.graph().vertex_count();
  const int d = fw.dim();
  if (!fw.graph().is_complete()) {
    throw NotComplete("framework graph is not complete");
  }
  if (v < d + 1) {
    throw TooFewVertices("complete-graph stress needs at least d+1 vertices");
  }
  if (!is_general_position(fw.config(), tol)) {
    throw NotGeneralPosition("configuration is not in general position");
  }
  if (v == d + 1) {
    // the simplex carries only the zero stress
    return StressMatrix{fw.graph(), Eigen::MatrixXd::Zero(v, v)};
  }
  // projector onto the complement of the bordered matrix's row space;
  // general position makes the d+1 rows independent
  const Eigen::MatrixXd bt = bordered_matrix(fw.config()).transpose();  // v x (d+1)
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(bt);
  const Eigen::MatrixXd q =
      qr.householderQ() * Eigen::MatrixXd::Identity(v, d + 1);
  Eigen::MatrixXd omega = Eigen::MatrixXd::Identity(v, v) - q * q.transpose();
  omega = 0.5 * (omega + omega.transpose());
  return StressMatrix{fw.graph(), std::move(omega)};
}

CombineResult psd_combine(const Eigen::MatrixXd& omega1, const Eigen::MatrixXd& omega2,
                          const Tolerances& tol) {
  if (omega1.rows() != omega1.cols() || omega2.rows() != omega2.cols() ||
      omega1.rows() != omega2.rows()) {
    throw DimensionMismatch("psd_combine operands must be square and equally sized");
  }
  const PsdReport rep1 = psd_nullity(omega1, tol);
  if (!rep1.is_psd) throw NotPsd("first operand is not PSD");

  CombineResult result;
  if (omega2.size() == 0 || omega2.cwiseAbs().maxCoeff() == 0.0) {
    result.c = 1.0;
    result.combined = omega1;
    return result;
  }

  const double norm2 = spectral_norm(omega2);
  const Eigen::MatrixXd k1 = kernel_basis(omega1, tol);
  if (k1.cols() > 0) {
    const double residual = (omega2 * k1).cwiseAbs().maxCoeff();
    if (residual > tol.geom_abs * norm2) {
      throw KernelNotContained("ker(omega1) is not contained in ker(omega2)");
    }
  }

  // smallest positive eigenvalue of omega1
  const double lam_max = rep1.eigenvalues.cwiseAbs().maxCoeff();
  const double thr = tol.zero_rel * lam_max;
  double lam_r = 0.0;
  for (Eigen::Index i = 0; i < rep1.eigenvalues.size(); ++i) {
    if (rep1.eigenvalues(i) > thr) {
      lam_r = rep1.eigenvalues(i);
      break;
    }
  }
  if (lam_r <= 0.0) {
    // omega1 == 0 while omega2 != 0 contradicts kernel containment
    throw KernelNotContained("first operand has no positive eigenvalue");
  }

  result.c = 2.0 * norm2 / lam_r;
  result.combined = result.c * omega1 + omega2;
  return result;
}

StressCombineResult psd_combine(const StressMatrix& omega1, const StressMatrix& omega2,
                                const Tolerances& tol) {
  if (omega1.graph.vertex_count() != omega2.graph.vertex_count()) {
    throw DimensionMismatch("stress matrices are for different vertex counts");
  }
  CombineResult r = psd_combine(omega1.omega, omega2.omega, tol);
  std::vector<Edge> edges = omega1.graph.edges();
  const auto& more = omega2.graph.edges();
  edges.insert(edges.end(), more.begin(), more.end());
  Graph merged(omega1.graph.vertex_count(), std::move(edges));
  return StressCombineResult{r.c, StressMatrix{std::move(merged), std::move(r.combined)}};
}

}  // namespace rigidity
