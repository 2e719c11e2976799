#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rigidity/types.hpp"

namespace rigidity {

// Equilibrium stress as edge weights, in the graph's edge order.
struct StressVector {
  Graph graph;
  Eigen::VectorXd w;
};

// Symmetric v x v matrix tied to a graph's sparsity pattern. Off-diagonal
// entries carry the edge stresses (zero off-pattern), diagonals make every
// row sum to zero.
struct StressMatrix {
  Graph graph;
  Eigen::MatrixXd omega;
};

enum class Verdict { Certified, NotCertified };

struct Certificate {
  Verdict verdict = Verdict::NotCertified;
  std::vector<std::string> reasons;  // empty iff Certified
  Eigen::VectorXd eigenvalues;       // ascending; empty for property-only checks
  int nullity = 0;
  Tolerances tolerances;

  bool certified() const { return verdict == Verdict::Certified; }
};

struct CertificationFailed : Error {
  Certificate certificate;
  CertificationFailed(const std::string& msg, Certificate cert)
      : Error(msg), certificate(std::move(cert)) {}
};

struct PsdReport {
  bool is_psd = false;
  int nullity = 0;
  Eigen::VectorXd eigenvalues;  // ascending
};

// Orthonormal basis of ker(df^T); every element satisfies the equilibrium
// equation at each vertex. Vectors are sign-normalized so their first
// nonzero component is positive.
std::vector<StressVector> stress_space_basis(const Framework& fw,
                                             const Tolerances& tol = {});

StressMatrix stress_vector_to_matrix(const StressVector& sv);

// Checks the four stress-matrix properties (symmetry, sparsity pattern,
// zero row sums, annihilation of the coordinate projections), each within
// geom_abs relative to the matrix norm. Reasons list the violated ones.
Certificate verify_stress_matrix(const StressMatrix& sm, const Framework& fw,
                                 const Tolerances& tol = {});

// Symmetrizes, then decides PSD-ness and nullity with the zero_rel
// eigenvalue threshold. The zero matrix is PSD with full nullity.
PsdReport psd_nullity(const Eigen::MatrixXd& m, const Tolerances& tol = {});

// Full certificate: general position + stress-matrix properties + PSD of
// nullity exactly d+1. Requires v >= d+2 (TooFewVertices below that).
Certificate certify_universal_rigidity(const Framework& fw, const StressMatrix& sm,
                                       const Tolerances& tol = {});

// True iff span{coordinate projections, ones} equals the numerical kernel
// of the stress matrix (mutual projection residuals within geom_abs).
// PreconditionFailed unless the matrix is PSD of nullity d+1.
bool kernel_basis_check(const StressMatrix& sm, const Framework& fw,
                        const Tolerances& tol = {});

// Certified base-case stress for a complete framework in general position:
// the orthogonal projector onto the complement of the bordered matrix's
// row space. PSD of nullity d+1; the zero matrix when v == d+1.
StressMatrix complete_graph_stress(const Framework& fw, const Tolerances& tol = {});

struct CombineResult {
  double c = 1.0;
  Eigen::MatrixXd combined;
};

// For PSD omega1 and any symmetric omega2 with ker(omega1) contained in
// ker(omega2), returns c = 2*|omega2|_2 / lambda_r(omega1) (c = 1 when
// omega2 is zero) and c*omega1 + omega2, PSD with the nullity of omega1.
CombineResult psd_combine(const Eigen::MatrixXd& omega1, const Eigen::MatrixXd& omega2,
                          const Tolerances& tol = {});

struct StressCombineResult {
  double c = 1.0;
  StressMatrix combined;  // graph is the union of both edge sets
};

StressCombineResult psd_combine(const StressMatrix& omega1, const StressMatrix& omega2,
                                const Tolerances& tol = {});

// Orthonormal eigen-kernel of a symmetric matrix under the zero_rel threshold.
Eigen::MatrixXd kernel_basis(const Eigen::MatrixXd& sym, const Tolerances& tol = {});

// Largest absolute eigenvalue of a symmetric matrix.
double spectral_norm(const Eigen::MatrixXd& sym);

}  // namespace rigidity
