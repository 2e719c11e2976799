#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rigidity/types.hpp"

namespace rigidity {

// Entry for edge {i,j} is 0.5 * |p_i - p_j|^2, in the graph's edge order.
Eigen::VectorXd edge_function(const Framework& fw);

RigidityMatrix rigidity_matrix(const Framework& fw);

// Coordinates with an appended all-ones row: (d+1) x v.
Eigen::MatrixXd bordered_matrix(const Configuration& cfg);

// Count of singular values above zero_rel * sigma_max.
int numerical_rank(const Eigen::MatrixXd& m, double zero_rel);

// True iff every (d+1)-subset of the bordered matrix has full rank,
// judged per submatrix by sigma_min > zero_rel * sigma_max. Vacuously
// true for configurations with at most d points.
bool is_general_position(const Configuration& cfg, const Tolerances& tol = {});

// True iff the configuration does not lie in a proper affine subspace.
bool affinely_spans(const Configuration& cfg, const Tolerances& tol = {});

// rank(df) == v*d - (d+1)(d+2)/2. Requires v >= d+1 and a configuration
// with full affine span (DegenerateSpan otherwise).
bool infinitesimal_rigidity(const Framework& fw, const Tolerances& tol = {});

// Orthonormal spanning set of the trivial flexes at the given
// configuration: d translations plus the d(d-1)/2 elementary rotation
// generators applied to the points.
Eigen::MatrixXd trivial_flex_basis(const Configuration& cfg, const Tolerances& tol = {});

// Orthonormal basis of ker(df) orthogonal to the trivial flexes;
// zero columns iff the framework is infinitesimally rigid.
Eigen::MatrixXd nontrivial_flex_space(const Framework& fw, const Tolerances& tol = {});

// Least-squares rigid alignment (orthogonal transform plus translation,
// reflections permitted) moving the framework so that each listed vertex
// lands on its target coordinate. Targets are (vertex in moving, target
// point) pairs; pairwise target distances must agree with the moving
// framework within geom_abs.
Framework align_onto(const std::vector<std::pair<int, Eigen::VectorXd>>& targets,
                     const Framework& moving, const Tolerances& tol = {});

}  // namespace rigidity
