#pragma once

#include <utility>
#include <vector>

#include "rigidity/stress.hpp"
#include "rigidity/types.hpp"

namespace rigidity {

// Correspondence between a vertex subset of framework A and one of
// framework B. Shared vertices are given explicitly; label equality
// across frameworks never matters.
class AttachmentSpec {
 public:
  explicit AttachmentSpec(std::vector<std::pair<int, int>> pairs);

  const std::vector<std::pair<int, int>>& pairs() const { return pairs_; }
  int shared_count() const { return static_cast<int>(pairs_.size()); }

 private:
  std::vector<std::pair<int, int>> pairs_;
};

// Result of joining two frameworks on their shared vertices. Combined
// indices put A's vertices first (0..vA-1), then B-only vertices in B's
// order. Keeps the (unaligned) source frameworks so stress inputs can be
// verified against them later.
struct Attachment {
  Framework framework;            // v = vA + vB - n
  std::vector<int> index_map_a;   // vertex in A -> combined index
  std::vector<int> index_map_b;   // vertex in B -> combined index
  std::vector<int> shared_indices;  // combined indices, in spec order
  Framework source_a;
  Framework source_b;
};

// Edges to drop from an attachment, in combined indices. Every edge must
// join two shared vertices, be present in B's image and absent from A's;
// A is the kept side by convention (swap arguments for the mirror case).
struct EdgeReduction {
  std::vector<Edge> removed_edges;
};

// Rigidly aligns B onto A's shared coordinates and merges. Shared
// pairwise distances must agree within geom_abs across the two inputs.
Attachment attach(const Framework& fw_a, const Framework& fw_b,
                  const AttachmentSpec& spec, const Tolerances& tol = {});

// n >= d+1.
bool check_attachment_rigidity_condition(const Attachment& att);

// Sum of the two stress matrices, each zero-padded into combined indices
// (shared rows and columns overlap and add). Inputs must certify against
// their source frameworks; requires n >= d+1.
StressMatrix combined_stress(const Attachment& att, const StressMatrix& sm_a,
                             const StressMatrix& sm_b, const Tolerances& tol = {});

// Same matrix obtained the long way: build the intermediate attachment
// sharing only d+1 vertices, then fold each remaining coinciding pair by
// row/column addition and elimination. Requires n > d+1.
StressMatrix combined_stress_via_merge(const Attachment& att, const StressMatrix& sm_a,
                                       const StressMatrix& sm_b,
                                       const Tolerances& tol = {});

// For each absent edge {i,j} with target stress w1, solves df^T w = rho*w1
// by minimum-norm least squares and assembles the per-edge stress vectors
// (w, -w1) into one stress matrix on A's graph extended by the new edges.
// The entry at each added edge equals -w1. Requires an infinitesimally
// rigid framework.
StressMatrix counter_stress(const Framework& fw_a,
                            const std::vector<std::pair<Edge, double>>& edges_to_add,
                            const Tolerances& tol = {});

struct EdgeReducedResult {
  double c = 1.0;
  StressMatrix stress;  // on the reduced graph; exact zeros at removed edges
  Framework reduced;    // attachment framework minus the removed edges
};

// c*extended(A) + extended(AK) + extended(B) with the counter stresses
// read off B's matrix, per removed edge. The removed-edge entries cancel;
// the result is a stress matrix for the reduced framework. The constant
// starts from the Weyl bound of psd_combine and is then bisected down to
// the smallest verified multiple that keeps c*A + AK positive semidefinite
// at A's nullity; the bound is safe but so loose that repeated attachments
// would crush the spectral gap of the carried certificate.
EdgeReducedResult edge_reduced_stress(const Attachment& att, const StressMatrix& sm_a,
                                      const StressMatrix& sm_b,
                                      const EdgeReduction& reduction,
                                      const Tolerances& tol = {});

// For attachments joined on n <= d vertices: reflects all B-only vertices
// across a hyperplane containing the shared vertices' affine span. The
// result has identical edge lengths but a changed cross distance, so the
// attachment cannot be universally rigid.
Framework reflection_counterexample(const Attachment& att, const Tolerances& tol = {});

}  // namespace rigidity
