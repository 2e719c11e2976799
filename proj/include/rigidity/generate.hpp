#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "rigidity/attach.hpp"
#include "rigidity/stress.hpp"
#include "rigidity/types.hpp"

namespace rigidity {

// Combinatorics of a (d+1)-lateration build: vertices 0..d form the
// complete seed clique; attach_order[k] lists the d+1 distinct earlier
// neighbors of vertex d+1+k.
struct LaterationPlan {
  int d = 0;
  int v = 0;
  std::uint64_t seed = 0;
  std::vector<std::vector<int>> attach_order;
};

void validate(const LaterationPlan& plan);

LaterationPlan random_lateration_plan(int d, int v, std::uint64_t seed);

// v points drawn uniformly from [0,1]^d with a seeded generator,
// rejection-resampled until they pass is_general_position. Deterministic
// per seed; ExhaustedRetries after a fixed budget.
Configuration sample_general_position(int v, int d, std::uint64_t seed,
                                      const Tolerances& tol = {});

struct CertifiedFramework {
  Framework framework;
  StressMatrix stress;
};

// Grows the plan's framework by repeated edge-reduced attachment of
// complete frameworks, carrying a certified stress matrix through every
// step. New vertices are sampled uniformly in the 50%-inflated bounding
// box of their neighbors, rejection-tested for general position.
CertifiedFramework generate_lateration(const LaterationPlan& plan,
                                       const Tolerances& tol = {});

// Same, with the first pinned.cols() vertex coordinates fixed instead of
// sampled (at least d+1 of them, in general position). Lets callers grow
// a lateration framework onto an existing vertex subset.
CertifiedFramework generate_lateration(const LaterationPlan& plan,
                                       const Eigen::MatrixXd& pinned,
                                       const Tolerances& tol = {});

// One-call wrapper: attach, synthesize the edge-reduced stress, certify.
// Throws CertificationFailed carrying the certificate if the final check
// does not pass.
CertifiedFramework compose_certified(const Framework& fw_a, const StressMatrix& sm_a,
                                     const Framework& fw_b, const StressMatrix& sm_b,
                                     const AttachmentSpec& spec,
                                     const EdgeReduction& reduction,
                                     const Tolerances& tol = {});

}  // namespace rigidity
