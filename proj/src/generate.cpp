#include "rigidity/generate.hpp"

#include <algorithm>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rigidity/core.hpp"

namespace rigidity {

namespace {

constexpr int kRetryBudget = 100;

// Deterministic uniform double in [0,1) from the raw 64-bit stream, so the
// output does not depend on the standard library's distribution details.
double unit_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int unit_int(std::mt19937_64& rng, int bound) {
  const int k = static_cast<int>(unit_double(rng) * bound);
  return std::min(k, bound - 1);
}

Eigen::MatrixXd sample_points(std::mt19937_64& rng, int d, int count,
                              const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
  Eigen::MatrixXd pts(d, count);
  for (int c = 0; c < count; ++c) {
    for (int r = 0; r < d; ++r) {
      pts(r, c) = lo(r) + (hi(r) - lo(r)) * unit_double(rng);
    }
  }
  return pts;
}

}  // namespace

void validate(const LaterationPlan& plan) {
  if (plan.d < 1) throw Error("lateration plan needs d >= 1");
  if (plan.v < plan.d + 1) throw Error("lateration plan needs v >= d+1");
  if (static_cast<int>(plan.attach_order.size()) != plan.v - plan.d - 1) {
    throw Error("lateration plan lists " + std::to_string(plan.attach_order.size()) +
                " attachment steps; expected " + std::to_string(plan.v - plan.d - 1));
  }
  for (std::size_t k = 0; k < plan.attach_order.size(); ++k) {
    const int vertex = plan.d + 1 + static_cast<int>(k);
    const auto& nbrs = plan.attach_order[k];
    if (static_cast<int>(nbrs.size()) != plan.d + 1) {
      throw Error("vertex " + std::to_string(vertex) + " must list exactly d+1 neighbors");
    }
    std::vector<int> sorted = nbrs;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw Error("vertex " + std::to_string(vertex) + " lists a neighbor twice");
    }
    if (sorted.front() < 0 || sorted.back() >= vertex) {
      throw Error("vertex " + std::to_string(vertex) + " lists a non-earlier neighbor");
    }
  }
}

LaterationPlan random_lateration_plan(int d, int v, std::uint64_t seed) {
  if (d < 1 || v < d + 1) throw Error("lateration plan needs d >= 1 and v >= d+1");
  LaterationPlan plan;
  plan.d = d;
  plan.v = v;
  plan.seed = seed;
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  for (int vertex = d + 1; vertex < v; ++vertex) {
    std::vector<int> pool(vertex);
    for (int i = 0; i < vertex; ++i) pool[i] = i;
    for (int pick = 0; pick < d + 1; ++pick) {
      const int j = pick + unit_int(rng, vertex - pick);
      std::swap(pool[pick], pool[j]);
    }
    std::vector<int> nbrs(pool.begin(), pool.begin() + d + 1);
    std::sort(nbrs.begin(), nbrs.end());
    plan.attach_order.push_back(std::move(nbrs));
  }
  return plan;
}

Configuration sample_general_position(int v, int d, std::uint64_t seed,
                                      const Tolerances& tol) {
  if (v < 1 || d < 1) throw Error("sample_general_position needs v >= 1 and d >= 1");
  std::mt19937_64 rng(seed);
  const Eigen::VectorXd lo = Eigen::VectorXd::Zero(d);
  const Eigen::VectorXd hi = Eigen::VectorXd::Ones(d);
  for (int attempt = 0; attempt < kRetryBudget; ++attempt) {
    Configuration cfg(d, sample_points(rng, d, v, lo, hi));
    if (is_general_position(cfg, tol)) return cfg;
  }
  throw ExhaustedRetries("no general-position sample within the retry budget");
}

CertifiedFramework generate_lateration(const LaterationPlan& plan, const Tolerances& tol) {
  return generate_lateration(plan, Eigen::MatrixXd(plan.d, 0), tol);
}

CertifiedFramework generate_lateration(const LaterationPlan& plan,
                                       const Eigen::MatrixXd& pinned,
                                       const Tolerances& tol) {
  validate(plan);
  const int d = plan.d;
  const int pinned_count = static_cast<int>(pinned.cols());
  if (pinned_count > 0) {
    if (pinned.rows() != d) throw DimensionMismatch("pinned points have wrong dimension");
    if (pinned_count < d + 1) {
      throw Error("pinned points must cover at least the d+1 seed vertices");
    }
    if (pinned_count > plan.v) throw Error("more pinned points than plan vertices");
    if (!is_general_position(Configuration(d, pinned), tol)) {
      throw NotGeneralPosition("pinned points are not in general position");
    }
  }

  std::mt19937_64 rng(plan.seed);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(d);
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(d);

  Eigen::MatrixXd points(d, plan.v);
  if (pinned_count > 0) {
    points.leftCols(d + 1) = pinned.leftCols(d + 1);
  } else {
    bool placed = false;
    for (int attempt = 0; attempt < kRetryBudget && !placed; ++attempt) {
      points.leftCols(d + 1) = sample_points(rng, d, d + 1, zero, one);
      placed = is_general_position(Configuration(d, points.leftCols(d + 1)), tol);
    }
    if (!placed) throw ExhaustedRetries("no general-position seed within the retry budget");
  }

  Framework current(Graph::complete(d + 1), Configuration(d, points.leftCols(d + 1)));
  StressMatrix stress = complete_graph_stress(current, tol);

  for (int vertex = d + 1; vertex < plan.v; ++vertex) {
    const auto& nbrs = plan.attach_order[static_cast<std::size_t>(vertex - d - 1)];
    const bool pinned_vertex = vertex < pinned_count;

    Eigen::VectorXd center;
    Eigen::VectorXd half;
    if (!pinned_vertex) {
      Eigen::MatrixXd nbr_pts(d, d + 1);
      for (int t = 0; t <= d; ++t) nbr_pts.col(t) = points.col(nbrs[t]);
      const Eigen::VectorXd lo = nbr_pts.rowwise().minCoeff();
      const Eigen::VectorXd hi = nbr_pts.rowwise().maxCoeff();
      center = 0.5 * (lo + hi);
      half = 0.75 * (hi - lo);  // box inflated by 50%
    }

    bool committed = false;
    std::string last_failure = "no placement attempted";
    for (int attempt = 0; attempt < kRetryBudget && !committed; ++attempt) {
      if (pinned_vertex) {
        points.col(vertex) = pinned.col(vertex);
      } else {
        points.col(vertex) = sample_points(rng, d, 1, center - half, center + half);
      }
      if (!is_general_position(Configuration(d, points.leftCols(vertex + 1)), tol)) {
        last_failure = "general position failed";
        if (pinned_vertex) break;
        continue;
      }

      if (vertex == d + 1) {
        // the first step attaches a complete framework to the whole seed
        // clique, which is just the complete framework on d+2 vertices
        current = Framework(Graph::complete(d + 2),
                            Configuration(d, points.leftCols(d + 2)));
        stress = complete_graph_stress(current, tol);
        committed = true;
        break;
      }

      Eigen::MatrixXd b_pts(d, d + 2);
      for (int t = 0; t <= d; ++t) b_pts.col(t) = points.col(nbrs[t]);
      b_pts.col(d + 1) = points.col(vertex);
      const Framework fw_b(Graph::complete(d + 2), Configuration(d, std::move(b_pts)));

      std::vector<std::pair<int, int>> pairs;
      for (int t = 0; t <= d; ++t) pairs.emplace_back(nbrs[t], t);

      EdgeReduction reduction;
      for (int x = 0; x <= d; ++x) {
        for (int y = x + 1; y <= d; ++y) {
          if (!current.graph().has_edge(nbrs[x], nbrs[y])) {
            reduction.removed_edges.push_back(make_edge(nbrs[x], nbrs[y]));
          }
        }
      }

      try {
        const StressMatrix sm_b = complete_graph_stress(fw_b, tol);
        const Attachment att = attach(current, fw_b, AttachmentSpec(pairs), tol);
        EdgeReducedResult step = edge_reduced_stress(att, stress, sm_b, reduction, tol);
        const Certificate cert = certify_universal_rigidity(step.reduced, step.stress, tol);
        if (!cert.certified()) {
          last_failure = "certification failed: " + cert.reasons.front();
          if (pinned_vertex) break;
          continue;
        }
        current = std::move(step.reduced);
        stress = std::move(step.stress);
        const double scale = spectral_norm(stress.omega);
        if (scale > 0.0) stress.omega /= scale;
        committed = true;
      } catch (const Error& err) {
        last_failure = err.what();
        if (pinned_vertex) break;
      }
    }
    if (!committed) {
      throw GeneralPositionFailure("vertex " + std::to_string(vertex) +
                                   " found no valid placement: " + last_failure);
    }
  }

  return CertifiedFramework{std::move(current), std::move(stress)};
}

CertifiedFramework compose_certified(const Framework& fw_a, const StressMatrix& sm_a,
                                     const Framework& fw_b, const StressMatrix& sm_b,
                                     const AttachmentSpec& spec,
                                     const EdgeReduction& reduction,
                                     const Tolerances& tol) {
  const Attachment att = attach(fw_a, fw_b, spec, tol);
  EdgeReducedResult result = edge_reduced_stress(att, sm_a, sm_b, reduction, tol);
  const Certificate cert = certify_universal_rigidity(result.reduced, result.stress, tol);
  if (!cert.certified()) {
    throw CertificationFailed("composed framework failed certification: " +
                              cert.reasons.front(), cert);
  }
  return CertifiedFramework{std::move(result.reduced), std::move(result.stress)};
}

}  // namespace rigidity
