#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "rigidity/core.hpp"
#include "rigidity/generate.hpp"

using namespace rigidity;
using testutil::make_fw;

TEST_CASE("edge function on a single edge") {
  const Framework fw = make_fw(1, {0.0, 1.0}, {{0, 1}});
  const Eigen::VectorXd f = edge_function(fw);
  REQUIRE(f.size() == 1);
  CHECK(f(0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("edge function on a triangle") {
  const Framework fw = make_fw(2, {0, 0, 1, 0, 0, 1}, {{0, 1}, {0, 2}, {1, 2}});
  const Eigen::VectorXd f = edge_function(fw);
  CHECK(f(0) == doctest::Approx(0.5));
  CHECK(f(1) == doctest::Approx(0.5));
  CHECK(f(2) == doctest::Approx(1.0));
}

TEST_CASE("edge function matches a direct distance loop on random K4") {
  const Configuration cfg = sample_general_position(4, 2, 11);
  const Framework fw(Graph::complete(4), cfg);
  const Eigen::VectorXd f = edge_function(fw);
  int r = 0;
  for (const Edge& e : fw.graph().edges()) {
    const double dist2 = (cfg.point(e.first) - cfg.point(e.second)).squaredNorm();
    CHECK(f(r) == doctest::Approx(0.5 * dist2).epsilon(1e-14));
    ++r;
  }
}

TEST_CASE("rigidity matrix rows") {
  const Framework one = make_fw(1, {0.0, 1.0}, {{0, 1}});
  const RigidityMatrix rm1 = rigidity_matrix(one);
  CHECK(rm1.m(0, 0) == -1.0);
  CHECK(rm1.m(0, 1) == 1.0);

  const Framework tri = make_fw(2, {0, 0, 1, 0, 0, 1}, {{0, 1}, {0, 2}, {1, 2}});
  const RigidityMatrix rm2 = rigidity_matrix(tri);
  const Eigen::RowVectorXd expected = (Eigen::RowVectorXd(6) << -1, 0, 1, 0, 0, 0).finished();
  CHECK((rm2.m.row(0) - expected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("rigidity matrix blocks cancel exactly") {
  const LaterationPlan plan = random_lateration_plan(2, 7, 5);
  const CertifiedFramework cf = generate_lateration(plan);
  const RigidityMatrix rm = rigidity_matrix(cf.framework);
  const int d = cf.framework.dim();
  for (std::size_t r = 0; r < rm.edge_order.size(); ++r) {
    const auto [i, j] = rm.edge_order[r];
    const auto row = rm.m.row(static_cast<Eigen::Index>(r));
    CHECK((row.segment(i * d, d) + row.segment(j * d, d)).cwiseAbs().maxCoeff() == 0.0);
    for (int k = 0; k < cf.framework.graph().vertex_count(); ++k) {
      if (k != i && k != j) CHECK(row.segment(k * d, d).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("K4 in general position has rigidity rank 5") {
  const Configuration cfg = sample_general_position(4, 2, 3);
  const Framework fw(Graph::complete(4), cfg);
  CHECK(numerical_rank(rigidity_matrix(fw).m, 1e-9) == 5);
}

TEST_CASE("general position predicate") {
  CHECK_FALSE(is_general_position(Configuration(
      2, (Eigen::MatrixXd(2, 3) << 0, 1, 2, 0, 0, 0).finished())));
  CHECK(is_general_position(Configuration(
      2, (Eigen::MatrixXd(2, 3) << 0, 1, 0, 0, 0, 1).finished())));
  // vacuous below d+1 points
  CHECK(is_general_position(Configuration(3, Eigen::MatrixXd::Zero(3, 2))));
}

TEST_CASE("general position agrees with the determinant oracle on random points") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXd pts(2, 6);
    for (int c = 0; c < 6; ++c) {
      pts(0, c) = unit(rng);
      pts(1, c) = unit(rng);
    }
    // occasionally force a collinear triple
    if (trial % 4 == 0) pts.col(2) = 0.5 * (pts.col(0) + pts.col(1));
    const Configuration cfg(2, pts);
    CHECK(is_general_position(cfg) == testutil::det_general_position(cfg));
  }
}

TEST_CASE("general position is invariant under rigid motions") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const Configuration cfg = sample_general_position(6, 3, 100 + trial);
    const bool before = is_general_position(cfg);
    const Eigen::MatrixXd rot = testutil::random_rotation(3, rng);
    Eigen::MatrixXd moved = rot * cfg.points();
    moved.colwise() += Eigen::Vector3d(5.0, -2.0, 0.5);
    CHECK(is_general_position(Configuration(3, moved)) == before);
  }
}

TEST_CASE("infinitesimal rigidity of complete frameworks") {
  for (int d = 1; d <= 3; ++d) {
    const Configuration cfg = sample_general_position(d + 2, d, 40 + d);
    CHECK(infinitesimal_rigidity(Framework(Graph::complete(d + 2), cfg)));
  }
}

TEST_CASE("a path is flexible and a degenerate span errors") {
  const Framework path = make_fw(2, {0, 0, 1, 0, 1, 1}, {{0, 1}, {1, 2}});
  CHECK_FALSE(infinitesimal_rigidity(path));

  const Framework flat = make_fw(2, {0, 0, 1, 0, 2, 0}, {{0, 1}, {1, 2}});
  CHECK_THROWS_AS(infinitesimal_rigidity(flat), DegenerateSpan);
}

TEST_CASE("3-lateration framework in the plane is infinitesimally rigid") {
  const LaterationPlan plan = random_lateration_plan(2, 6, 77);
  const CertifiedFramework cf = generate_lateration(plan);
  CHECK(numerical_rank(rigidity_matrix(cf.framework).m, 1e-9) == 9);
  CHECK(infinitesimal_rigidity(cf.framework));
}

TEST_CASE("trivial flexes lie in the kernel of df") {
  const Configuration cfg = sample_general_position(5, 2, 8);
  const Framework fw(Graph::complete(5), cfg);
  const RigidityMatrix rm = rigidity_matrix(fw);
  const Eigen::MatrixXd triv = trivial_flex_basis(cfg);
  REQUIRE(triv.cols() == 3);
  CHECK((rm.m * triv).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("nontrivial flex space") {
  const Configuration cfg = sample_general_position(4, 2, 12);
  const Framework k4(Graph::complete(4), cfg);
  CHECK(nontrivial_flex_space(k4).cols() == 0);

  const Framework path = make_fw(2, {0, 0, 1, 0, 1, 1}, {{0, 1}, {1, 2}});
  const Eigen::MatrixXd basis = nontrivial_flex_space(path);
  REQUIRE(basis.cols() == 1);
  // flexes are orthogonal displacements along every edge
  for (const Edge& e : path.graph().edges()) {
    const Eigen::Vector2d diff = path.config().point(e.first) - path.config().point(e.second);
    const Eigen::Vector2d qdiff = basis.col(0).segment(e.first * 2, 2) -
                                  basis.col(0).segment(e.second * 2, 2);
    CHECK(std::abs(diff.dot(qdiff)) < 1e-8);
  }
}

TEST_CASE("kernel dimension is d(d+1)/2 exactly when infinitesimally rigid") {
  const LaterationPlan plan = random_lateration_plan(3, 7, 2);
  const CertifiedFramework cf = generate_lateration(plan);
  const RigidityMatrix rm = rigidity_matrix(cf.framework);
  const int kernel_dim = 21 - numerical_rank(rm.m, 1e-9);
  CHECK(kernel_dim == 6);

  const Framework path = make_fw(2, {0, 0, 1, 0, 1, 1}, {{0, 1}, {1, 2}});
  const int path_kernel = 6 - numerical_rank(rigidity_matrix(path).m, 1e-9);
  CHECK(path_kernel > 3);
  CHECK_FALSE(infinitesimal_rigidity(path));
}

TEST_CASE("alignment recovers rigid motions") {
  const Configuration cfg = sample_general_position(5, 3, 31);
  const Framework fw(Graph::complete(5), cfg);

  SUBCASE("identity") {
    std::vector<std::pair<int, Eigen::VectorXd>> targets;
    for (int i = 0; i < 3; ++i) targets.emplace_back(i, cfg.point(i));
    const Framework back = align_onto(targets, fw);
    CHECK((back.config().points() - cfg.points()).cwiseAbs().maxCoeff() < 1e-8);
  }

  SUBCASE("pure translation") {
    Eigen::MatrixXd moved = cfg.points();
    moved.row(0).array() += 5.0;
    moved.row(1).array() += 7.0;
    const Framework shifted(fw.graph(), Configuration(3, moved));
    std::vector<std::pair<int, Eigen::VectorXd>> targets;
    for (int i = 0; i < 5; ++i) targets.emplace_back(i, cfg.point(i));
    const Framework back = align_onto(targets, shifted);
    CHECK((back.config().points() - cfg.points()).cwiseAbs().maxCoeff() < 1e-8);
  }

  SUBCASE("rotation plus translation in 3-D") {
    std::mt19937_64 rng(9);
    const Eigen::MatrixXd rot = testutil::random_rotation(3, rng);
    Eigen::MatrixXd moved = rot * cfg.points();
    moved.colwise() += Eigen::Vector3d(1.0, -4.0, 2.5);
    const Framework displaced(fw.graph(), Configuration(3, moved));
    std::vector<std::pair<int, Eigen::VectorXd>> targets;
    for (int i = 0; i < 5; ++i) targets.emplace_back(i, cfg.point(i));
    const Framework back = align_onto(targets, displaced);
    CHECK((back.config().points() - cfg.points()).cwiseAbs().maxCoeff() < 1e-8);
  }

  SUBCASE("incompatible distances are rejected") {
    Eigen::MatrixXd stretched = cfg.points();
    stretched.col(0) *= 2.0;
    const Framework wrong(fw.graph(), Configuration(3, stretched));
    std::vector<std::pair<int, Eigen::VectorXd>> targets;
    for (int i = 0; i < 4; ++i) targets.emplace_back(i, cfg.point(i));
    CHECK_THROWS_AS(align_onto(targets, wrong), IncompatibleDistances);
  }
}
