#include <doctest.h>

#include "helpers.hpp"
#include "rigidity/generate.hpp"

using namespace rigidity;

TEST_CASE("sample_general_position") {
  SUBCASE("a simplex is affinely independent") {
    const Configuration cfg = sample_general_position(4, 3, 5);
    CHECK(is_general_position(cfg));
    CHECK(affinely_spans(cfg));
  }

  SUBCASE("fixed seeds reproduce coordinates bitwise") {
    const Configuration a = sample_general_position(8, 2, 99);
    const Configuration b = sample_general_position(8, 2, 99);
    CHECK((a.points() - b.points()).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("every bordered submatrix is regular") {
    const Configuration cfg = sample_general_position(10, 3, 123);
    CHECK(testutil::det_general_position(cfg));
  }
}

TEST_CASE("lateration plan validation") {
  CHECK_THROWS_AS(random_lateration_plan(0, 4, 1), Error);
  CHECK_THROWS_AS(random_lateration_plan(2, 2, 1), Error);

  LaterationPlan plan = random_lateration_plan(2, 8, 4);
  CHECK_NOTHROW(validate(plan));
  CHECK(plan.attach_order.size() == 5);
  for (std::size_t k = 0; k < plan.attach_order.size(); ++k) {
    CHECK(plan.attach_order[k].size() == 3);
  }

  SUBCASE("duplicate neighbors rejected") {
    plan.attach_order[1] = {0, 0, 1};
    CHECK_THROWS_AS(validate(plan), Error);
  }
  SUBCASE("forward references rejected") {
    plan.attach_order[0] = {0, 1, 5};
    CHECK_THROWS_AS(validate(plan), Error);
  }
  SUBCASE("wrong neighbor count rejected") {
    plan.attach_order[2] = {0, 1};
    CHECK_THROWS_AS(validate(plan), Error);
  }
}

TEST_CASE("generate_lateration") {
  SUBCASE("v = d+1 is the simplex with the zero stress") {
    LaterationPlan plan = random_lateration_plan(2, 3, 8);
    const CertifiedFramework cf = generate_lateration(plan);
    CHECK(cf.framework.graph().vertex_count() == 3);
    CHECK(cf.framework.graph().is_complete());
    CHECK(cf.stress.omega.cwiseAbs().maxCoeff() < 1e-12);
  }

  SUBCASE("edge count follows the lateration formula") {
    const CertifiedFramework cf = generate_lateration(random_lateration_plan(2, 6, 9));
    CHECK(cf.framework.graph().edge_count() == 12);  // 3 + 3*3
    CHECK(testutil::is_lateration_graph(cf.framework.graph(), 2));
  }

  SUBCASE("certified and infinitesimally rigid") {
    const CertifiedFramework cf = generate_lateration(random_lateration_plan(2, 8, 10));
    CHECK(certify_universal_rigidity(cf.framework, cf.stress).certified());
    CHECK(infinitesimal_rigidity(cf.framework));
    CHECK(kernel_basis_check(cf.stress, cf.framework));
  }

  SUBCASE("deterministic per plan") {
    const CertifiedFramework a = generate_lateration(random_lateration_plan(3, 9, 11));
    const CertifiedFramework b = generate_lateration(random_lateration_plan(3, 9, 11));
    CHECK((a.framework.config().points() - b.framework.config().points())
              .cwiseAbs()
              .maxCoeff() == 0.0);
    CHECK((a.stress.omega - b.stress.omega).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("three dimensions") {
    const CertifiedFramework cf = generate_lateration(random_lateration_plan(3, 10, 12));
    CHECK(cf.framework.graph().edge_count() == 6 + 6 * 4);
    CHECK(testutil::is_lateration_graph(cf.framework.graph(), 3));
    CHECK(certify_universal_rigidity(cf.framework, cf.stress).certified());
  }
}

TEST_CASE("generate_lateration with pinned points") {
  const Configuration base = sample_general_position(4, 2, 77);
  const CertifiedFramework cf =
      generate_lateration(random_lateration_plan(2, 7, 13), base.points());
  CHECK((cf.framework.config().points().leftCols(4) - base.points()).cwiseAbs().maxCoeff() ==
        0.0);
  CHECK(certify_universal_rigidity(cf.framework, cf.stress).certified());

  SUBCASE("degenerate pinned points are rejected") {
    Eigen::MatrixXd flat(2, 3);
    flat << 0, 1, 2, 0, 0, 0;
    CHECK_THROWS_AS(generate_lateration(random_lateration_plan(2, 6, 14), flat),
                    NotGeneralPosition);
  }
}

TEST_CASE("compose_certified") {
  const CertifiedFramework a = generate_lateration(random_lateration_plan(2, 7, 20));
  Eigen::MatrixXd pinned(2, 3);
  pinned.col(0) = a.framework.config().point(0);
  pinned.col(1) = a.framework.config().point(5);
  pinned.col(2) = a.framework.config().point(6);
  const CertifiedFramework b = generate_lateration(random_lateration_plan(2, 6, 21), pinned);
  const AttachmentSpec spec({{0, 0}, {5, 1}, {6, 2}});

  SUBCASE("empty reduction composes and certifies") {
    const CertifiedFramework joined = compose_certified(
        a.framework, a.stress, b.framework, b.stress, spec, EdgeReduction{});
    CHECK(joined.framework.graph().vertex_count() == 10);
    CHECK(certify_universal_rigidity(joined.framework, joined.stress).certified());
  }

  SUBCASE("removing every B-only shared edge still certifies") {
    EdgeReduction reduction;
    // B's seed clique covers all three shared pairs
    for (const auto& [x, y] :
         std::vector<std::pair<int, int>>{{0, 5}, {0, 6}, {5, 6}}) {
      if (!a.framework.graph().has_edge(x, y)) {
        reduction.removed_edges.push_back(make_edge(x, y));
      }
    }
    const CertifiedFramework joined = compose_certified(
        a.framework, a.stress, b.framework, b.stress, spec, reduction);
    for (const Edge& e : reduction.removed_edges) {
      CHECK_FALSE(joined.framework.graph().has_edge(e.first, e.second));
    }
    CHECK(certify_universal_rigidity(joined.framework, joined.stress).certified());
  }

  SUBCASE("sharing only d vertices fails") {
    const AttachmentSpec narrow({{0, 0}, {5, 1}});
    CHECK_THROWS_AS(compose_certified(a.framework, a.stress, b.framework, b.stress, narrow,
                                      EdgeReduction{}),
                    NotEnoughSharedVertices);
  }
}
