#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "polyfair/common/errors.hpp"
#include "polyfair/geometry/lp.hpp"
#include "polyfair/geometry/region_dump.hpp"
#include "polyfair/geometry/vertices.hpp"

namespace polyfair::geometry {
namespace {

HPolytope simplex(int d) {
  HPolytope p(d);
  for (int i = 0; i < d; ++i) p.add_constraint(-Eigen::VectorXd::Unit(d, i), 0.0);
  p.add_constraint(Eigen::VectorXd::Ones(d), 1.0);
  return p;
}

double factorial(int d) { return d <= 1 ? 1.0 : d * factorial(d - 1); }

TEST(Lp, MaxXOverUnitSquare) {
  const auto res = solve_lp(Eigen::Vector2d(1, 0), HPolytope::unit_box(2), Sense::Maximize);
  ASSERT_EQ(res.status, LpStatus::Feasible);
  EXPECT_NEAR(res.optimum, 1.0, 1e-12);
  EXPECT_NEAR(res.witness(0), 1.0, 1e-12);
}

TEST(Lp, InfeasibleHalfspaceInBox) {
  auto p = HPolytope::unit_box(1);
  p.add_constraint(Eigen::VectorXd::Constant(1, -1.0), -2.0);
  EXPECT_EQ(solve_lp(Eigen::VectorXd::Ones(1), p, Sense::Minimize).status, LpStatus::Infeasible);
}

TEST(Lp, UnboundedRawProgram) {
  Eigen::MatrixXd C(1, 1);
  C << -1.0;
  const auto res = solve_lp(Eigen::VectorXd::Ones(1), C, Eigen::VectorXd::Zero(1), Sense::Maximize);
  EXPECT_EQ(res.status, LpStatus::Unbounded);
}

TEST(Lp, RandomObjectiveMatchesVertexArgmax) {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = testing::random_clipped_polytope(3, 6, rng);
    Eigen::Vector3d c(uniform01(rng) - 0.5, uniform01(rng) - 0.5, uniform01(rng) - 0.5);
    double best = -INFINITY;
    for (const auto& v : vertices(p).vertices) best = std::max(best, c.dot(v));
    const auto res = solve_lp(c, p, Sense::Maximize);
    ASSERT_EQ(res.status, LpStatus::Feasible);
    EXPECT_NEAR(res.optimum, best, 1e-6);
  }
}

TEST(Polytope, EmptyIntersection) {
  HPolytope a = HPolytope::unit_box(1), b = HPolytope::unit_box(1);
  a.add_constraint(Eigen::VectorXd::Ones(1), 0.0);
  b.add_constraint(-Eigen::VectorXd::Ones(1), -1.0);
  EXPECT_TRUE(is_empty(intersect(a, b)));
  EXPECT_FALSE(is_empty(HPolytope::unit_box(3)));
}

TEST(Polytope, IsEmptyMatchesSampling) {
  Rng rng(5);
  std::normal_distribution<double> g;
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    auto p = HPolytope::unit_box(2);
    for (int k = 0; k < 3; ++k) {
      Eigen::Vector2d a(g(rng), g(rng));
      p.add_constraint(a, 0.6 * g(rng));
    }
    bool hit = false;
    for (int s = 0; s < 1000000 && !hit; ++s) hit = p.contains(Eigen::Vector2d(uniform01(rng), uniform01(rng)));
    const bool empty = is_empty(p);
    if (!empty && chebyshev_center(p).radius < 1e-6) continue;
    EXPECT_EQ(empty, !hit) << "trial " << trial;
    ++checked;
  }
  EXPECT_GT(checked, 90);
}

TEST(Polytope, IntersectBoxes) {
  const auto p = intersect(HPolytope::unit_box(2),
                           HPolytope::box(Eigen::Vector2d(0.5, 0.5), Eigen::Vector2d(1.5, 1.5)));
  EXPECT_NEAR(volume(p), 0.25, 1e-12);
  const auto bb = bounding_box(p);
  EXPECT_NEAR(bb.lower(0), 0.5, 1e-12);
  EXPECT_NEAR(bb.upper(1), 1.0, 1e-12);
}

TEST(Polytope, IntersectionMembershipOracle) {
  Rng rng(8);
  for (int trial = 0; trial < 5; ++trial) {
    const auto p = testing::random_clipped_polytope(3, 4, rng);
    const auto q = testing::random_clipped_polytope(3, 4, rng);
    const auto pq = intersect(p, q), qp = intersect(q, p), pp = intersect(p, p);
    for (int s = 0; s < 10000; ++s) {
      Eigen::Vector3d x(uniform01(rng), uniform01(rng), uniform01(rng));
      const bool both = p.contains(x) && q.contains(x);
      ASSERT_EQ(pq.contains(x), both);
      ASSERT_EQ(qp.contains(x), both);
      ASSERT_EQ(pp.contains(x), p.contains(x));
    }
  }
}

TEST(Polytope, ChebyshevCenter) {
  const auto b = chebyshev_center(HPolytope::unit_box(2));
  EXPECT_NEAR(b.center(0), 0.5, 1e-9);
  EXPECT_NEAR(b.center(1), 0.5, 1e-9);
  EXPECT_NEAR(b.radius, 0.5, 1e-9);
  const auto slab = HPolytope::box(Eigen::Vector2d(0, 0), Eigen::Vector2d(0, 1));
  EXPECT_NEAR(chebyshev_center(slab).radius, 0.0, 1e-9);
  EXPECT_TRUE(is_thin(slab));
  EXPECT_EQ(volume(slab), 0.0);
  EXPECT_THROW(vertices(slab), DegenerateRegion);
}

TEST(Polytope, ChebyshevBallInside) {
  Rng rng(3);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = testing::random_clipped_polytope(3, 5, rng);
    const auto b = chebyshev_center(p);
    for (int k = 0; k < 1000; ++k) {
      Eigen::Vector3d u(g(rng), g(rng), g(rng));
      EXPECT_LE(p.max_violation(b.center + b.radius * u.normalized()), 1e-7);
    }
  }
}

TEST(Vertices, UnitCubeAndSimplex) {
  EXPECT_EQ(vertices(HPolytope::unit_box(3)).vertices.size(), 8u);
  const auto v = vertices(simplex(2)).vertices;
  ASSERT_EQ(v.size(), 3u);
  for (const Eigen::Vector2d& e : {Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)}) {
    bool found = false;
    for (const auto& x : v) found = found || (x - e).norm() < 1e-9;
    EXPECT_TRUE(found);
  }
}

TEST(Vertices, RandomMatchesBruteForce) {
  Rng rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const auto p = testing::random_clipped_polytope(3, 5, rng);
    const auto v = vertices(p).vertices;
    const auto oracle = testing::brute_force_vertices(p);
    EXPECT_EQ(v.size(), oracle.size()) << "trial " << trial;
    const auto q = p.normalized();
    for (const auto& x : v) {
      EXPECT_LE(p.max_violation(x), 1e-7);
      int active = 0;
      for (int i = 0; i < q.num_constraints(); ++i) active += std::abs(q.C().row(i).dot(x) - q.d()(i)) < 1e-7;
      EXPECT_GE(active, 3);
    }
  }
}

TEST(Vertices, BoundingBoxContainsVertices) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = testing::random_clipped_polytope(3, 6, rng);
    const auto bb = bounding_box(p);
    for (const auto& x : vertices(p).vertices)
      for (int i = 0; i < 3; ++i) {
        EXPECT_GE(x(i), bb.lower(i) - 1e-9);
        EXPECT_LE(x(i), bb.upper(i) + 1e-9);
      }
  }
  const auto t = HPolytope::box(Eigen::Vector2d(2, 3), Eigen::Vector2d(2.5, 4));
  const auto bb = bounding_box(t);
  EXPECT_NEAR(bb.lower(0), 2.0, 1e-12);
  EXPECT_NEAR(bb.upper(1), 4.0, 1e-12);
}

TEST(Volume, HypercubeAndSimplex) {
  for (int d = 1; d <= 6; ++d) {
    EXPECT_NEAR(volume(HPolytope::unit_box(d)), 1.0, 1e-9) << d;
    EXPECT_NEAR(volume(simplex(d)), 1.0 / factorial(d), 1e-9) << d;
  }
}

TEST(Volume, RandomAgainstMonteCarlo) {
  Rng rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = testing::random_clipped_polytope(3, 6, rng);
    const auto mc = testing::mc_volume(p, Eigen::Vector3d::Zero(), Eigen::Vector3d::Ones(), 1000000, rng);
    EXPECT_NEAR(volume(p), mc.value, 4 * mc.stderr_ + 1e-12) << "trial " << trial;
  }
}

TEST(Volume, InclusionExclusionOnBoxes) {
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::Vector2d a0(uniform01(rng) * 0.5, uniform01(rng) * 0.5), a1 = a0 + Eigen::Vector2d(0.5, 0.4);
    Eigen::Vector2d b0(uniform01(rng) * 0.5, uniform01(rng) * 0.5), b1 = b0 + Eigen::Vector2d(0.3, 0.5);
    const auto A = HPolytope::box(a0, a1), B = HPolytope::box(b0, b1);
    const Eigen::Vector2d lo = a0.cwiseMax(b0), hi = a1.cwiseMin(b1);
    const double inter = (hi - lo).cwiseMax(0.0).prod();
    // Union measured directly on the grid spanned by both boxes' breakpoints.
    double uni = 0.0;
    std::vector<double> xs{a0(0), a1(0), b0(0), b1(0)}, ys{a0(1), a1(1), b0(1), b1(1)};
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k) {
        const Eigen::Vector2d mid((xs[i] + xs[i + 1]) / 2, (ys[k] + ys[k + 1]) / 2);
        if (A.contains(mid) || B.contains(mid)) uni += (xs[i + 1] - xs[i]) * (ys[k + 1] - ys[k]);
      }
    EXPECT_NEAR(volume(A) + volume(B), uni + volume(intersect(A, B)), 1e-9);
    EXPECT_NEAR(volume(intersect(A, B)), inter, 1e-9);
    EXPECT_LE(volume(intersect(A, B)), std::min(volume(A), volume(B)) + 1e-6);
  }
}

TEST(Volume, EmptyIsZero) {
  auto p = HPolytope::unit_box(2);
  p.add_constraint(Eigen::Vector2d(1, 1), -0.5);
  EXPECT_TRUE(is_empty(p));
  EXPECT_EQ(volume(p), 0.0);
}

TEST(Volume, DegenerateVerticesOnFacets) {
  // Pyramid apex meets four facets: non-simplicial vertex in the dual.
  HPolytope p = HPolytope::unit_box(3);
  p.add_constraint(Eigen::Vector3d(1, 0, 1), 1.0);
  p.add_constraint(Eigen::Vector3d(-1, 0, 1), 0.0);
  p.add_constraint(Eigen::Vector3d(0, 1, 1), 1.0);
  p.add_constraint(Eigen::Vector3d(0, -1, 1), 0.0);
  // Square pyramid with base [0,1]^2, apex (0.5,0.5,0.5).
  EXPECT_NEAR(volume(p), 1.0 / 6.0, 1e-12);
  EXPECT_EQ(vertices(p).vertices.size(), 5u);
}

TEST(RegionDump, RoundTrip) {
  const auto p = simplex(2);
  const auto j = region_dump_to_json({DumpEntry{p, 1, Json{{"sex", "Male"}}}});
  ASSERT_TRUE(j.is_array());
  const auto back = region_dump_from_json(j);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].polytope.C(), p.C());
  EXPECT_EQ(back[0].polytope.d(), p.d());
  EXPECT_EQ(back[0].categorical_assignment["sex"], "Male");
  EXPECT_EQ(write_json(region_dump_to_json(back)), write_json(j));
}

}  // namespace
}  // namespace polyfair::geometry
