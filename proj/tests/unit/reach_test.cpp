#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "polyfair/common/errors.hpp"
#include "polyfair/geometry/vertices.hpp"
#include "polyfair/model_io/input_space.hpp"
#include "polyfair/reach/reach.hpp"

namespace polyfair::reach {
namespace {

using geometry::HPolytope;

double total_volume(const std::vector<LabeledRegion>& rs, int label = -1) {
  double v = 0.0;
  for (const auto& r : rs)
    if (label < 0 || r.label == label) v += geometry::volume(r.polytope);
  return v;
}

TEST(Categorical, NoFreeCategoricals) {
  const auto a = enumerate_categorical(testing::toy_schema(2));
  ASSERT_EQ(a.size(), 1u);
  EXPECT_TRUE(a[0].value_index.empty());
}

TEST(Categorical, LexicographicProduct) {
  const auto a = enumerate_categorical(testing::toy_schema(1, {2, 3}));
  ASSERT_EQ(a.size(), 6u);
  const std::vector<std::vector<int>> expected{{0, 0}, {0, 1}, {0, 2}, {1, 0}, {1, 1}, {1, 2}};
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_EQ(a[k].value_index, expected[k]);
}

TEST(Categorical, CeilingNamesProduct) {
  const auto s = testing::toy_schema(1, {8, 8, 8, 8, 8});
  try {
    enumerate_categorical(s);
    FAIL();
  } catch (const InfeasibleError& e) {
    EXPECT_NE(std::string(e.what()).find("32768"), std::string::npos);
  }
  EXPECT_EQ(enumerate_categorical(s, 40000).size(), 32768u);
}

TEST(Enumerate, LinearNetwork) {
  const auto net = testing::linear_network(Eigen::Vector2d(1, -1), 0.1);
  const auto rs = enumerate_regions(net, HPolytope::unit_box(2));
  ASSERT_EQ(rs.size(), 2u);
  EXPECT_EQ(rs[0].label, 1);
  EXPECT_EQ(rs[1].label, 0);
  // Area above x - y + 0.1 >= 0 in the unit square.
  EXPECT_NEAR(geometry::volume(rs[0].polytope), 1.0 - 0.45 * 0.9, 1e-9);
  EXPECT_NEAR(total_volume(rs), 1.0, 1e-9);
}

TEST(Enumerate, SingleReluTieRule) {
  // relu(x - 0.5) then identity: the logit is exactly 0 on [0, 0.5], which
  // the tie rule accepts, so every point is accepted.
  io::DenseLayer h{Eigen::MatrixXd::Constant(1, 1, 1.0), Eigen::VectorXd::Constant(1, -0.5), io::Activation::Relu};
  io::DenseLayer o{Eigen::MatrixXd::Constant(1, 1, 1.0), Eigen::VectorXd::Zero(1), io::Activation::Linear};
  const io::FeedForwardNetwork net({h, o});
  const auto rs = enumerate_regions(net, HPolytope::unit_box(1));
  ASSERT_EQ(rs.size(), 2u);
  for (const auto& r : rs) EXPECT_EQ(r.label, 1);
  EXPECT_NEAR(total_volume(rs, 1), 1.0, 1e-12);
  for (double x : {0.1, 0.5, 0.9}) EXPECT_EQ(io::decide(net, Eigen::VectorXd::Constant(1, x)), 1);
  // With a strictly negative offset the inactive piece is rejected.
  io::DenseLayer o2{Eigen::MatrixXd::Constant(1, 1, 1.0), Eigen::VectorXd::Constant(1, -1e-3), io::Activation::Linear};
  const auto rs2 = enumerate_regions(io::FeedForwardNetwork({h, o2}), HPolytope::unit_box(1));
  EXPECT_NEAR(total_volume(rs2, 1), 0.499, 1e-12);
}

TEST(Enumerate, PointwiseLabelsMatchForward) {
  Rng rng(77);
  const auto net = testing::random_network(2, {4, 4}, rng);
  const auto rs = enumerate_regions(net, HPolytope::unit_box(2));
  int checked = 0;
  for (int s = 0; s < 100000; ++s) {
    Eigen::Vector2d x(uniform01(rng), uniform01(rng));
    const LabeledRegion* hit = nullptr;
    bool near_boundary = false;
    for (const auto& r : rs) {
      const double v = r.polytope.max_violation(x);
      if (std::abs(v) <= 1e-7) near_boundary = true;
      if (v < -1e-7) hit = &r;
    }
    if (near_boundary && !hit) continue;
    ASSERT_NE(hit, nullptr);
    ASSERT_EQ(hit->label, io::decide(net, x));
    ASSERT_NEAR(hit->out_weights.dot(x) + hit->out_bias, net.forward(x), 1e-9);
    ++checked;
  }
  EXPECT_GT(checked, 99000);
}

TEST(Enumerate, PartitionAndDisjointness) {
  Rng rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    const auto net = testing::random_network(3, {8, 8, 8}, rng);
    const auto rs = enumerate_regions(net, HPolytope::unit_box(3));
    EXPECT_NEAR(total_volume(rs), 1.0, 1e-4);
    for (std::size_t i = 0; i < rs.size(); ++i)
      for (std::size_t j = i + 1; j < rs.size(); ++j) {
        const auto both = geometry::intersect(rs[i].polytope, rs[j].polytope);
        if (!geometry::is_empty(both)) EXPECT_LT(geometry::chebyshev_center(both).radius, 1e-8);
      }
    for (const auto& r : rs) EXPECT_FALSE(geometry::is_empty(r.polytope));
  }
}

TEST(Enumerate, Deterministic) {
  Rng rng(12);
  const auto net = testing::random_network(2, {8, 8, 8}, rng);
  const auto a = enumerate_regions(net, HPolytope::unit_box(2));
  const auto b = enumerate_regions(net, HPolytope::unit_box(2));
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].pattern, b[k].pattern);
    EXPECT_EQ(a[k].polytope.C(), b[k].polytope.C());
    EXPECT_EQ(a[k].polytope.d(), b[k].polytope.d());
  }
}

TEST(Enumerate, BranchCeiling) {
  Rng rng(12);
  const auto net = testing::random_network(2, {8, 8, 8}, rng);
  ReachOptions opt;
  opt.branch_ceiling = 3;
  try {
    enumerate_regions(net, HPolytope::unit_box(2), {}, opt);
    FAIL();
  } catch (const ResourceError& e) {
    EXPECT_EQ(e.explored(), 3);
  }
}

TEST(Acceptance, ProtectedIndependentNetworkGivesIdenticalRegions) {
  const auto schema = testing::toy_schema(2, {2});
  Rng rng(4);
  auto net = testing::random_network(schema.input_dim(), {6, 6}, rng);
  const auto ps = schema.protected_slots();
  net.mutable_layers()[0].weights.middleCols(ps.offset, ps.width).setZero();
  const auto a = acceptance_region(net, schema, "A", 1);
  const auto b = acceptance_region(net, schema, "B", 1);
  ASSERT_EQ(a.polytopes.size(), 2u);
  for (std::size_t k = 0; k < a.polytopes.size(); ++k) {
    ASSERT_EQ(a.polytopes[k].size(), b.polytopes[k].size());
    for (std::size_t i = 0; i < a.polytopes[k].size(); ++i) {
      EXPECT_EQ(a.polytopes[k][i].C(), b.polytopes[k][i].C());
      EXPECT_EQ(a.polytopes[k][i].d(), b.polytopes[k][i].d());
    }
  }
}

TEST(Acceptance, ConstantAcceptCoversBox) {
  const auto schema = testing::toy_schema(2, {3});
  const auto net = testing::linear_network(Eigen::VectorXd::Zero(schema.input_dim()), 1.0);
  for (const char* c : {"A", "B"}) {
    const auto r = acceptance_region(net, schema, c, 1);
    ASSERT_EQ(r.polytopes.size(), 3u);
    for (const auto& ps : r.polytopes) {
      double v = 0;
      for (const auto& p : ps) v += geometry::volume(p);
      EXPECT_NEAR(v, 1.0, 1e-12);
    }
  }
}

TEST(Intersection, SelfAndDisjoint) {
  const auto schema = testing::toy_schema(1);
  // Accept x >= 0.4 for A, x >= 0.6 for B; reject regions are disjoint halves.
  Eigen::VectorXd w(3);
  w << 0.2, 0.0, 1.0;
  const auto net = testing::linear_network(w, -0.6);
  const auto ra = acceptance_region(net, schema, "A", 1);
  const auto self = region_intersection(ra, ra);
  double v = 0;
  for (const auto& p : self.polytopes[0]) v += geometry::volume(p);
  EXPECT_NEAR(v, 0.6, 1e-9);

  AcceptanceRegion lo = ra, hi = ra;
  lo.polytopes[0] = {HPolytope::box(Eigen::VectorXd::Zero(1), Eigen::VectorXd::Constant(1, 0.4))};
  hi.polytopes[0] = {HPolytope::box(Eigen::VectorXd::Constant(1, 0.6), Eigen::VectorXd::Ones(1))};
  EXPECT_TRUE(region_intersection(lo, hi).polytopes[0].empty());
}

TEST(Intersection, IndicatorOracle) {
  const auto schema = testing::toy_schema(2);
  Rng rng(31);
  const auto net = testing::random_network(schema.input_dim(), {6, 6}, rng);
  const auto ra = acceptance_region(net, schema, "A", 1);
  const auto rb = acceptance_region(net, schema, "B", 1);
  const auto both = region_intersection(ra, rb);
  const auto sa = io::continuous_space(schema, "A", {}), sb = io::continuous_space(schema, "B", {});
  int checked = 0;
  for (int s = 0; s < 100000; ++s) {
    Eigen::Vector2d x(uniform01(rng), uniform01(rng));
    bool near = false, in = false;
    for (const auto& p : both.polytopes[0]) {
      const double v = p.max_violation(x);
      near = near || std::abs(v) <= 1e-7;
      in = in || v < -1e-7;
    }
    const double la = net.forward(sa.embed(x)), lb = net.forward(sb.embed(x));
    if (near || std::abs(la) < 1e-7 || std::abs(lb) < 1e-7) continue;
    ASSERT_EQ(in, la >= 0 && lb >= 0);
    ++checked;
  }
  EXPECT_GT(checked, 99000);
}

}  // namespace
}  // namespace polyfair::reach
