#include <chrono>
#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "polyfair/common/errors.hpp"
#include "polyfair/density/density.hpp"

namespace polyfair::density {
namespace {

using geometry::HPolytope;

DensityModel uniform_model(const io::FeatureSchema& schema, int bins) {
  DensityModel m;
  m.grid = Grid(schema.continuous_dim(), bins);
  m.assignments = reach::enumerate_categorical(schema);
  for (const auto& v : schema.protected_values()) {
    ClassDensity c;
    c.class_value = v;
    c.rows = 1;
    c.mass.assign(m.assignments.size(), 1.0 / static_cast<double>(m.assignments.size()));
    c.cells.resize(m.assignments.size());
    for (auto& cells : c.cells)
      for (long k = 0; k < m.grid.cell_count(); ++k) cells[k] = 1.0;
    m.classes.push_back(c);
  }
  return m;
}

reach::AcceptanceRegion region_of(const DensityModel& m, std::vector<HPolytope> polys) {
  reach::AcceptanceRegion r;
  r.assignments = m.assignments;
  r.polytopes.assign(m.assignments.size(), polys);
  return r;
}

double total_mass(const DensityModel& m, const ClassDensity& c) {
  double t = 0.0;
  for (std::size_t a = 0; a < c.cells.size(); ++a)
    for (const auto& [cell, d] : c.cells[a]) t += c.mass[a] * d * m.grid.cell_volume();
  return t;
}

TEST(Grid, ElevenDimensionsRejectedQuickly) {
  const auto t0 = std::chrono::steady_clock::now();
  try {
    Grid g(11, 10);
    FAIL();
  } catch (const InfeasibleError& e) {
    EXPECT_NE(std::string(e.what()).find("10^11 cells"), std::string::npos) << e.what();
  }
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), 1.0);
  EXPECT_EQ(Grid(6, 10).cell_count(), 1000000);
}

TEST(Grid, BinsAndBoundaries) {
  const Grid g(1, 10);
  EXPECT_EQ(g.bin(1.0), 9);
  EXPECT_EQ(g.bin(0.0), 0);
  EXPECT_EQ(g.bin(0.05), 0);
  const Grid g3(3, 4);
  for (long c = 0; c < g3.cell_count(); ++c) EXPECT_EQ(g3.flat_index(g3.multi_index(c)), c);
}

TEST(Histogram, PointMass) {
  const auto schema = testing::toy_schema(1);
  Eigen::MatrixXd rows(5, schema.input_dim());
  for (int i = 0; i < 5; ++i) rows.row(i) = testing::encode(schema, 0, {}, {0.05});
  const auto c = fit_histogram(rows, schema, Grid(1, 10), "A");
  ASSERT_EQ(c.cells[0].size(), 1u);
  EXPECT_DOUBLE_EQ(c.cells[0].at(0), 10.0);
  EXPECT_THROW(fit_histogram(rows, schema, Grid(1, 10), "B"), EstimationError);
}

TEST(Histogram, UniformSamples) {
  const auto schema = testing::toy_schema(1);
  Rng rng(1);
  Eigen::MatrixXd rows(1000000, schema.input_dim());
  for (int i = 0; i < rows.rows(); ++i) rows.row(i) = testing::encode(schema, 0, {}, {uniform01(rng)});
  const auto c = fit_histogram(rows, schema, Grid(1, 10), "A");
  for (long k = 0; k < 10; ++k) EXPECT_NEAR(c.cells[0].at(k), 1.0, 0.02);
}

TEST(Histogram, IdenticalClassesAndMassConservation) {
  const auto schema = testing::toy_schema(2, {3});
  Rng rng(2);
  Eigen::MatrixXd rows(2000, schema.input_dim());
  for (int i = 0; i < 1000; ++i) {
    const int cat = static_cast<int>(uniform01(rng) * 3);
    const std::vector<double> x{uniform01(rng) * uniform01(rng), 1.0 - uniform01(rng) * 0.3};
    rows.row(2 * i) = testing::encode(schema, 0, {cat}, x);
    rows.row(2 * i + 1) = testing::encode(schema, 1, {cat}, x);
  }
  const auto m = fit_density(rows, schema, 10);
  EXPECT_EQ(m.classes[0].mass, m.classes[1].mass);
  EXPECT_EQ(m.classes[0].cells, m.classes[1].cells);
  EXPECT_NEAR(total_mass(m, m.classes[0]), 1.0, 1e-9);
}

TEST(Integrate, UniformBoxAndHalfLine) {
  const auto schema = testing::toy_schema(1);
  const auto m = uniform_model(schema, 10);
  EXPECT_NEAR(integrate(m, "A", region_of(m, {HPolytope::unit_box(1)})).value, 1.0, 1e-12);
  const auto upper = HPolytope::box(Eigen::VectorXd::Constant(1, 0.25), Eigen::VectorXd::Ones(1));
  EXPECT_NEAR(integrate(m, "A", region_of(m, {upper})).value, 0.75, 1e-12);
}

TEST(Integrate, FullPartitionAndMonotonicity) {
  const auto schema = testing::toy_schema(2, {2});
  Rng rng(6);
  Eigen::MatrixXd rows(3000, schema.input_dim());
  for (int i = 0; i < rows.rows(); ++i)
    rows.row(i) = testing::encode(schema, i % 2, {i % 3 == 0}, {uniform01(rng), uniform01(rng) * uniform01(rng)});
  const auto m = fit_density(rows, schema, 10);
  const auto net = testing::random_network(schema.input_dim(), {8, 8, 8}, rng);
  for (const char* c : {"A", "B"}) {
    const auto acc = reach::acceptance_region(net, schema, c, 1);
    const auto rej = reach::acceptance_region(net, schema, c, 0);
    EXPECT_NEAR(integrate(m, c, acc).value + integrate(m, c, rej).value, 1.0, 1e-6);
    // A region contained in the acceptance region integrates to no more.
    auto sub = acc;
    for (auto& ps : sub.polytopes)
      for (auto& p : ps) p.add_constraint(Eigen::Vector2d(1, 0), 0.5);
    EXPECT_LE(integrate(m, c, sub).value, integrate(m, c, acc).value + 1e-8);
  }
}

TEST(Integrate, ZeroOutsideSupport) {
  const auto schema = testing::toy_schema(2);
  Rng rng(7);
  Eigen::MatrixXd rows(500, schema.input_dim());
  for (int i = 0; i < rows.rows(); ++i) rows.row(i) = testing::encode(schema, 0, {}, {0.5 * uniform01(rng), uniform01(rng)});
  const auto c = fit_histogram(rows, schema, Grid(2, 10), "A");
  const auto right = HPolytope::box(Eigen::Vector2d(0.5, 0.0), Eigen::Vector2d(1.0, 1.0));
  EXPECT_EQ(integrate_polytope(c.cells[0], Grid(2, 10), right), 0.0);
}

TEST(MonteCarlo, ConstantNetworks) {
  const auto schema = testing::toy_schema(2);
  const auto m = uniform_model(schema, 10);
  const auto yes = testing::linear_network(Eigen::VectorXd::Zero(schema.input_dim()), 1.0);
  const auto no = testing::linear_network(Eigen::VectorXd::Zero(schema.input_dim()), -1.0);
  const auto e1 = mc_probability(m, schema, "A", yes, 1, 1000, 3);
  EXPECT_EQ(e1.value, 1.0);
  EXPECT_EQ(e1.stderr_, 0.0);
  EXPECT_EQ(e1.method, "monte-carlo");
  EXPECT_EQ(e1.seed, 3u);
  EXPECT_EQ(mc_probability(m, schema, "B", no, 1, 1000, 3).value, 0.0);
}

TEST(MonteCarlo, AgreesWithIntegration) {
  const auto schema = testing::toy_schema(2, {2});
  Rng rng(10);
  Eigen::MatrixXd rows(5000, schema.input_dim());
  for (int i = 0; i < rows.rows(); ++i)
    rows.row(i) = testing::encode(schema, i % 2, {uniform01(rng) < 0.3}, {uniform01(rng), std::sqrt(uniform01(rng))});
  const auto m = fit_density(rows, schema, 10);
  for (int trial = 0; trial < 20; ++trial) {
    const auto net = testing::random_network(schema.input_dim(), {8, 8, 8}, rng);
    const auto acc = reach::acceptance_region(net, schema, "A", 1);
    const auto exact = integrate(m, "A", acc).value;
    const auto mc = mc_probability(m, schema, "A", net, 1, 200000, 100 + trial);
    EXPECT_NEAR(exact, mc.value, 3 * mc.stderr_ + 1e-3) << "trial " << trial;
  }
}

TEST(DensityJson, RoundTrip) {
  const auto schema = testing::toy_schema(2, {2});
  Rng rng(8);
  Eigen::MatrixXd rows(300, schema.input_dim());
  for (int i = 0; i < rows.rows(); ++i)
    rows.row(i) = testing::encode(schema, i % 2, {i % 5 == 0}, {uniform01(rng), uniform01(rng)});
  const auto m = fit_density(rows, schema, 7);
  const auto j = density_to_json(m, schema);
  const auto back = density_from_json(j, schema);
  EXPECT_EQ(write_json(density_to_json(back, schema)), write_json(j));
  EXPECT_EQ(back.classes[1].cells, m.classes[1].cells);
}

}  // namespace
}  // namespace polyfair::density
