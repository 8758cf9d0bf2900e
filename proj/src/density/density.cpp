#include "polyfair/density/density.hpp"

#include <algorithm>
#include <cmath>

#include "polyfair/common/errors.hpp"
#include "polyfair/common/random.hpp"
#include "polyfair/geometry/vertices.hpp"
#include "polyfair/model_io/input_space.hpp"

namespace polyfair::density {

using geometry::HPolytope;

const ClassDensity& DensityModel::for_class(const std::string& class_value) const {
  for (const auto& c : classes)
    if (c.class_value == class_value) return c;
  throw SchemaError("density model has no class " + class_value);
}

long assignment_index(const io::FeatureSchema& schema, const double* row) {
  long idx = 0;
  for (int f : schema.free_categoricals()) {
    const auto r = schema.slots(f);
    int hot = -1;
    for (int s = 0; s < r.width; ++s)
      if (row[r.offset + s] == 1.0) hot = s;
    if (hot < 0) throw SchemaError("row has no active one-hot value for " + schema.features()[f].name);
    idx = idx * r.width + hot;
  }
  return idx;
}

namespace {

int protected_class_of(const io::FeatureSchema& schema, const double* row) {
  const auto r = schema.protected_slots();
  for (int s = 0; s < r.width; ++s)
    if (row[r.offset + s] == 1.0) return s;
  throw SchemaError("row has no active protected value");
}

}  // namespace

ClassDensity fit_histogram(const Eigen::MatrixXd& rows, const io::FeatureSchema& schema, const Grid& grid,
                           const std::string& class_value, long assignment_ceiling) {
  if (grid.dims() != schema.continuous_dim()) throw DimensionError("grid dimension differs from the schema");
  if (rows.cols() != schema.input_dim()) throw DimensionError("rows do not match the schema's encoding");
  const int cls = schema.protected_value_index(class_value);
  const long na = static_cast<long>(reach::enumerate_categorical(schema, assignment_ceiling).size());
  const auto& cont = schema.continuous_slots();

  ClassDensity out;
  out.class_value = class_value;
  out.mass.assign(static_cast<std::size_t>(na), 0.0);
  out.cells.resize(static_cast<std::size_t>(na));
  std::vector<long> per(static_cast<std::size_t>(na), 0);
  std::vector<double> x(cont.size());
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = rows;
  for (Eigen::Index i = 0; i < rm.rows(); ++i) {
    const double* row = rm.row(i).data();
    if (protected_class_of(schema, row) != cls) continue;
    const long a = assignment_index(schema, row);
    for (std::size_t k = 0; k < cont.size(); ++k) x[k] = row[cont[k]];
    out.cells[static_cast<std::size_t>(a)][grid.cell_of(x.data())] += 1.0;
    ++per[static_cast<std::size_t>(a)];
    ++out.rows;
  }
  if (out.rows == 0) throw EstimationError("no rows with protected value " + class_value);
  const double cv = grid.cell_volume();
  for (long a = 0; a < na; ++a) {
    const auto ua = static_cast<std::size_t>(a);
    out.mass[ua] = static_cast<double>(per[ua]) / static_cast<double>(out.rows);
    for (auto& [cell, v] : out.cells[ua]) v = v / static_cast<double>(per[ua]) / cv;
  }
  return out;
}

DensityModel fit_density(const Eigen::MatrixXd& rows, const io::FeatureSchema& schema, int bins,
                         long assignment_ceiling) {
  DensityModel m;
  m.grid = Grid(schema.continuous_dim(), bins);
  m.assignments = reach::enumerate_categorical(schema, assignment_ceiling);
  for (const auto& v : schema.protected_values())
    m.classes.push_back(fit_histogram(rows, schema, m.grid, v, assignment_ceiling));
  return m;
}

double integrate_polytope(const std::map<long, double>& cells, const Grid& grid, const HPolytope& poly) {
  if (cells.empty()) return 0.0;
  std::vector<Eigen::VectorXd> verts;
  try {
    verts = geometry::vertices(poly).vertices;
  } catch (const DegenerateRegion&) {
    return 0.0;
  } catch (const EmptyPolytopeError&) {
    return 0.0;
  }
  const int n = grid.dims();
  Eigen::VectorXd lo = verts.front(), hi = verts.front();
  for (const auto& v : verts) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  std::vector<int> blo(n), bhi(n);
  double range = 1.0;
  for (int i = 0; i < n; ++i) {
    blo[i] = grid.bin(lo(i));
    bhi[i] = grid.bin(hi(i));
    range *= bhi[i] - blo[i] + 1;
  }

  const double cell_vol = grid.cell_volume();
  double poly_vol = -1.0;
  auto cell_integral = [&](long cell, double density) {
    const auto box = grid.cell_box(cell);
    bool poly_in_cell = true;
    for (int i = 0; i < n && poly_in_cell; ++i) poly_in_cell = lo(i) >= box.lower(i) && hi(i) <= box.upper(i);
    if (poly_in_cell) {
      if (poly_vol < 0) poly_vol = geometry::volume(poly);
      return density * poly_vol;
    }
    bool cell_in_poly = true;
    Eigen::VectorXd corner(n);
    for (long mask = 0; mask < (1L << n) && cell_in_poly; ++mask) {
      for (int i = 0; i < n; ++i) corner(i) = (mask >> i) & 1 ? box.upper(i) : box.lower(i);
      cell_in_poly = poly.max_violation(corner) <= 1e-12;
    }
    if (cell_in_poly) return density * cell_vol;
    return density * geometry::volume(geometry::intersect(poly, HPolytope::box(box.lower, box.upper)));
  };

  double sum = 0.0;
  if (range > static_cast<double>(cells.size())) {
    for (const auto& [cell, density] : cells) {
      if (density == 0.0) continue;
      const auto idx = grid.multi_index(cell);
      bool inside = true;
      for (int i = 0; i < n && inside; ++i) inside = idx[i] >= blo[i] && idx[i] <= bhi[i];
      if (inside) sum += cell_integral(cell, density);
    }
  } else {
    std::vector<int> idx = blo;
    for (;;) {
      const long cell = grid.flat_index(idx);
      auto it = cells.find(cell);
      if (it != cells.end() && it->second != 0.0) sum += cell_integral(cell, it->second);
      int i = n - 1;
      for (; i >= 0; --i) {
        if (++idx[i] <= bhi[i]) break;
        idx[i] = blo[i];
      }
      if (i < 0) break;
    }
  }
  return sum;
}

ProbabilityEstimate integrate(const DensityModel& model, const std::string& class_value,
                              const reach::AcceptanceRegion& region) {
  if (region.assignments != model.assignments)
    throw DimensionError("acceptance region and density model use different assignment grids");
  const auto& cd = model.for_class(class_value);
  double total = 0.0;
  for (std::size_t a = 0; a < region.assignments.size(); ++a) {
    if (cd.mass[a] == 0.0) continue;
    double part = 0.0;
    for (const auto& p : region.polytopes[a]) {
      if (p.dim() != model.grid.dims()) throw DimensionError("region dimension differs from the grid");
      part += integrate_polytope(cd.cells[a], model.grid, p);
    }
    total += cd.mass[a] * part;
  }
  return ProbabilityEstimate{total, "exact-grid", 0.0, 0, 0};
}

namespace {

// Inverse-CDF sampler over (assignment, cell) pairs of one class.
class ClassSampler {
 public:
  ClassSampler(const DensityModel& m, const ClassDensity& cd) : grid_(m.grid) {
    double acc = 0.0;
    const double cv = m.grid.cell_volume();
    for (std::size_t a = 0; a < cd.cells.size(); ++a)
      for (const auto& [cell, d] : cd.cells[a]) {
        if (d <= 0.0) continue;
        acc += cd.mass[a] * d * cv;
        cdf_.push_back(acc);
        items_.emplace_back(static_cast<int>(a), cell);
      }
    for (auto& c : cdf_) c /= acc;
  }

  // Draws a point; returns its assignment index and fills `x` (continuous coordinates).
  int draw(Rng& rng, Eigen::VectorXd& x) const {
    const double u = uniform01(rng);
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    const auto k = std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1);
    const auto idx = grid_.multi_index(items_[k].second);
    for (int i = 0; i < grid_.dims(); ++i) x(i) = grid_.edge(idx[i]) + grid_.width() * uniform01(rng);
    return items_[k].first;
  }

 private:
  const Grid& grid_;
  std::vector<double> cdf_;
  std::vector<std::pair<int, long>> items_;
};

std::vector<io::InputSpace> spaces_for(const DensityModel& m, const io::FeatureSchema& schema,
                                       const std::string& class_value) {
  std::vector<io::InputSpace> out;
  for (const auto& a : m.assignments) out.push_back(io::continuous_space(schema, class_value, a));
  return out;
}

}  // namespace

ProbabilityEstimate mc_probability(const DensityModel& model, const io::FeatureSchema& schema,
                                   const std::string& class_value, const io::FeedForwardNetwork& net, int label,
                                   long n, std::uint64_t seed) {
  if (n < 1) throw ConfigError("Monte Carlo needs at least one sample");
  const ClassSampler sampler(model, model.for_class(class_value));
  const auto spaces = spaces_for(model, schema, class_value);
  Rng rng(seed);
  Eigen::VectorXd x(model.grid.dims());
  long hits = 0;
  for (long s = 0; s < n; ++s) {
    const int a = sampler.draw(rng, x);
    hits += io::decide(net, spaces[static_cast<std::size_t>(a)].embed(x)) == label;
  }
  const double p = static_cast<double>(hits) / static_cast<double>(n);
  return ProbabilityEstimate{p, "monte-carlo", std::sqrt(p * (1 - p) / static_cast<double>(n)), n, seed};
}

FlipEstimate mc_flip(const DensityModel& model, const io::FeatureSchema& schema, const io::FeedForwardNetwork& net,
                     int label, long n, std::uint64_t seed) {
  if (n < 1) throw ConfigError("Monte Carlo needs at least one sample");
  const auto& pv = schema.protected_values();
  FlipEstimate out;
  out.samples = n;
  out.seed = seed;
  for (int dir = 0; dir < 2; ++dir) {
    const auto& own = pv[static_cast<std::size_t>(dir)];
    const auto& other = pv[static_cast<std::size_t>(1 - dir)];
    const ClassSampler sampler(model, model.for_class(own));
    const auto s_own = spaces_for(model, schema, own), s_other = spaces_for(model, schema, other);
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(dir)));
    Eigen::VectorXd x(model.grid.dims());
    long hits = 0;
    for (long s = 0; s < n; ++s) {
      const auto a = static_cast<std::size_t>(sampler.draw(rng, x));
      hits += io::decide(net, s_own[a].embed(x)) == label && io::decide(net, s_other[a].embed(x)) != label;
    }
    const double p = static_cast<double>(hits) / static_cast<double>(n);
    const double se = std::sqrt(p * (1 - p) / static_cast<double>(n));
    (dir == 0 ? out.p12 : out.p21) = p;
    (dir == 0 ? out.se12 : out.se21) = se;
  }
  out.wsd = out.p12 + out.p21;
  out.se = std::sqrt(out.se12 * out.se12 + out.se21 * out.se21);
  return out;
}

Json density_to_json(const DensityModel& model, const io::FeatureSchema& schema) {
  Json assignments = Json::array();
  for (const auto& a : model.assignments) assignments.push_back(schema.assignment_to_json(a));
  Json classes = Json::array();
  for (const auto& c : model.classes) {
    Json cells = Json::array();
    for (std::size_t a = 0; a < c.cells.size(); ++a)
      for (const auto& [cell, d] : c.cells[a])
        cells.push_back(Json{{"assignment", a}, {"cell", model.grid.multi_index(cell)}, {"density", d}});
    classes.push_back(Json{{"class_value", c.class_value}, {"rows", c.rows}, {"mass", c.mass}, {"cells", cells}});
  }
  return Json{{"grid", Json{{"dims", model.grid.dims()}, {"bins", model.grid.bins()}}},
              {"assignments", assignments},
              {"classes", classes}};
}

DensityModel density_from_json(const Json& j, const io::FeatureSchema& schema) {
  DensityModel m;
  m.grid = Grid(j.at("grid").at("dims").get<int>(), j.at("grid").at("bins").get<int>());
  if (m.grid.dims() != schema.continuous_dim()) throw DimensionError("density grid does not match the schema");
  for (const auto& a : j.at("assignments")) m.assignments.push_back(schema.assignment_from_json(a));
  for (const auto& c : j.at("classes")) {
    ClassDensity cd;
    cd.class_value = c.at("class_value").get<std::string>();
    cd.rows = c.at("rows").get<long>();
    cd.mass = c.at("mass").get<std::vector<double>>();
    if (cd.mass.size() != m.assignments.size()) throw SchemaError("density mass table has the wrong length");
    cd.cells.resize(m.assignments.size());
    for (const auto& e : c.at("cells")) {
      const auto a = e.at("assignment").get<std::size_t>();
      if (a >= cd.cells.size()) throw SchemaError("density cell refers to an unknown assignment");
      const double d = e.at("density").get<double>();
      if (d < 0) throw SchemaError("negative density");
      cd.cells[a][m.grid.flat_index(e.at("cell").get<std::vector<int>>())] = d;
    }
    m.classes.push_back(std::move(cd));
  }
  return m;
}

}  // namespace polyfair::density
