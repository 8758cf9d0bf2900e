#include "polyfair/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "polyfair/common/errors.hpp"
#include "polyfair/common/parallel.hpp"
#include "polyfair/geometry/vertices.hpp"

namespace polyfair::metrics {

using geometry::HPolytope;

std::string to_string(PreferenceForm f) { return f == PreferenceForm::Formula ? "formula" : "text"; }

PreferenceForm preference_form_from_string(const std::string& s) {
  if (s == "formula") return PreferenceForm::Formula;
  if (s == "text") return PreferenceForm::Text;
  throw ConfigError("preference form must be 'formula' or 'text', got '" + s + "'");
}

namespace {

struct Slot {
  std::vector<HPolytope> rho1, rho2, both;
  double p1[3] = {0, 0, 0}, p2[3] = {0, 0, 0}, vol[3] = {0, 0, 0};
  reach::ReachStats s1, s2;
};

double integral(const density::ClassDensity& cd, const density::Grid& grid, std::size_t a,
                const std::vector<HPolytope>& polys) {
  if (cd.mass[a] == 0.0) return 0.0;
  double s = 0.0;
  for (const auto& p : polys) s += density::integrate_polytope(cd.cells[a], grid, p);
  return cd.mass[a] * s;
}

double volume_of(const std::vector<HPolytope>& polys) {
  double s = 0.0;
  for (const auto& p : polys) s += geometry::volume(p);
  return s;
}

}  // namespace

Analysis analyze(const io::FeedForwardNetwork& net, const io::FeatureSchema& schema,
                 const density::DensityModel& model, const std::string& c1, const std::string& c2,
                 const AnalysisOptions& options) {
  Analysis out;
  out.c1 = c1;
  out.c2 = c2;
  out.assignments = reach::enumerate_categorical(schema, options.regions.assignment_ceiling);
  if (out.assignments != model.assignments)
    throw DimensionError("density model and schema disagree on categorical assignments");
  if (model.grid.dims() != schema.continuous_dim()) throw DimensionError("density grid does not match the schema");
  const auto& d1 = model.for_class(c1);
  const auto& d2 = model.for_class(c2);

  std::vector<Slot> slots(out.assignments.size());
  parallel_for(static_cast<long>(slots.size()), options.jobs, [&](long i) {
    const auto a = static_cast<std::size_t>(i);
    Slot& s = slots[a];
    for (auto& r : reach::class_regions(net, schema, c1, out.assignments[a], options.regions.reach, &s.s1))
      if (r.label == options.label) s.rho1.push_back(std::move(r.polytope));
    for (auto& r : reach::class_regions(net, schema, c2, out.assignments[a], options.regions.reach, &s.s2))
      if (r.label == options.label) s.rho2.push_back(std::move(r.polytope));
    s.both = reach::intersect_lists(s.rho1, s.rho2);
    const std::vector<HPolytope>* sets[3] = {&s.rho1, &s.rho2, &s.both};
    for (int k = 0; k < 3; ++k) {
      s.p1[k] = integral(d1, model.grid, a, *sets[k]);
      s.p2[k] = integral(d2, model.grid, a, *sets[k]);
      s.vol[k] = volume_of(*sets[k]);
    }
  });

  for (auto& s : slots) {
    out.p1_rho1 += s.p1[0];
    out.p1_rho2 += s.p1[1];
    out.p1_both += s.p1[2];
    out.p2_rho1 += s.p2[0];
    out.p2_rho2 += s.p2[1];
    out.p2_both += s.p2[2];
    out.vol_rho1 += s.vol[0];
    out.vol_rho2 += s.vol[1];
    out.vol_both += s.vol[2];
    out.regions_explored += s.s1.explored + s.s2.explored;
    out.lp_solves += s.s1.lp_solves + s.s2.lp_solves;
    out.thin_dropped += s.s1.thin_dropped + s.s2.thin_dropped;
    out.rho1.push_back(std::move(s.rho1));
    out.rho2.push_back(std::move(s.rho2));
    out.both.push_back(std::move(s.both));
  }
  return out;
}

double advantage(const Analysis& a, bool forward) {
  return forward ? a.p1_rho1 - a.p2_both : a.p2_rho2 - a.p1_both;
}

double wsd(const Analysis& a) { return advantage(a, true) + advantage(a, false); }

double vsd(const Analysis& a) { return (a.vol_rho1 - a.vol_both) + (a.vol_rho2 - a.vol_both); }

double preference(const Analysis& a, bool forward, PreferenceForm form) {
  if (form == PreferenceForm::Formula) return forward ? a.p1_rho1 - a.p2_rho2 : a.p2_rho2 - a.p1_rho1;
  // Both classes judged by the first class's acceptance region.
  return forward ? a.p1_rho1 - a.p2_rho1 : a.p2_rho2 - a.p1_rho2;
}

double net_preference(const Analysis& a, PreferenceForm form) {
  return std::max(std::abs(preference(a, true, form)), std::abs(preference(a, false, form)));
}

double advantage(const io::FeedForwardNetwork& net, const io::FeatureSchema& schema,
                 const density::DensityModel& model, const std::string& c1, const std::string& c2) {
  return advantage(analyze(net, schema, model, c1, c2));
}

double wsd(const io::FeedForwardNetwork& net, const io::FeatureSchema& schema, const density::DensityModel& model,
           const std::string& c1, const std::string& c2) {
  return wsd(analyze(net, schema, model, c1, c2));
}

double vsd(const io::FeedForwardNetwork& net, const io::FeatureSchema& schema, const density::DensityModel& model,
           const std::string& c1, const std::string& c2) {
  return vsd(analyze(net, schema, model, c1, c2));
}

double preference(const io::FeedForwardNetwork& net, const io::FeatureSchema& schema,
                  const density::DensityModel& model, const std::string& c1, const std::string& c2,
                  PreferenceForm form) {
  return preference(analyze(net, schema, model, c1, c2), true, form);
}

double net_preference(const io::FeedForwardNetwork& net, const io::FeatureSchema& schema,
                      const density::DensityModel& model, const std::string& c1, const std::string& c2,
                      PreferenceForm form) {
  return net_preference(analyze(net, schema, model, c1, c2), form);
}

}  // namespace polyfair::metrics
