#pragma once

#include <string>
#include <vector>

#include "polyfair/density/density.hpp"
#include "polyfair/geometry/polytope.hpp"
#include "polyfair/model_io/network.hpp"
#include "polyfair/model_io/schema.hpp"
#include "polyfair/reach/reach.hpp"

namespace polyfair::metrics {

enum class PreferenceForm { Formula, Text };
std::string to_string(PreferenceForm f);
PreferenceForm preference_form_from_string(const std::string& s);

struct AnalysisOptions {
  reach::RegionOptions regions;
  int label = 1;  // the accept label
  int jobs = 1;
};

// Acceptance regions of both classes, their intersection, and every
// integral and volume the metrics need. Sums run over assignments in
// enumeration order.
struct Analysis {
  std::string c1, c2;
  std::vector<io::CategoricalAssignment> assignments;
  std::vector<std::vector<geometry::HPolytope>> rho1, rho2, both;  // per assignment

  double p1_rho1 = 0, p1_rho2 = 0, p1_both = 0;  // integrals of P(X | C1)
  double p2_rho1 = 0, p2_rho2 = 0, p2_both = 0;  // integrals of P(X | C2)
  double vol_rho1 = 0, vol_rho2 = 0, vol_both = 0;  // uniform weight per assignment

  long regions_explored = 0;
  long lp_solves = 0;
  long thin_dropped = 0;
};

Analysis analyze(const io::FeedForwardNetwork& net, const io::FeatureSchema& schema,
                 const density::DensityModel& model, const std::string& c1, const std::string& c2,
                 const AnalysisOptions& options = {});

// Directional quantities; `forward` is (C1, C2), otherwise (C2, C1).
double advantage(const Analysis& a, bool forward = true);
double wsd(const Analysis& a);
double vsd(const Analysis& a);
double preference(const Analysis& a, bool forward = true, PreferenceForm form = PreferenceForm::Formula);
double net_preference(const Analysis& a, PreferenceForm form = PreferenceForm::Formula);

// One-shot forms with the class order given explicitly.
double advantage(const io::FeedForwardNetwork& net, const io::FeatureSchema& schema,
                 const density::DensityModel& model, const std::string& c1, const std::string& c2);
double wsd(const io::FeedForwardNetwork& net, const io::FeatureSchema& schema, const density::DensityModel& model,
           const std::string& c1, const std::string& c2);
double vsd(const io::FeedForwardNetwork& net, const io::FeatureSchema& schema, const density::DensityModel& model,
           const std::string& c1, const std::string& c2);
double preference(const io::FeedForwardNetwork& net, const io::FeatureSchema& schema,
                  const density::DensityModel& model, const std::string& c1, const std::string& c2,
                  PreferenceForm form = PreferenceForm::Formula);
double net_preference(const io::FeedForwardNetwork& net, const io::FeatureSchema& schema,
                      const density::DensityModel& model, const std::string& c1, const std::string& c2,
                      PreferenceForm form = PreferenceForm::Formula);

}  // namespace polyfair::metrics
