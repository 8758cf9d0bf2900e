#pragma once

#include <string>
#include <vector>

#include "polyfair/common/json_writer.hpp"
#include "polyfair/metrics/metrics.hpp"
#include "polyfair/model_io/dataset.hpp"

namespace polyfair::metrics {

struct FairnessReport {
  std::string class_1, class_2;
  double wsd = 0, vsd = 0, np = 0;
  double advantage_12 = 0, advantage_21 = 0;
  double preference_12 = 0, preference_21 = 0;
  double auc = 0;
  PreferenceForm preference_form = PreferenceForm::Formula;
  int grid_dims = 0, grid_bins = 0;
  std::string model_hash, density_hash, dataset_hash;
  Json run = Json::object();  // dataset / arch / strategy / trial labels, when known
  Json config = Json::object();
  Json probabilities = Json::object();
  Json counts = Json::object();
  Json timings = Json::object();
};

struct ReportConfig {
  int bins = 10;
  PreferenceForm preference_form = PreferenceForm::Formula;
  AnalysisOptions analysis;
  Json run = Json::object();
  Json resolved_config = Json::object();  // copied verbatim into the report
};

// Regions, intersection, histogram densities fitted on every dataset row,
// integrals, metrics, and AUC of raw logits on the test split.
FairnessReport build_report(const io::FeedForwardNetwork& net, const io::FeatureSchema& schema,
                            const io::Dataset& dataset, const ReportConfig& config);

// Metric fields from an analysis (no AUC, hashes, or timings).
FairnessReport metrics_from(const Analysis& a, PreferenceForm form);

Json report_to_json(const FairnessReport& r);
FairnessReport report_from_json(const Json& j);

// Strategy x metric table, one block per (dataset, arch), one row per trial
// plus an average row. Text output marks each row's best value per metric
// with **bold**; CSV output is long-form.
std::string render_table(const std::vector<FairnessReport>& reports, bool csv = false);

}  // namespace polyfair::metrics
