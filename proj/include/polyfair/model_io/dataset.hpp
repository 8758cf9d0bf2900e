#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "polyfair/common/json_writer.hpp"
#include "polyfair/model_io/schema.hpp"

namespace polyfair::io {

enum class Split { Train, Val, Test };
std::string to_string(Split s);
Split split_from_string(const std::string& s);

struct Row {
  std::vector<double> x;  // encoded: continuous in [0,1], categoricals one-hot
  int label = 0;
  Split split = Split::Train;
  bool clamped = false;  // a val/test value fell outside the train range
};

struct IngestReport {
  long rows_read = 0;
  long dropped_missing = 0;
  long clamped_rows = 0;
};

// Feature matrix (one sample per row) with binary labels.
struct LabeledData {
  Eigen::MatrixXd x;
  std::vector<int> y;
  int rows() const { return static_cast<int>(y.size()); }
};

struct Dataset {
  FeatureSchema schema;  // continuous ranges filled from the train split
  std::vector<Row> rows;
  std::uint64_t seed = 0;
  IngestReport report;

  LabeledData select(Split s) const;
  LabeledData all() const;
  int count(Split s) const;
};

struct SplitSizes {
  int train = 0, val = 0, test = 0;
};
// 70% train (floored); the remainder split with val = floor(rest / 2).
SplitSizes split_sizes(int n);

// Reads a CSV with a header row. Rows with an empty/"NA"/"?" cell in a used
// column are dropped and counted. Throws SchemaError on a categorical value
// the schema does not list and ParseError (with the 1-based data row) on a
// non-numeric continuous cell or a label outside {0,1}.
Dataset ingest_csv(const std::filesystem::path& path, const FeatureSchema& schema, std::uint64_t split_seed);
Dataset ingest_csv_text(const std::string& text, const FeatureSchema& schema, std::uint64_t split_seed);

Json dataset_to_json(const Dataset& d);
Dataset dataset_from_json(const Json& j);

}  // namespace polyfair::io
