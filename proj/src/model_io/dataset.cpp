#include "polyfair/model_io/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>

#include "polyfair/common/errors.hpp"
#include "polyfair/common/random.hpp"

namespace polyfair::io {
namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

std::string trim(std::string s) {
  auto ws = [](unsigned char c) { return std::isspace(c) != 0; };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), ws));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), ws).base(), s.end());
  return s;
}

bool is_missing(const std::string& s) { return s.empty() || s == "NA" || s == "?" || s == "nan"; }

bool parse_double(const std::string& s, double& out) {
  const char* b = s.data();
  const char* e = s.data() + s.size();
  auto res = std::from_chars(b, e, out);
  return res.ec == std::errc() && res.ptr == e && std::isfinite(out);
}

}  // namespace

std::string to_string(Split s) {
  switch (s) {
    case Split::Train: return "train";
    case Split::Val: return "val";
    case Split::Test: return "test";
  }
  return "train";
}

Split split_from_string(const std::string& s) {
  if (s == "train") return Split::Train;
  if (s == "val") return Split::Val;
  if (s == "test") return Split::Test;
  throw SchemaError("unknown split tag: " + s);
}

SplitSizes split_sizes(int n) {
  SplitSizes s;
  s.train = static_cast<int>(std::floor(0.7 * n + 1e-9));
  const int rest = n - s.train;
  s.val = rest / 2;
  s.test = rest - s.val;
  return s;
}

LabeledData Dataset::select(Split s) const {
  LabeledData out;
  const int n = count(s);
  out.x.resize(n, schema.input_dim());
  int r = 0;
  for (const auto& row : rows) {
    if (row.split != s) continue;
    for (int j = 0; j < schema.input_dim(); ++j) out.x(r, j) = row.x[j];
    out.y.push_back(row.label);
    ++r;
  }
  return out;
}

LabeledData Dataset::all() const {
  LabeledData out;
  out.x.resize(static_cast<Eigen::Index>(rows.size()), schema.input_dim());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (int j = 0; j < schema.input_dim(); ++j) out.x(static_cast<Eigen::Index>(r), j) = rows[r].x[j];
    out.y.push_back(rows[r].label);
  }
  return out;
}

int Dataset::count(Split s) const {
  return static_cast<int>(std::count_if(rows.begin(), rows.end(), [&](const Row& r) { return r.split == s; }));
}

Dataset ingest_csv(const std::filesystem::path& path, const FeatureSchema& schema, std::uint64_t split_seed) {
  return ingest_csv_text(read_text_file(path), schema, split_seed);
}

Dataset ingest_csv_text(const std::string& text, const FeatureSchema& schema, std::uint64_t split_seed) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("CSV has no header row");
  const auto header = split_csv_line(line);
  auto column = [&](const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (trim(header[i]) == name) return static_cast<int>(i);
    throw SchemaError("CSV lacks column " + name);
  };
  const auto& feats = schema.features();
  std::vector<int> cols;
  for (const auto& f : feats) cols.push_back(column(f.name));
  const int label_col = column(schema.label_column());

  struct RawRow {
    std::vector<double> cont;  // raw continuous values, schema order
    std::vector<int> cat;      // categorical value index per feature (-1 for continuous)
    int label;
  };
  std::vector<RawRow> raw;
  Dataset ds;
  long data_row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++data_row;
    ++ds.report.rows_read;
    const auto cells = split_csv_line(line);
    auto cell = [&](int c) { return c < static_cast<int>(cells.size()) ? trim(cells[c]) : std::string(); };
    bool missing = is_missing(cell(label_col));
    for (int c : cols) missing = missing || is_missing(cell(c));
    if (missing) {
      ++ds.report.dropped_missing;
      continue;
    }
    RawRow r;
    for (std::size_t k = 0; k < feats.size(); ++k) {
      const auto v = cell(cols[k]);
      if (feats[k].is_categorical()) {
        auto it = std::find(feats[k].values.begin(), feats[k].values.end(), v);
        if (it == feats[k].values.end())
          throw SchemaError("row " + std::to_string(data_row) + ": value '" + v + "' not in schema for " +
                            feats[k].name);
        r.cat.push_back(static_cast<int>(it - feats[k].values.begin()));
      } else {
        double d;
        if (!parse_double(v, d))
          throw ParseError("row " + std::to_string(data_row) + ": non-numeric value '" + v + "' in " +
                               feats[k].name,
                           data_row);
        r.cont.push_back(d);
        r.cat.push_back(-1);
      }
    }
    double lab;
    const auto lv = cell(label_col);
    if (!parse_double(lv, lab) || (lab != 0.0 && lab != 1.0))
      throw ParseError("row " + std::to_string(data_row) + ": label must be 0 or 1, got '" + lv + "'", data_row);
    r.label = static_cast<int>(lab);
    raw.push_back(std::move(r));
  }

  const int n = static_cast<int>(raw.size());
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(split_seed);
  for (int i = n - 1; i > 0; --i) {
    std::uniform_int_distribution<int> pick(0, i);
    std::swap(perm[i], perm[pick(rng)]);
  }
  const auto sizes = split_sizes(n);
  std::vector<Split> split(n);
  for (int k = 0; k < n; ++k)
    split[perm[k]] = k < sizes.train ? Split::Train : (k < sizes.train + sizes.val ? Split::Val : Split::Test);

  ds.schema = schema;
  ds.seed = split_seed;
  int ci = 0;
  std::vector<std::pair<double, double>> range;
  for (std::size_t k = 0; k < feats.size(); ++k) {
    if (feats[k].is_categorical()) continue;
    double lo = INFINITY, hi = -INFINITY;
    for (int i = 0; i < n; ++i) {
      if (split[i] != Split::Train) continue;
      lo = std::min(lo, raw[i].cont[ci]);
      hi = std::max(hi, raw[i].cont[ci]);
    }
    if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
    if (!(hi > lo)) hi = lo + 1.0;  // constant column: everything maps to 0
    range.emplace_back(lo, hi);
    ds.schema.set_range(static_cast<int>(k), lo, hi);
    ++ci;
  }

  for (int i = 0; i < n; ++i) {
    Row row;
    row.x.assign(schema.input_dim(), 0.0);
    row.label = raw[i].label;
    row.split = split[i];
    int c = 0;
    for (std::size_t k = 0; k < feats.size(); ++k) {
      const auto sl = schema.slots(static_cast<int>(k));
      if (feats[k].is_categorical()) {
        row.x[sl.offset + raw[i].cat[k]] = 1.0;
      } else {
        double v = (raw[i].cont[c] - range[c].first) / (range[c].second - range[c].first);
        if (v < 0.0 || v > 1.0) {
          v = std::clamp(v, 0.0, 1.0);
          row.clamped = true;
        }
        row.x[sl.offset] = v;
        ++c;
      }
    }
    if (row.clamped) ++ds.report.clamped_rows;
    ds.rows.push_back(std::move(row));
  }
  return ds;
}

Json dataset_to_json(const Dataset& d) {
  Json rows = Json::array();
  for (const auto& r : d.rows) {
    Json jr{{"x", r.x}, {"y", r.label}, {"split", to_string(r.split)}};
    if (r.clamped) jr["clamped"] = true;
    rows.push_back(std::move(jr));
  }
  Json norm = Json::object();
  for (const auto& f : d.schema.features())
    if (!f.is_categorical() && f.min && f.max) norm[f.name] = Json{{"min", *f.min}, {"max", *f.max}};
  return Json{{"schema", d.schema.to_json()},
              {"rows", rows},
              {"normalization", norm},
              {"seed", d.seed},
              {"ingest",
               {{"rows_read", d.report.rows_read},
                {"dropped_missing", d.report.dropped_missing},
                {"clamped_rows", d.report.clamped_rows}}}};
}

Dataset dataset_from_json(const Json& j) {
  try {
    Dataset d;
    d.schema = FeatureSchema::from_json(j.at("schema"));
    d.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("ingest")) {
      const auto& ing = j.at("ingest");
      d.report.rows_read = ing.value("rows_read", 0L);
      d.report.dropped_missing = ing.value("dropped_missing", 0L);
      d.report.clamped_rows = ing.value("clamped_rows", 0L);
    }
    for (const auto& jr : j.at("rows")) {
      Row r;
      r.x = jr.at("x").get<std::vector<double>>();
      if (static_cast<int>(r.x.size()) != d.schema.input_dim()) throw SchemaError("row has wrong width");
      r.label = jr.at("y").get<int>();
      r.split = split_from_string(jr.at("split").get<std::string>());
      r.clamped = jr.value("clamped", false);
      d.rows.push_back(std::move(r));
    }
    return d;
  } catch (const Json::exception& e) {
    throw SchemaError(std::string("dataset document: ") + e.what());
  }
}

}  // namespace polyfair::io
