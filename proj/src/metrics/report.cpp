#include "polyfair/metrics/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "polyfair/common/errors.hpp"
#include "polyfair/common/hash.hpp"
#include "polyfair/common/version.hpp"
#include "polyfair/density/density.hpp"
#include "polyfair/geometry/polytope.hpp"
#include "polyfair/metrics/auc.hpp"

namespace polyfair::metrics {

FairnessReport metrics_from(const Analysis& a, PreferenceForm form) {
  FairnessReport r;
  r.class_1 = a.c1;
  r.class_2 = a.c2;
  r.advantage_12 = advantage(a, true);
  r.advantage_21 = advantage(a, false);
  r.wsd = r.advantage_12 + r.advantage_21;
  r.vsd = vsd(a);
  r.preference_12 = preference(a, true, form);
  r.preference_21 = preference(a, false, form);
  r.np = std::max(std::abs(r.preference_12), std::abs(r.preference_21));
  r.preference_form = form;
  r.probabilities = Json{{"p1_rho1", a.p1_rho1}, {"p1_rho2", a.p1_rho2}, {"p1_both", a.p1_both},
                         {"p2_rho1", a.p2_rho1}, {"p2_rho2", a.p2_rho2}, {"p2_both", a.p2_both}};
  long n1 = 0, n2 = 0, nb = 0;
  for (std::size_t k = 0; k < a.assignments.size(); ++k) {
    n1 += static_cast<long>(a.rho1[k].size());
    n2 += static_cast<long>(a.rho2[k].size());
    nb += static_cast<long>(a.both[k].size());
  }
  r.counts = Json{{"assignments", a.assignments.size()},
                  {"polytopes_rho1", n1},
                  {"polytopes_rho2", n2},
                  {"polytopes_intersection", nb},
                  {"star_sets_explored", a.regions_explored},
                  {"lp_solves", a.lp_solves},
                  {"thin_regions_dropped", a.thin_dropped},
                  {"volume_rho1", a.vol_rho1},
                  {"volume_rho2", a.vol_rho2},
                  {"volume_intersection", a.vol_both}};
  return r;
}

FairnessReport build_report(const io::FeedForwardNetwork& net, const io::FeatureSchema& schema,
                            const io::Dataset& dataset, const ReportConfig& config) {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  const auto& pv = schema.protected_values();
  // Fail fast on infeasible regimes before any work.
  const density::Grid grid(schema.continuous_dim(), config.bins);
  reach::enumerate_categorical(schema, config.analysis.regions.assignment_ceiling);

  const auto all = dataset.all();
  const auto model = density::fit_density(all.x, schema, config.bins, config.analysis.regions.assignment_ceiling);
  const auto t1 = clock::now();
  const auto analysis = analyze(net, schema, model, pv[0], pv[1], config.analysis);
  const auto t2 = clock::now();

  FairnessReport r = metrics_from(analysis, config.preference_form);
  const auto test = dataset.select(io::Split::Test);
  std::vector<double> scores;
  for (int i = 0; i < test.rows(); ++i) scores.push_back(net.forward(Eigen::VectorXd(test.x.row(i).transpose())));
  r.auc = auc(scores, test.y);

  r.grid_dims = grid.dims();
  r.grid_bins = grid.bins();
  r.model_hash = hash_hex(write_json(io::network_to_json(net)));
  r.density_hash = hash_hex(write_json(density::density_to_json(model, schema)));
  r.dataset_hash = hash_hex(write_json(io::dataset_to_json(dataset)));
  r.run = config.run;
  r.config = config.resolved_config;
  const auto t3 = clock::now();
  auto secs = [](auto a, auto b) { return std::chrono::duration<double>(b - a).count(); };
  r.timings = Json{{"density_s", secs(t0, t1)}, {"analysis_s", secs(t1, t2)}, {"total_s", secs(t0, t3)}};
  return r;
}

Json report_to_json(const FairnessReport& r) {
  return Json{
      {"schema_version", kReportSchemaVersion},
      {"tool_version", kToolVersion},
      {"classes", Json::array({r.class_1, r.class_2})},
      {"metrics",
       Json{{"wsd", r.wsd},
            {"vsd", r.vsd},
            {"np", r.np},
            {"advantage_12", r.advantage_12},
            {"advantage_21", r.advantage_21},
            {"preference_12", r.preference_12},
            {"preference_21", r.preference_21},
            {"auc", r.auc}}},
      {"preference_form", to_string(r.preference_form)},
      {"vsd_weighting", "uniform per categorical assignment"},
      {"tie_rule", "logit >= 0 is accept; closed half-spaces on both sides of every split"},
      {"tolerances",
       Json{{"feasibility", geometry::kFeasTol}, {"dimension", geometry::kDimTol}, {"dedup", geometry::kDedupTol}}},
      {"grid", Json{{"dims", r.grid_dims}, {"bins", r.grid_bins}}},
      {"hashes", Json{{"model", r.model_hash}, {"density", r.density_hash}, {"dataset", r.dataset_hash}}},
      {"run", r.run},
      {"config", r.config},
      {"probabilities", r.probabilities},
      {"counts", r.counts},
      {"timings", r.timings}};
}

FairnessReport report_from_json(const Json& j) {
  if (j.value("schema_version", 0) != kReportSchemaVersion) throw SchemaError("unsupported report schema version");
  FairnessReport r;
  r.class_1 = j.at("classes").at(0).get<std::string>();
  r.class_2 = j.at("classes").at(1).get<std::string>();
  const auto& m = j.at("metrics");
  r.wsd = m.at("wsd").get<double>();
  r.vsd = m.at("vsd").get<double>();
  r.np = m.at("np").get<double>();
  r.advantage_12 = m.at("advantage_12").get<double>();
  r.advantage_21 = m.at("advantage_21").get<double>();
  r.preference_12 = m.at("preference_12").get<double>();
  r.preference_21 = m.at("preference_21").get<double>();
  r.auc = m.at("auc").get<double>();
  r.preference_form = preference_form_from_string(j.at("preference_form").get<std::string>());
  r.grid_dims = j.at("grid").at("dims").get<int>();
  r.grid_bins = j.at("grid").at("bins").get<int>();
  r.model_hash = j.at("hashes").at("model").get<std::string>();
  r.density_hash = j.at("hashes").at("density").get<std::string>();
  r.dataset_hash = j.at("hashes").at("dataset").get<std::string>();
  r.run = j.value("run", Json::object());
  r.config = j.value("config", Json::object());
  r.probabilities = j.value("probabilities", Json::object());
  r.counts = j.value("counts", Json::object());
  r.timings = j.value("timings", Json::object());
  return r;
}

namespace {

std::string label_of(const Json& run, const char* key, const std::string& fallback) {
  if (!run.contains(key)) return fallback;
  const auto& v = run.at(key);
  return v.is_string() ? v.get<std::string>() : v.dump();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

int strategy_rank(const std::string& s) {
  static const std::vector<std::string> order{"baseline", "permute", "remove", "augment"};
  const auto it = std::find(order.begin(), order.end(), s);
  return it == order.end() ? static_cast<int>(order.size()) : static_cast<int>(it - order.begin());
}

struct Cell {
  double v[4] = {0, 0, 0, 0};  // auc, wsd, vsd, np
  bool present = false;
};

}  // namespace

std::string render_table(const std::vector<FairnessReport>& reports, bool csv) {
  // block -> trial -> strategy -> values
  std::map<std::string, std::map<std::string, std::map<std::string, Cell>>> blocks;
  std::map<std::string, std::vector<std::string>> strategies;
  for (const auto& r : reports) {
    const auto block = label_of(r.run, "dataset", "dataset") + " / " + label_of(r.run, "arch", "arch");
    const auto trial = label_of(r.run, "trial", "0");
    const auto strat = label_of(r.run, "strategy", "model");
    Cell& c = blocks[block][trial][strat];
    c = Cell{{r.auc, r.wsd, r.vsd, r.np}, true};
    auto& ss = strategies[block];
    if (std::find(ss.begin(), ss.end(), strat) == ss.end()) ss.push_back(strat);
  }
  static const char* kNames[4] = {"AUC", "WSD", "VSD", "NP"};
  std::ostringstream out;
  if (csv) out << "block,trial,strategy,auc,wsd,vsd,np\n";
  for (auto& [block, trials] : blocks) {
    auto ss = strategies[block];
    std::stable_sort(ss.begin(), ss.end(), [](const auto& a, const auto& b) { return strategy_rank(a) < strategy_rank(b); });
    // Average row over trials in which the strategy is present.
    std::map<std::string, Cell> avg;
    for (const auto& s : ss) {
      int n = 0;
      for (auto& [t, row] : trials) {
        auto it = row.find(s);
        if (it == row.end()) continue;
        for (int k = 0; k < 4; ++k) avg[s].v[k] += it->second.v[k];
        ++n;
      }
      for (int k = 0; k < 4; ++k) avg[s].v[k] /= std::max(n, 1);
      avg[s].present = n > 0;
    }
    std::vector<std::pair<std::string, std::map<std::string, Cell>>> rows(trials.begin(), trials.end());
    rows.emplace_back("average", avg);

    if (csv) {
      for (const auto& [t, row] : rows)
        for (const auto& s : ss) {
          auto it = row.find(s);
          if (it == row.end()) continue;
          out << '"' << block << "\"," << t << ',' << s;
          for (double v : it->second.v) out << ',' << fmt(v);
          out << '\n';
        }
      continue;
    }

    out << block << "\n";
    out << "trial";
    for (const auto& s : ss)
      for (const char* m : kNames) out << " | " << s << " " << m;
    out << "\n";
    for (const auto& [t, row] : rows) {
      // Best per metric across strategies: highest AUC, lowest WSD/VSD/NP.
      double best[4] = {-INFINITY, INFINITY, INFINITY, INFINITY};
      for (const auto& s : ss) {
        auto it = row.find(s);
        if (it == row.end()) continue;
        best[0] = std::max(best[0], it->second.v[0]);
        for (int k = 1; k < 4; ++k) best[k] = std::min(best[k], it->second.v[k]);
      }
      out << t;
      for (const auto& s : ss) {
        auto it = row.find(s);
        for (int k = 0; k < 4; ++k) {
          out << " | ";
          if (it == row.end()) {
            out << "-";
            continue;
          }
          const auto v = fmt(it->second.v[k]);
          out << (fmt(best[k]) == v && ss.size() > 1 ? "**" + v + "**" : v);
        }
      }
      out << "\n";
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace polyfair::metrics
