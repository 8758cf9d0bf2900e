#include "polyfair/cli/commands.hpp"

#include <cctype>
#include <chrono>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "polyfair/common/errors.hpp"
#include "polyfair/common/hash.hpp"
#include "polyfair/common/parallel.hpp"
#include "polyfair/common/random.hpp"
#include "polyfair/common/version.hpp"
#include "polyfair/density/density.hpp"
#include "polyfair/fairtrain/strategies.hpp"
#include "polyfair/geometry/region_dump.hpp"
#include "polyfair/metrics/report.hpp"
#include "polyfair/model_io/dataset.hpp"
#include "polyfair/model_io/documents.hpp"
#include "polyfair/reach/categorical.hpp"
#include "polyfair/reach/reach.hpp"

namespace polyfair::cli {
namespace fs = std::filesystem;

Json config_to_json(const RunConfig& c) {
  Json reports = Json::array();
  for (const auto& r : c.reports) reports.push_back(r.string());
  return Json{{"subcommand", c.subcommand},
              {"schema", c.schema.string()},
              {"csv", c.csv.string()},
              {"dataset", c.dataset.string()},
              {"model", c.model.string()},
              {"out", c.out.string()},
              {"reports", reports},
              {"grid_bins", c.grid_bins},
              {"strategy", c.strategy},
              {"arch", c.arch},
              {"seed", c.seed},
              {"jobs", c.jobs},
              {"mc_samples", c.mc_samples},
              {"preference_form", c.preference_form},
              {"augment_label", c.augment_label},
              {"branch_ceiling", c.branch_ceiling},
              {"assignment_ceiling", c.assignment_ceiling},
              {"epochs", c.epochs},
              {"trial", c.trial},
              {"name", c.name},
              {"csv_table", c.csv_table}};
}

Json provenance(const RunConfig& c) {
  Json inputs = Json::object();
  auto add = [&](const fs::path& p) {
    if (!p.empty()) inputs[p.string()] = hash_hex(read_text_file(p));
  };
  for (const auto* p : {&c.schema, &c.csv, &c.dataset, &c.model}) add(*p);
  for (const auto& r : c.reports) add(r);
  return Json{{"tool_version", kToolVersion}, {"config", config_to_json(c)}, {"inputs", inputs}};
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const InfeasibleError*>(&e)) return kInfeasible;
  if (dynamic_cast<const NumericalError*>(&e) || dynamic_cast<const EstimationError*>(&e) ||
      dynamic_cast<const TrainingError*>(&e) || dynamic_cast<const InternalError*>(&e) ||
      dynamic_cast<const EmptyPolytopeError*>(&e) || dynamic_cast<const DegenerateRegion*>(&e))
    return kNumerical;
  return kConfigError;
}

namespace {

void require(const fs::path& p, const char* flag) {
  if (p.empty()) throw ConfigError(std::string(flag) + " is required");
  if (!fs::exists(p)) throw ConfigError(std::string("no such file for ") + flag + ": " + p.string());
}

void check_ranges(const RunConfig& c) {
  if (c.grid_bins < 1) throw ConfigError("--grid-bins must be at least 1");
  if (c.jobs < 1) throw ConfigError("--jobs must be at least 1");
  if (c.mc_samples < 1) throw ConfigError("--mc-samples must be at least 1");
  if (c.branch_ceiling < 1) throw ConfigError("--branch-ceiling must be at least 1");
  if (c.assignment_ceiling < 1) throw ConfigError("--assignment-ceiling must be at least 1");
  if (c.epochs < 0) throw ConfigError("--epochs must be non-negative");
}

void emit(const RunConfig& c, const Json& doc, std::ostream& out) {
  if (c.out.empty())
    out << write_json(doc);
  else
    write_json_file(c.out, doc);
}

void emit_text(const RunConfig& c, const std::string& text, std::ostream& out) {
  if (c.out.empty()) {
    out << text;
    return;
  }
  if (c.out.has_parent_path()) fs::create_directories(c.out.parent_path());
  std::ofstream os(c.out, std::ios::binary);
  if (!os) throw ConfigError("cannot open for writing: " + c.out.string());
  os << text;
}

io::Dataset load_dataset(const fs::path& p) { return io::dataset_from_json(read_json_file(p)); }

// The model document carries the schema with the train-split ranges; the
// dataset must encode to the same input layout.
void check_compatible(const io::ModelDocument& doc, const io::Dataset& ds) {
  if (doc.schema.input_dim() != ds.schema.input_dim() ||
      doc.schema.protected_values() != ds.schema.protected_values())
    throw ConfigError("model and dataset schemas disagree (input dimension " +
                      std::to_string(doc.schema.input_dim()) + " vs " + std::to_string(ds.schema.input_dim()) + ")");
}

reach::RegionOptions region_options(const RunConfig& c) {
  reach::RegionOptions o;
  o.reach.branch_ceiling = c.branch_ceiling;
  o.assignment_ceiling = c.assignment_ceiling;
  return o;
}

std::string file_label(std::string s) {
  for (auto& ch : s)
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '-' && ch != '_') ch = '_';
  return s;
}

}  // namespace

void cmd_ingest(const RunConfig& c, std::ostream& out, std::ostream& log) {
  require(c.schema, "--schema");
  require(c.csv, "--csv");
  const auto schema = io::FeatureSchema::from_json(read_json_file(c.schema));
  const auto ds = io::ingest_csv(c.csv, schema, c.seed);
  auto doc = io::dataset_to_json(ds);
  doc["provenance"] = provenance(c);
  emit(c, doc, out);
  log << "rows " << ds.rows.size() << " (train " << ds.count(io::Split::Train) << ", val "
      << ds.count(io::Split::Val) << ", test " << ds.count(io::Split::Test) << "), dropped "
      << ds.report.dropped_missing << ", clamped " << ds.report.clamped_rows << '\n';
}

void cmd_train(const RunConfig& c, std::ostream& out, std::ostream& log) {
  require(c.dataset, "--dataset");
  const auto ds = load_dataset(c.dataset);
  train::Hyperparams h;
  h.arch = train::arch_from_string(c.arch);
  h.strategy = train::strategy_from_string(c.strategy);
  h.augment_label = train::augment_label_from_string(c.augment_label);
  h.seed = c.seed;
  h.epochs = c.epochs;
  const auto res = train::train_strategy(ds, h);
  io::ModelDocument doc{res.model, ds.schema, Json::object()};
  doc.extras["training"] = res.training;
  doc.extras["provenance"] = provenance(c);
  const auto text = io::save_model_string(doc);
  emit_text(c, text, out);
  log << "trained " << c.strategy << " (" << c.arch << ", seed " << c.seed << "), model hash " << hash_hex(text)
      << '\n';
}

void cmd_regions(const RunConfig& c, std::ostream&, std::ostream& log) {
  require(c.model, "--model");
  if (c.out.empty()) throw ConfigError("--out (a directory) is required for regions");
  const auto doc = io::load_model(c.model);
  const auto& schema = doc.schema;
  const auto assignments = reach::enumerate_categorical(schema, c.assignment_ceiling);
  const auto& classes = schema.protected_values();
  const long na = static_cast<long>(assignments.size());
  const long items = static_cast<long>(classes.size()) * na;
  std::vector<std::vector<geometry::DumpEntry>> dumps(static_cast<std::size_t>(items));
  std::vector<reach::ReachStats> stats(static_cast<std::size_t>(items));
  const auto opts = region_options(c);
  parallel_for(items, c.jobs, [&](long k) {
    const auto& cls = classes[static_cast<std::size_t>(k / na)];
    const auto& a = assignments[static_cast<std::size_t>(k % na)];
    const auto regions = reach::class_regions(doc.net, schema, cls, a, opts.reach, &stats[static_cast<std::size_t>(k)]);
    auto& out = dumps[static_cast<std::size_t>(k)];
    for (const auto& r : regions) out.push_back({r.polytope, r.label, schema.assignment_to_json(a)});
  });

  fs::create_directories(c.out);
  Json files = Json::array();
  long total = 0, explored = 0;
  for (long k = 0; k < items; ++k) {
    const auto ci = static_cast<std::size_t>(k / na);
    const auto ai = static_cast<std::size_t>(k % na);
    const auto name = "regions_" + file_label(classes[ci]) + "_" + std::to_string(ai) + ".json";
    const auto& d = dumps[static_cast<std::size_t>(k)];
    write_json_file(c.out / name, geometry::region_dump_to_json(d));
    long accept = 0;
    for (const auto& e : d) accept += e.label == 1;
    files.push_back(Json{{"file", name},
                         {"class", classes[ci]},
                         {"categorical_assignment", schema.assignment_to_json(assignments[ai])},
                         {"regions", d.size()},
                         {"accept_regions", accept},
                         {"explored", stats[static_cast<std::size_t>(k)].explored},
                         {"thin_dropped", stats[static_cast<std::size_t>(k)].thin_dropped}});
    total += static_cast<long>(d.size());
    explored += stats[static_cast<std::size_t>(k)].explored;
  }
  Json manifest{{"provenance", provenance(c)},
                {"model_hash", hash_hex(write_json(io::network_to_json(doc.net)))},
                {"continuous_features", schema.continuous_dim()},
                {"files", files}};
  write_json_file(c.out / "manifest.json", manifest);
  log << "wrote " << items << " region files (" << total << " regions, " << explored << " star sets explored) to "
      << c.out.string() << '\n';
}

void cmd_verify(const RunConfig& c, std::ostream& out, std::ostream& log) {
  require(c.model, "--model");
  require(c.dataset, "--dataset");
  const auto doc = io::load_model(c.model);
  const auto ds = load_dataset(c.dataset);
  check_compatible(doc, ds);

  metrics::ReportConfig rc;
  rc.bins = c.grid_bins;
  rc.preference_form = metrics::preference_form_from_string(c.preference_form);
  rc.analysis.regions = region_options(c);
  rc.analysis.jobs = c.jobs;
  rc.resolved_config = provenance(c);
  Json run{{"dataset", c.name.empty() ? c.dataset.stem().string() : c.name}};
  if (doc.extras.contains("training")) {
    const auto& t = doc.extras.at("training");
    run["strategy"] = t.value("strategy", "model");
    if (t.contains("hyperparameters")) run["arch"] = t.at("hyperparameters").value("arch", "arch");
    run["seed"] = t.value("seed", std::uint64_t{0});
  }
  if (c.trial >= 0) run["trial"] = c.trial;
  rc.run = run;

  const auto report = metrics::build_report(doc.net, doc.schema, ds, rc);
  emit(c, metrics::report_to_json(report), out);
  log << "WSD " << report.wsd << "  VSD " << report.vsd << "  NP " << report.np << "  AUC " << report.auc << '\n';
}

void cmd_oracle(const RunConfig& c, std::ostream& out, std::ostream& log) {
  require(c.model, "--model");
  require(c.dataset, "--dataset");
  const auto doc = io::load_model(c.model);
  const auto ds = load_dataset(c.dataset);
  check_compatible(doc, ds);
  const auto t0 = std::chrono::steady_clock::now();
  const auto all = ds.all();
  const auto model = density::fit_density(all.x, doc.schema, c.grid_bins, c.assignment_ceiling);
  const std::uint64_t base = derive_seed(c.seed, streams::kMonteCarlo);

  Json probs = Json::object();
  const auto& classes = doc.schema.protected_values();
  for (std::size_t k = 0; k < classes.size(); ++k) {
    const auto p = density::mc_probability(model, doc.schema, classes[k], doc.net, 1, c.mc_samples,
                                           derive_seed(base, k));
    probs[classes[k]] = Json{{"value", p.value}, {"stderr", p.stderr_}, {"samples", p.samples}, {"seed", p.seed},
                             {"method", p.method}};
  }
  const auto flip = density::mc_flip(model, doc.schema, doc.net, 1, c.mc_samples, derive_seed(base, classes.size()));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  Json res{{"tool_version", kToolVersion},
           {"provenance", provenance(c)},
           {"model_hash", hash_hex(write_json(io::network_to_json(doc.net)))},
           {"density_hash", hash_hex(write_json(density::density_to_json(model, doc.schema)))},
           {"acceptance", probs},
           {"flip",
            Json{{"advantage_12", flip.p12},
                 {"stderr_12", flip.se12},
                 {"advantage_21", flip.p21},
                 {"stderr_21", flip.se21},
                 {"wsd", flip.wsd},
                 {"stderr", flip.se},
                 {"samples", flip.samples},
                 {"seed", flip.seed}}},
           {"timings", Json{{"total_s", secs}}}};
  emit(c, res, out);
  log << "MC WSD " << flip.wsd << " +- " << flip.se << " (" << flip.samples << " samples per direction)\n";
}

void cmd_report(const RunConfig& c, std::ostream& out, std::ostream& log) {
  if (c.reports.empty()) throw ConfigError("report needs at least one report file");
  std::vector<metrics::FairnessReport> reports;
  for (const auto& p : c.reports) {
    require(p, "report");
    reports.push_back(metrics::report_from_json(read_json_file(p)));
  }
  emit_text(c, metrics::render_table(reports, c.csv_table), out);
  log << "aggregated " << reports.size() << " reports\n";
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& log) {
  RunConfig c;
  CLI::App app{"Provable fairness metrics for ReLU classifiers"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  const std::vector<std::string> strategies{"baseline", "permute", "remove", "augment"};
  auto in = [&](CLI::App* s, const char* flag, fs::path& p, const char* help) { s->add_option(flag, p, help); };
  auto reach_flags = [&](CLI::App* s) {
    s->add_option("--branch-ceiling", c.branch_ceiling, "Maximum star sets explored per class and assignment");
    s->add_option("--assignment-ceiling", c.assignment_ceiling, "Maximum categorical assignments");
    s->add_option("--jobs", c.jobs, "Worker threads");
  };

  auto* ingest = app.add_subcommand("ingest", "Normalize and split a CSV into a dataset document");
  in(ingest, "--schema", c.schema, "Feature schema JSON");
  in(ingest, "--csv", c.csv, "Input CSV");
  ingest->add_option("--seed", c.seed, "Split seed");
  in(ingest, "--out", c.out, "Output dataset JSON (stdout if omitted)");

  auto* trn = app.add_subcommand("train", "Train a classifier with one of the four strategies");
  in(trn, "--dataset", c.dataset, "Dataset JSON");
  trn->add_option("--strategy", c.strategy)->check(CLI::IsMember(strategies));
  trn->add_option("--arch", c.arch)->check(CLI::IsMember({"small", "medium"}));
  trn->add_option("--seed", c.seed, "Initialization / shuffle / permutation seed");
  trn->add_option("--augment-label", c.augment_label)->check(CLI::IsMember({"model", "ground_truth"}));
  trn->add_option("--epochs", c.epochs);
  in(trn, "--out", c.out, "Output model JSON (stdout if omitted)");

  auto* regions = app.add_subcommand("regions", "Dump labeled polytopes per class and categorical assignment");
  in(regions, "--model", c.model, "Model JSON");
  in(regions, "--out", c.out, "Output directory");
  reach_flags(regions);

  auto* verify = app.add_subcommand("verify", "Compute WSD, VSD, NP and AUC for a model");
  in(verify, "--model", c.model, "Model JSON");
  in(verify, "--dataset", c.dataset, "Dataset JSON (densities and AUC)");
  verify->add_option("--grid-bins", c.grid_bins, "Histogram bins per continuous axis");
  verify->add_option("--preference-form", c.preference_form)->check(CLI::IsMember({"formula", "text"}));
  verify->add_option("--trial", c.trial, "Trial label for the summary table");
  verify->add_option("--name", c.name, "Dataset label for the summary table");
  in(verify, "--out", c.out, "Output report JSON (stdout if omitted)");
  reach_flags(verify);

  auto* oracle = app.add_subcommand("oracle", "Monte Carlo acceptance and flip-test estimates");
  in(oracle, "--model", c.model, "Model JSON");
  in(oracle, "--dataset", c.dataset, "Dataset JSON");
  oracle->add_option("--grid-bins", c.grid_bins);
  oracle->add_option("--mc-samples", c.mc_samples);
  oracle->add_option("--seed", c.seed);
  oracle->add_option("--assignment-ceiling", c.assignment_ceiling);
  in(oracle, "--out", c.out, "Output JSON (stdout if omitted)");

  auto* report = app.add_subcommand("report", "Aggregate report files into the strategy x metric table");
  report->add_option("reports", c.reports, "Report JSON files")->required();
  report->add_flag("--csv", c.csv_table, "CSV instead of text");
  in(report, "--out", c.out, "Output file (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, log);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    c.subcommand = app.get_subcommands().front()->get_name();
    check_ranges(c);
    if (c.subcommand == "ingest") cmd_ingest(c, out, log);
    else if (c.subcommand == "train") cmd_train(c, out, log);
    else if (c.subcommand == "regions") cmd_regions(c, out, log);
    else if (c.subcommand == "verify") cmd_verify(c, out, log);
    else if (c.subcommand == "oracle") cmd_oracle(c, out, log);
    else cmd_report(c, out, log);
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return kOk;
}

}  // namespace polyfair::cli
