#pragma once

#include <cstdint>
#include <exception>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "polyfair/common/json_writer.hpp"

namespace polyfair::cli {

enum ExitCode { kOk = 0, kConfigError = 2, kInfeasible = 3, kNumerical = 4 };

struct RunConfig {
  std::string subcommand;
  std::filesystem::path schema, csv, dataset, model, out;
  std::vector<std::filesystem::path> reports;
  int grid_bins = 10;
  std::string strategy = "baseline";
  std::string arch = "small";
  std::uint64_t seed = 0;
  int jobs = 1;
  long mc_samples = 1'000'000;
  std::string preference_form = "formula";
  std::string augment_label = "model";
  long branch_ceiling = 1'000'000;
  long assignment_ceiling = 4096;
  int epochs = 300;
  int trial = -1;        // label only; -1 = unset
  std::string name;      // dataset label in reports; defaults to the dataset file stem
  bool csv_table = false;
};

Json config_to_json(const RunConfig& c);

// {"tool_version", "config", "inputs": {path: hash}} for every input file of c.
Json provenance(const RunConfig& c);

// Maps a library exception onto the process exit code.
int exit_code_for(const std::exception& e);

// Each writes its document to c.out (or `out` when unset) and a short
// summary to `log`. Exceptions propagate.
void cmd_ingest(const RunConfig& c, std::ostream& out, std::ostream& log);
void cmd_train(const RunConfig& c, std::ostream& out, std::ostream& log);
void cmd_regions(const RunConfig& c, std::ostream& out, std::ostream& log);
void cmd_verify(const RunConfig& c, std::ostream& out, std::ostream& log);
void cmd_oracle(const RunConfig& c, std::ostream& out, std::ostream& log);
void cmd_report(const RunConfig& c, std::ostream& out, std::ostream& log);

// Parses argv, dispatches, and returns the exit code. Errors go to `log`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& log);

}  // namespace polyfair::cli
