#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dsssp/graph_model.hpp"
#include "dsssp/sssp_main.hpp"

namespace dsssp {

enum class Algorithm { bellman_ford_baseline, main, multi_source };

std::string to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& s);

struct ExperimentConfig {
  std::vector<GeneratorSpec> generators;
  std::vector<std::string> instance_files;
  Algorithm algorithm = Algorithm::main;
  std::optional<VirtualVariant> variant;
  std::size_t kappa = 1;
  std::vector<std::uint64_t> seeds{1};
  /// Generated instances are re-drawn for every run seed.
  bool vary_instance = true;
  bool oracle_check = false;
  std::uint64_t round_cap_multiplier = 0;  // 0 keeps the current setting
  std::string out_dir;                     // empty: nothing is written
  unsigned threads = 1;

  void validate() const;
};

ExperimentConfig config_from_json(const std::string& text);
std::string config_to_json(const ExperimentConfig& c);

struct ReportRecord {
  std::string instance;
  std::string family;
  std::size_t n = 0;
  std::size_t d_hat = 0;
  Dist lambda = 0;
  std::size_t kappa = 1;
  std::string algorithm;
  std::string variant;
  std::uint64_t seed = 0;
  Round rounds = 0;
  std::uint64_t max_edge_congestion = 0;
  std::uint64_t total_messages = 0;
  std::optional<bool> exact_match;
  std::string error;
  /// Hash of the distance tables and counters; equal runs give equal digests.
  std::string digest;
  std::string artifact;
  double wall_time = 0;
};

void write_csv_header(std::ostream& os);
void write_csv_row(std::ostream& os, const ReportRecord& r);
std::string to_json_line(const ReportRecord& r);
std::vector<ReportRecord> read_csv(std::istream& is);

/// One run of the configured algorithm on one instance.
ReportRecord run_single(const WeightedInstance& inst, const std::string& name, const std::string& family,
                        Algorithm algorithm, const std::optional<VirtualVariant>& variant, std::size_t kappa,
                        std::uint64_t seed, bool oracle_check);

/// Runs every (instance, seed) row. Simulation errors become per-row error
/// strings. With an output directory, report.csv and report.jsonl are
/// written, and each failed or mismatching row stores a replay artifact.
std::vector<ReportRecord> run_experiment(const ExperimentConfig& config);

/// Replay descriptor stored next to a failure: instance file plus run knobs.
struct ReplayArtifact {
  std::string instance_path;
  Algorithm algorithm = Algorithm::main;
  std::optional<VirtualVariant> variant;
  std::size_t kappa = 1;
  std::uint64_t seed = 0;
  bool oracle_check = true;
  std::string digest;
};

std::string save_artifact(const std::string& dir, const std::string& stem, const WeightedInstance& inst,
                          const ReplayArtifact& a);
ReplayArtifact load_artifact(const std::string& path);
ReportRecord replay(const ReplayArtifact& a);

struct Fit {
  std::string group;
  double slope = 0;
  double intercept = 0;
  double r2 = 0;
  std::size_t points = 0;
  bool regression = false;  // slope > 0.95
};

/// Least squares of log(y) on log(x); needs at least 4 distinct x values.
Fit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

/// One fit of log(rounds) against log(n) per (algorithm/variant, family).
std::vector<Fit> complexity_report(const std::vector<ReportRecord>& records);

std::vector<std::uint64_t> parse_seed_list(const std::string& spec);

}  // namespace dsssp
