#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "dsssp/experiment.hpp"

using namespace dsssp;

namespace {

std::optional<VirtualVariant> parse_variant(const std::string& name, double eps) {
  if (name.empty() || name == "auto") return std::nullopt;
  VirtualVariant v;
  v.kind = variant_from_string(name);
  v.eps = eps;
  return v;
}

void print_record(const ReportRecord& r) {
  std::cout << r.instance << " n=" << r.n << " d_hat=" << r.d_hat << " seed=" << r.seed << " variant=" << r.variant
            << " rounds=" << r.rounds << " congestion=" << r.max_edge_congestion;
  if (r.exact_match) std::cout << " exact=" << (*r.exact_match ? "yes" : "no");
  if (!r.error.empty()) std::cout << " error=\"" << r.error << "\"";
  std::cout << " digest=" << r.digest << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Round-synchronous CONGEST simulator and distributed shortest-path experiments"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate an instance file");
  std::string family = "erdos_renyi_connected", gen_out;
  std::size_t gen_n = 64;
  Dist gen_lambda = 16;
  std::uint64_t gen_seed = 1;
  bool symmetric = false;
  gen->add_option("--family", family, "path|cycle|star_of_paths|erdos_renyi_connected|low_diameter_expander|grid");
  gen->add_option("--n", gen_n, "Node count")->check(CLI::PositiveNumber);
  gen->add_option("--lambda", gen_lambda, "Largest weight")->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_seed, "Generator seed");
  gen->add_flag("--symmetric", symmetric, "Same weight in both directions");
  gen->add_option("--out", gen_out, "Output file (.gz compresses)")->required();

  // run
  auto* run = app.add_subcommand("run", "Run an experiment matrix");
  std::string config_path, seeds = "1", algorithm = "main", variant, out_dir;
  std::vector<std::size_t> sizes;
  std::vector<std::string> files;
  std::string run_family = "erdos_renyi_connected";
  Dist run_lambda = 16;
  std::uint64_t gen_base_seed = 1, cap_multiplier = 0;
  double eps = 0.5;
  std::size_t kappa = 1;
  unsigned threads = 1;
  bool oracle = false, fixed_instance = false;
  run->add_option("--config", config_path, "JSON experiment config (other flags are ignored)");
  run->add_option("--family", run_family, "Generator family");
  run->add_option("--n", sizes, "Node counts")->delimiter(',');
  run->add_option("--lambda", run_lambda, "Largest weight");
  run->add_option("--instance", files, "Instance files");
  run->add_option("--generator-seed", gen_base_seed, "Base generator seed");
  run->add_flag("--fixed-instance", fixed_instance, "Reuse one instance for all seeds");
  run->add_option("--seeds", seeds, "Seed list, e.g. 1-20 or 3,5,8");
  run->add_option("--algorithm", algorithm, "main|bellman_ford_baseline|multi_source");
  run->add_option("--variant", variant, "auto|queue|gather|nonrecursive|recursive");
  run->add_option("--eps", eps, "eps for the recursive variant");
  run->add_option("--kappa", kappa, "Number of sources");
  run->add_flag("--oracle-check", oracle, "Compare against sequential Dijkstra");
  run->add_option("--round-cap-multiplier", cap_multiplier, "Scheduler round cap multiplier");
  run->add_option("--threads", threads, "Worker threads");
  run->add_option("--out", out_dir, "Output directory");

  // report
  auto* report = app.add_subcommand("report", "Fit round complexity from a report");
  std::string report_in, report_out;
  report->add_option("--in", report_in, "report.csv")->required();
  report->add_option("--out", report_out, "Write fits as JSON lines");

  // replay
  auto* rep = app.add_subcommand("replay", "Re-run a stored failure artifact");
  std::string artifact;
  std::uint64_t rep_cap = 0;
  rep->add_option("artifact", artifact, "Artifact .json")->required();
  rep->add_option("--round-cap-multiplier", rep_cap, "Scheduler round cap multiplier");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      GeneratorSpec g;
      g.family = family_from_string(family);
      g.n = gen_n;
      g.lambda = gen_lambda;
      g.seed = gen_seed;
      g.symmetric = symmetric;
      save_instance(gen_out, generate(g));
      std::cout << "wrote " << gen_out << "\n";
      return 0;
    }
    if (*run) {
      ExperimentConfig c;
      if (!config_path.empty()) {
        std::ifstream is(config_path);
        if (!is) throw IoError("cannot read " + config_path);
        std::stringstream buf;
        buf << is.rdbuf();
        c = config_from_json(buf.str());
        if (!out_dir.empty()) c.out_dir = out_dir;
      } else {
        for (auto n : sizes) {
          GeneratorSpec g;
          g.family = family_from_string(run_family);
          g.n = n;
          g.lambda = run_lambda;
          g.seed = gen_base_seed;
          c.generators.push_back(g);
        }
        c.instance_files = files;
        c.algorithm = algorithm_from_string(algorithm);
        c.variant = parse_variant(variant, eps);
        c.kappa = kappa;
        c.seeds = parse_seed_list(seeds);
        c.vary_instance = !fixed_instance;
        c.oracle_check = oracle;
        c.round_cap_multiplier = cap_multiplier;
        c.out_dir = out_dir;
        c.threads = threads;
      }
      auto records = run_experiment(c);
      std::size_t exact = 0, checked = 0, errors = 0;
      for (const auto& r : records) {
        print_record(r);
        if (r.exact_match) {
          ++checked;
          exact += *r.exact_match;
        }
        errors += !r.error.empty();
      }
      std::cout << records.size() << " runs";
      if (checked) std::cout << ", " << exact << "/" << checked << " exact";
      std::cout << ", " << errors << " flagged or errored\n";
      return 0;
    }
    if (*report) {
      std::ifstream is(report_in);
      if (!is) throw IoError("cannot read " + report_in);
      auto fits = complexity_report(read_csv(is));
      std::ofstream os;
      if (!report_out.empty()) {
        os.open(report_out);
        if (!os) throw IoError("cannot write " + report_out);
      }
      for (const auto& f : fits) {
        std::cout << std::left << std::setw(48) << f.group << " slope=" << std::fixed << std::setprecision(3)
                  << f.slope << " intercept=" << f.intercept << " r2=" << f.r2 << " points=" << f.points
                  << (f.regression ? " REGRESSION" : "") << "\n";
        if (os)
          os << "{\"group\":\"" << f.group << "\",\"slope\":" << f.slope << ",\"intercept\":" << f.intercept
             << ",\"r2\":" << f.r2 << ",\"points\":" << f.points
             << ",\"regression\":" << (f.regression ? "true" : "false") << "}\n";
      }
      return 0;
    }
    if (*rep) {
      if (rep_cap) set_round_cap_multiplier(rep_cap);
      ReplayArtifact a = load_artifact(artifact);
      ReportRecord r = replay(a);
      print_record(r);
      if (a.digest.empty()) return 0;
      bool same = r.digest == a.digest;
      std::cout << (same ? "replay identical" : "replay differs: expected " + a.digest) << "\n";
      return same ? 0 : 1;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
