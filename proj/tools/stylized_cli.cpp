#include <cstdint>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stylized/stylized.hpp"

namespace {

using namespace stylized;

std::map<std::string, double> parse_thresholds(const std::vector<std::string>& items) {
  std::map<std::string, double> out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) fail(ErrorKind::InvalidArgument, "threshold must be NAME=VALUE: " + item);
    try {
      out[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    } catch (const std::exception&) {
      fail(ErrorKind::InvalidArgument, "threshold value is not a number: " + item);
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stylized empirical facts of daily stock returns"};
  app.require_subcommand(1);

  // analyze
  RunConfig cfg;
  std::string config_file;
  std::vector<std::string> thresholds;
  bool non_overlapping = false;
  auto* analyze = app.add_subcommand("analyze", "Run the fact battery on every stock of a manifest");
  analyze->add_option("-m,--manifest", cfg.manifest, "Manifest JSON")->required();
  analyze->add_option("-o,--out", cfg.output_dir, "Output directory")->capture_default_str();
  analyze->add_option("-c,--config", config_file, "JSON config file; its keys override flags")
      ->check(CLI::ExistingFile);
  analyze->add_option("--horizons", cfg.analysis.horizons, "Return horizons in trading days")
      ->delimiter(',')
      ->capture_default_str();
  analyze->add_flag("--non-overlapping", non_overlapping, "Use non-overlapping multi-day returns");
  analyze->add_option("--alpha", cfg.analysis.significance, "Significance level")->capture_default_str();
  analyze->add_option("--absence-lag", cfg.analysis.absence_lag, "Portmanteau lag on returns")->capture_default_str();
  analyze->add_option("--clustering-lag", cfg.analysis.clustering_lag, "Portmanteau lag on squared returns")
      ->capture_default_str();
  analyze->add_option("--windows", cfg.analysis.asymmetry_windows, "Time-scale asymmetry windows")
      ->delimiter(',')
      ->capture_default_str();
  analyze->add_option("--min-observations", cfg.analysis.min_observations, "Minimum cleaned prices per stock")
      ->capture_default_str();
  analyze->add_option("-j,--workers", cfg.workers, "Worker threads")->capture_default_str();
  analyze->add_option("--threshold", thresholds, "Verdict threshold override NAME=VALUE (repeatable)");
  analyze->add_option("--seed", cfg.seed, "Random seed for simulation subcommands")->capture_default_str();

  // cluster
  std::vector<std::string> summaries;
  std::string cluster_from;
  std::string cluster_out = ".";
  auto* cluster = app.add_subcommand("cluster", "Cluster markets on their verdict vectors");
  cluster->add_option("summaries", summaries, "Market summary JSON files")->check(CLI::ExistingFile);
  cluster->add_option("--from", cluster_from, "Analyze output directory to collect summaries from");
  cluster->add_option("-o,--out", cluster_out, "Output directory")->capture_default_str();

  // plot-data
  PlotRequest plot;
  auto* plot_cmd = app.add_subcommand("plot-data", "Emit CSV data series for figures");
  plot_cmd->add_option("-k,--kind", plot.kind, "prices, qq, ccf, acf, kde or boxplot")->required();
  plot_cmd->add_option("-t,--target", plot.target, "Ticker (series kinds), test (kde) or statistic (boxplot)");
  plot_cmd->add_option("-o,--out", plot.output_dir, "Analyze output directory")->capture_default_str();
  plot_cmd->add_option("-m,--manifest", plot.manifest, "Manifest JSON (series kinds)");

  // report
  std::string report_dir = "out";
  auto* report = app.add_subcommand("report", "Render a Markdown report from analyze outputs");
  report->add_option("-o,--out", report_dir, "Analyze output directory")->capture_default_str();

  // simulate
  SimulateRequest sim;
  auto* simulate = app.add_subcommand("simulate", "Write a synthetic GARCH market and manifest");
  simulate->add_option("-o,--out", sim.output_dir, "Output directory")->capture_default_str();
  simulate->add_option("--markets", sim.markets, "Number of markets")->capture_default_str();
  simulate->add_option("--stocks", sim.stocks, "Stocks per market")->capture_default_str();
  simulate->add_option("--length", sim.length, "Prices per stock")->capture_default_str();
  simulate->add_option("--seed", sim.seed, "Random seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  if (*analyze) {
    return guarded(std::cerr, [&] {
      cfg.analysis.overlapping = !non_overlapping;
      cfg.threshold_overrides = parse_thresholds(thresholds);
      if (!config_file.empty()) apply_config_json(cfg, read_json_file(config_file));
      return run_analyze(cfg);
    });
  }
  if (*cluster) {
    return guarded(std::cerr, [&] {
      std::vector<std::filesystem::path> paths(summaries.begin(), summaries.end());
      if (!cluster_from.empty()) {
        for (const auto& p : find_summaries(cluster_from)) paths.push_back(p);
      }
      return run_cluster(paths, cluster_out);
    });
  }
  if (*plot_cmd) return run_plot_data(plot);
  if (*report) return run_report(report_dir);
  if (*simulate) return run_simulate(sim);
  return kExitUsage;
}
