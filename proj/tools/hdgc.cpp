// Command-line front end: simulate, analyze, benchmark, evaluate, augment.
// Exit codes: 0 success, 1 usage/config, 2 data or contract violation, 3 I/O.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "hdgc/benchmark.hpp"
#include "hdgc/dataio.hpp"
#include "hdgc/errors.hpp"
#include "hdgc/evalmetrics.hpp"
#include "hdgc/pipeline.hpp"
#include "hdgc/simgen.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitIo = 3;

json load_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw hdgc::IoError("cannot open '" + path.string() + "' for reading");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw hdgc::FormatError(path.string() + ": " + e.what());
  }
  return j;
}

std::vector<std::string> split_labels(const std::string& csv) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : csv) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

struct CommonFlags {
  std::optional<uint64_t> seed;
  std::optional<int> threads;
  std::string output_dir = ".";
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--seed", flags.seed, "Override the configured RNG seed");
  cmd->add_option("--threads", flags.threads, "Worker threads where supported");
  cmd->add_option("--output-dir", flags.output_dir, "Directory for output files");
}

int cmd_simulate(const std::string& config_path, const CommonFlags& flags) {
  hdgc::NetworkConfig cfg =
      config_path.empty() ? hdgc::NetworkConfig{} : hdgc::network_config_from_json(load_json(config_path));
  if (flags.seed) cfg.seed = *flags.seed;
  cfg.validate();

  auto [series, truth] = hdgc::simulate(cfg);
  const fs::path dir(flags.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw hdgc::IoError("cannot create directory '" + dir.string() + "'");
  hdgc::write_series_csv(dir / "series.csv", series);
  hdgc::write_truth_json(dir / "truth.json", truth, hdgc::network_config_to_json(cfg));
  std::cout << "wrote " << (dir / "series.csv").string() << " (" << series.t_len() << " x "
            << series.n_channels() << ") and " << (dir / "truth.json").string() << "\n";
  return 0;
}

int cmd_analyze(const std::string& input_path, const std::string& config_path,
                const std::string& coi_csv, const CommonFlags& flags) {
  hdgc::PipelineConfig cfg =
      config_path.empty() ? hdgc::PipelineConfig{} : hdgc::pipeline_config_from_json(load_json(config_path));
  if (!coi_csv.empty()) cfg.coi = split_labels(coi_csv);
  if (flags.seed) cfg.seed = *flags.seed;

  const hdgc::MultiChannelSeries series = hdgc::read_series_csv(input_path);
  const hdgc::AnalysisResult result = hdgc::analyze(series, cfg);

  json metadata;
  metadata["input"] = input_path;
  metadata["pipeline"] = hdgc::pipeline_config_to_json(cfg);
  metadata["resolved"] = hdgc::resolved_params_to_json(result.resolved);
  hdgc::write_report(fs::path(flags.output_dir), result.connectivity, metadata,
                     result.explained_variance);

  int significant = 0;
  for (const auto& e : result.connectivity.entries) significant += e.reject;
  std::cout << "analyzed " << cfg.coi.size() << " channels of interest against "
            << result.explained_variance.size() << " background components (k="
            << result.resolved.k_scores << "); " << significant << " of "
            << result.connectivity.entries.size() << " directed pairs significant\n";
  std::cout << "report written to " << (fs::path(flags.output_dir) / "report.json").string()
            << "\n";
  return 0;
}

int cmd_benchmark(const std::string& config_path, const std::string& output_path,
                  const CommonFlags& flags) {
  hdgc::SweepConfig cfg = hdgc::sweep_config_from_json(load_json(config_path));
  if (flags.seed) cfg.seed = *flags.seed;
  if (flags.threads) cfg.threads = *flags.threads;

  const hdgc::BenchmarkSummary summary = hdgc::run_benchmark(cfg);
  const fs::path out = output_path.empty() ? fs::path(flags.output_dir) / "metrics.csv"
                                           : fs::path(output_path);
  hdgc::write_benchmark_csv(out, summary);
  std::cout << "wrote " << summary.detail.size() << " detail rows and "
            << summary.aggregates.size() << " aggregate rows to " << out.string() << "\n";
  if (summary.failures > 0) {
    std::cerr << "error: " << summary.failures << " replicate(s) failed\n";
    return kExitData;
  }
  return 0;
}

int cmd_evaluate(const std::string& predicted_path, const std::string& truth_path,
                 const std::string& scope_name, const std::vector<std::string>& consensus_inputs,
                 double consensus_threshold, const std::string& output_path) {
  if (!consensus_inputs.empty()) {
    std::vector<Eigen::MatrixXi> mats;
    std::vector<std::string> labels;
    for (const auto& p : consensus_inputs) {
      std::vector<std::string> l;
      mats.push_back(hdgc::read_adjacency_csv(p, &l));
      if (labels.empty()) labels = l;
      else if (labels != l)
        throw hdgc::InvalidInputError("consensus: adjacency label sets differ");
    }
    const Eigen::MatrixXi graph = hdgc::consensus_graph(mats, consensus_threshold);
    if (output_path.empty()) throw hdgc::InvalidParameterError("consensus needs --output");
    hdgc::write_adjacency_csv(output_path, labels, graph);
    std::cout << "consensus over " << mats.size() << " graphs written to " << output_path << "\n";
    return 0;
  }

  if (predicted_path.empty() || truth_path.empty())
    throw hdgc::InvalidParameterError("evaluate needs --predicted and --truth (or --consensus)");

  std::vector<std::string> labels;
  const Eigen::MatrixXi adj = hdgc::read_adjacency_csv(predicted_path, &labels);
  const hdgc::GroundTruth truth = hdgc::read_truth_json(truth_path);

  hdgc::ConnectivityMatrix conn;
  conn.labels = labels;
  for (int i = 0; i < adj.rows(); ++i)
    for (int j = 0; j < adj.cols(); ++j) {
      if (i == j) continue;
      hdgc::GcTestResult r;
      r.cause = labels[static_cast<size_t>(i)];
      r.effect = labels[static_cast<size_t>(j)];
      r.reject = adj(i, j) != 0;
      conn.entries.push_back(r);
    }

  const hdgc::EvalScope scope = scope_name == "designed" ? hdgc::EvalScope::DesignedOnly
                                                         : hdgc::EvalScope::CoiPairs;
  const hdgc::ConfusionCounts counts = hdgc::confusion(conn, truth, scope);
  std::cout << "tp,fp,fn,tn,accuracy,mcc,kappa\n"
            << counts.tp << ',' << counts.fp << ',' << counts.fn << ',' << counts.tn << ','
            << hdgc::format_number(hdgc::accuracy(counts)) << ','
            << hdgc::format_number(hdgc::mcc(counts)) << ','
            << hdgc::format_number(hdgc::cohen_kappa(counts)) << "\n";
  return 0;
}

int cmd_augment(const std::string& input_path, const std::string& spec_path,
                const std::string& output_path) {
  const hdgc::MultiChannelSeries series = hdgc::read_series_csv(input_path);
  const hdgc::AugmentationSpec spec = hdgc::AugmentationSpec::from_json(load_json(spec_path));
  const hdgc::MultiChannelSeries out = hdgc::augment_channels(series, spec);
  hdgc::write_series_csv(output_path, out);
  std::cout << "augmented " << series.n_channels() << " -> " << out.n_channels()
            << " channels; wrote " << output_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Granger-causal connectivity between selected channel pairs in "
               "high-dimensional networks of time series"};
  app.require_subcommand(1);

  CommonFlags flags;

  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic network with ground truth");
  std::string sim_config;
  simulate->add_option("--config", sim_config, "Network configuration JSON");
  add_common(simulate, flags);

  auto* analyze = app.add_subcommand("analyze", "Run the connectivity pipeline on a recording");
  std::string in_path, pipe_config, coi_csv;
  analyze->add_option("--input", in_path, "Input series CSV")->required();
  analyze->add_option("--config", pipe_config, "Pipeline configuration JSON");
  analyze->add_option("--coi", coi_csv, "Comma-separated channels of interest (overrides config)");
  add_common(analyze, flags);

  auto* benchmark = app.add_subcommand("benchmark", "Run a simulate/analyze/evaluate sweep");
  std::string sweep_config, bench_out;
  benchmark->add_option("--config", sweep_config, "Sweep configuration JSON")->required();
  benchmark->add_option("--output", bench_out, "Metrics CSV path");
  add_common(benchmark, flags);

  auto* evaluate = app.add_subcommand("evaluate", "Score predictions against ground truth");
  std::string pred_path, truth_path, scope = "coi", eval_out;
  std::vector<std::string> consensus_inputs;
  double consensus_threshold = 0.7;
  evaluate->add_option("--predicted", pred_path, "Adjacency CSV from analyze");
  evaluate->add_option("--truth", truth_path, "Ground-truth JSON from simulate");
  evaluate->add_option("--scope", scope, "Pair scope: coi or designed")
      ->check(CLI::IsMember({"coi", "designed"}));
  evaluate->add_option("--consensus", consensus_inputs, "Adjacency CSVs to merge by consensus");
  evaluate->add_option("--threshold", consensus_threshold, "Consensus frequency threshold");
  evaluate->add_option("--output", eval_out, "Output path for the consensus graph");

  auto* augment = app.add_subcommand("augment", "Append derived channels to a recording");
  std::string aug_in, aug_spec, aug_out;
  augment->add_option("--input", aug_in, "Input series CSV")->required();
  augment->add_option("--spec", aug_spec, "Augmentation spec JSON")->required();
  augment->add_option("--output", aug_out, "Output series CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim_config, flags);
    if (analyze->parsed()) return cmd_analyze(in_path, pipe_config, coi_csv, flags);
    if (benchmark->parsed()) return cmd_benchmark(sweep_config, bench_out, flags);
    if (evaluate->parsed())
      return cmd_evaluate(pred_path, truth_path, scope, consensus_inputs, consensus_threshold,
                          eval_out);
    if (augment->parsed()) return cmd_augment(aug_in, aug_spec, aug_out);
  } catch (const hdgc::StageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.is_io() ? kExitIo : kExitData;
  } catch (const hdgc::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const hdgc::FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const hdgc::InvalidParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const hdgc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
