#include "hdgc/benchmark.hpp"

#include <atomic>
#include <fstream>
#include <thread>

#include "hdgc/dataio.hpp"
#include "hdgc/errors.hpp"
#include "hdgc/evalmetrics.hpp"
#include "hdgc/rng.hpp"

namespace hdgc {

void SweepConfig::validate() const {
  if (schemes.empty() || weights.empty() || influencer_counts.empty())
    throw InvalidParameterError("sweep: schemes, weights and influencer_counts must be nonempty");
  if (replicates < 1) throw InvalidParameterError("sweep: replicates must be positive");
  if (threads < 1) throw InvalidParameterError("sweep: threads must be positive");
}

namespace {

struct Cell {
  Scheme scheme;
  double weight;
  int n_influencers;
};

BenchmarkRow run_one(const SweepConfig& cfg, const Cell& cell, int replicate) {
  BenchmarkRow row;
  row.scheme = scheme_name(cell.scheme);
  row.weight = cell.weight;
  row.n_influencers = cell.n_influencers;
  row.replicate = replicate;
  try {
    NetworkConfig net_cfg = cfg.base;
    net_cfg.scheme = cell.scheme;
    net_cfg.influence_weight = cell.weight;
    net_cfg.n_influencers = cell.n_influencers;
    net_cfg.seed = stream_id(cfg.seed, stream_id(static_cast<uint64_t>(cell.scheme) + 101,
                                                 static_cast<uint64_t>(cell.n_influencers)),
                             stream_id(static_cast<uint64_t>(cell.weight * 1e9) + 7,
                                       static_cast<uint64_t>(replicate)));

    auto [series, truth] = simulate(net_cfg);

    PipelineConfig pipe = cfg.pipeline;
    if (pipe.coi.empty())
      pipe.coi.assign(series.labels.begin(), series.labels.begin() + net_cfg.n_coi);
    const AnalysisResult result = analyze(series, pipe);

    row.k_scores = result.resolved.k_scores;
    const ConfusionCounts all = confusion(result.connectivity, truth, EvalScope::CoiPairs);
    const ConfusionCounts designed = confusion(result.connectivity, truth, EvalScope::DesignedOnly);
    row.accuracy = accuracy(all);
    row.mcc = mcc(all);
    row.kappa = cohen_kappa(all);
    row.designed_accuracy = accuracy(designed);
  } catch (const Error& e) {
    row.failed = true;
    row.error = e.what();
  }
  return row;
}

}  // namespace

BenchmarkSummary run_benchmark(const SweepConfig& cfg) {
  cfg.validate();

  std::vector<Cell> cells;
  for (Scheme s : cfg.schemes)
    for (double w : cfg.weights)
      for (int k : cfg.influencer_counts) cells.push_back({s, w, k});

  const int n_tasks = static_cast<int>(cells.size()) * cfg.replicates;
  BenchmarkSummary summary;
  summary.detail.resize(static_cast<size_t>(n_tasks));

  // tasks indexed cell-major; per-task seeds derive from (cell, replicate),
  // so the schedule cannot change the numbers
  std::atomic<int> next{0};
  auto worker = [&] {
    for (;;) {
      const int task = next.fetch_add(1);
      if (task >= n_tasks) return;
      const int cell_idx = task / cfg.replicates;
      const int rep = task % cfg.replicates;
      summary.detail[static_cast<size_t>(task)] =
          run_one(cfg, cells[static_cast<size_t>(cell_idx)], rep);
    }
  };
  if (cfg.threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    const int n_threads = std::min<int>(cfg.threads, n_tasks);
    pool.reserve(static_cast<size_t>(n_threads));
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (size_t c = 0; c < cells.size(); ++c) {
    BenchmarkRow agg;
    agg.scheme = scheme_name(cells[c].scheme);
    agg.weight = cells[c].weight;
    agg.n_influencers = cells[c].n_influencers;
    agg.replicate = -1;
    int ok = 0;
    double k_sum = 0.0;
    for (int r = 0; r < cfg.replicates; ++r) {
      const BenchmarkRow& row = summary.detail[c * static_cast<size_t>(cfg.replicates) +
                                               static_cast<size_t>(r)];
      if (row.failed) {
        ++summary.failures;
        continue;
      }
      ++ok;
      k_sum += row.k_scores;
      agg.accuracy += row.accuracy;
      agg.mcc += row.mcc;
      agg.kappa += row.kappa;
      agg.designed_accuracy += row.designed_accuracy;
    }
    if (ok > 0) {
      agg.accuracy /= ok;
      agg.mcc /= ok;
      agg.kappa /= ok;
      agg.designed_accuracy /= ok;
      agg.k_scores = static_cast<int>(k_sum / ok + 0.5);
    } else {
      agg.failed = true;
      agg.error = "all replicates failed";
    }
    summary.aggregates.push_back(std::move(agg));
  }
  return summary;
}

namespace {

void write_row(std::ofstream& out, const BenchmarkRow& row) {
  out << row.scheme << ',' << format_number(row.weight) << ',' << row.n_influencers << ','
      << row.k_scores << ',' << (row.replicate < 0 ? std::string("mean") : std::to_string(row.replicate))
      << ',';
  if (row.failed) {
    out << ",,,,error: " << row.error << '\n';
    return;
  }
  out << format_number(row.accuracy) << ',' << format_number(row.mcc) << ','
      << format_number(row.kappa) << ',' << format_number(row.designed_accuracy) << ",\n";
}

}  // namespace

void write_benchmark_csv(const std::filesystem::path& path, const BenchmarkSummary& summary) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << "scheme,weight,n_influencers,k_scores,replicate,accuracy,mcc,kappa,designed_accuracy,note\n";
  for (const auto& row : summary.detail) write_row(out, row);
  for (const auto& row : summary.aggregates) write_row(out, row);
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

nlohmann::json sweep_config_to_json(const SweepConfig& cfg) {
  nlohmann::json j;
  std::vector<std::string> schemes;
  for (Scheme s : cfg.schemes) schemes.push_back(scheme_name(s));
  j["schemes"] = schemes;
  j["weights"] = cfg.weights;
  j["influencer_counts"] = cfg.influencer_counts;
  j["replicates"] = cfg.replicates;
  j["network"] = network_config_to_json(cfg.base);
  j["pipeline"] = pipeline_config_to_json(cfg.pipeline);
  j["seed"] = cfg.seed;
  j["threads"] = cfg.threads;
  return j;
}

SweepConfig sweep_config_from_json(const nlohmann::json& j) {
  SweepConfig cfg;
  try {
    if (j.contains("schemes")) {
      cfg.schemes.clear();
      for (const auto& s : j.at("schemes")) cfg.schemes.push_back(scheme_from_name(s.get<std::string>()));
    }
    if (j.contains("weights")) cfg.weights = j.at("weights").get<std::vector<double>>();
    if (j.contains("influencer_counts"))
      cfg.influencer_counts = j.at("influencer_counts").get<std::vector<int>>();
    if (j.contains("replicates")) cfg.replicates = j.at("replicates").get<int>();
    if (j.contains("network")) cfg.base = network_config_from_json(j.at("network"));
    if (j.contains("pipeline")) cfg.pipeline = pipeline_config_from_json(j.at("pipeline"));
    if (j.contains("seed")) cfg.seed = j.at("seed").get<uint64_t>();
    if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("sweep config: ") + e.what());
  }
  return cfg;
}

}  // namespace hdgc
