#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "hdgc/pipeline.hpp"
#include "hdgc/simgen.hpp"

namespace hdgc {

// Simulation sweep: the cross product of schemes, influence weights and
// influencer counts, each cell replicated with its own derived seed.
struct SweepConfig {
  std::vector<Scheme> schemes{Scheme::Linear};
  std::vector<double> weights{0.1};
  std::vector<int> influencer_counts{30};
  int replicates = 1;
  NetworkConfig base;       // scheme/weight/influencer fields overridden per cell
  PipelineConfig pipeline;  // COI filled from the generated network
  uint64_t seed = 1;
  int threads = 1;

  void validate() const;
};

struct BenchmarkRow {
  std::string scheme;
  double weight = 0.0;
  int n_influencers = 0;
  int k_scores = 0;
  int replicate = 0;  // -1 marks an aggregate row
  double accuracy = 0.0;
  double mcc = 0.0;
  double kappa = 0.0;
  double designed_accuracy = 0.0;  // detection rate over the injected edges
  bool failed = false;
  std::string error;
};

struct BenchmarkSummary {
  std::vector<BenchmarkRow> detail;      // one per (cell, replicate), cell-major
  std::vector<BenchmarkRow> aggregates;  // per-cell means over successful rows
  int failures = 0;
};

BenchmarkSummary run_benchmark(const SweepConfig& cfg);

// Detail rows then aggregate rows, 17-significant-digit numbers; identical
// configuration and seed give byte-identical files.
void write_benchmark_csv(const std::filesystem::path& path, const BenchmarkSummary& summary);

nlohmann::json sweep_config_to_json(const SweepConfig& cfg);
SweepConfig sweep_config_from_json(const nlohmann::json& j);

}  // namespace hdgc
