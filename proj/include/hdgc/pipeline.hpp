#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "hdgc/confound.hpp"
#include "hdgc/granger.hpp"
#include "hdgc/sdpca.hpp"
#include "hdgc/series.hpp"

namespace hdgc {

enum class ScoreMethod { Sdpca, StaticPca };

// Full configuration of the analyze pipeline. -1 means "auto": the resolved
// values (L_window = floor(sqrt(T)), L_filter = L_window,
// n_freq = max(128, 4 L + 1)) are echoed into the report.
struct PipelineConfig {
  std::vector<std::string> coi;         // channels of interest, >= 2
  std::vector<std::string> background;  // empty = every non-COI channel
  int L_window = -1;
  int L_filter = -1;
  int n_freq = -1;
  Kernel kernel = Kernel::Bartlett;
  int k_scores = 0;  // 0 = pick by cumulative explained variance
  double variance_threshold = 0.75;
  Sidedness sidedness = Sidedness::TwoSided;
  bool interactions = false;
  ScoreMethod score_method = ScoreMethod::Sdpca;
  int p_lags = 2;
  int q_lags = 2;
  LagCriterion lag_criterion = LagCriterion::Fixed;
  int max_lag = 8;
  double alpha = 0.05;
  Correction correction = Correction::None;
  uint64_t seed = 0;  // echoed into the report; the pipeline itself is deterministic

  void validate() const;
};

struct ResolvedParams {
  int L_window = 0;
  int L_filter = 0;
  int n_freq = 0;
  int k_scores = 0;
  int boundary_margin = 0;
  std::vector<std::string> dropped_background;  // zero-variance channels removed
};

struct AnalysisResult {
  ConnectivityMatrix connectivity;
  Eigen::VectorXd explained_variance;  // all background components
  ResolvedParams resolved;
  ScoreMatrix scores;
  MultiChannelSeries isolated;  // residualized channels of interest
};

// Procedure: split the input into channels of interest and background,
// summarize the background with dynamic (or static) PC scores, partial the
// scores out of the COI channels, and run pairwise Granger tests on the
// residuals. Errors carry the failing stage's name.
AnalysisResult analyze(const MultiChannelSeries& input, const PipelineConfig& config);

// Background scores only (steps 1-2); exposed for tests of the
// background-only contract.
ScoreMatrix background_scores(const MultiChannelSeries& input, const PipelineConfig& config,
                              ResolvedParams* resolved = nullptr,
                              Eigen::VectorXd* all_variance = nullptr);

nlohmann::json pipeline_config_to_json(const PipelineConfig& cfg);
PipelineConfig pipeline_config_from_json(const nlohmann::json& j);
nlohmann::json resolved_params_to_json(const ResolvedParams& r);

}  // namespace hdgc
