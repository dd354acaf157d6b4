#include "hdgc/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <set>

#include "hdgc/errors.hpp"

namespace hdgc {

namespace {

template <class Fn>
auto run_stage(const std::string& stage, Fn&& fn) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const IoError& e) {
    throw StageError(stage, e, true);
  } catch (const Error& e) {
    throw StageError(stage, e, false);
  }
}

}  // namespace

void PipelineConfig::validate() const {
  if (coi.size() < 2) throw InvalidParameterError("config: need at least two channels of interest");
  std::set<std::string> uniq(coi.begin(), coi.end());
  if (uniq.size() != coi.size())
    throw InvalidParameterError("config: channels of interest must be distinct");
  if (!(variance_threshold > 0.0) || variance_threshold > 1.0)
    throw InvalidParameterError("config: variance threshold must lie in (0, 1]");
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw InvalidParameterError("config: alpha must lie in (0, 1)");
  if (k_scores < 0) throw InvalidParameterError("config: k_scores must be nonnegative");
  if (p_lags < 1 || q_lags < 1)
    throw InvalidParameterError("config: lag orders must be at least 1");
  if (max_lag < 1) throw InvalidParameterError("config: max_lag must be at least 1");
}

namespace {

MultiChannelSeries split_background(const MultiChannelSeries& input, const PipelineConfig& cfg,
                                    std::vector<std::string>* dropped) {
  MultiChannelSeries bg = cfg.background.empty() ? drop_channels(input, cfg.coi)
                                                 : select_channels(input, cfg.background);
  if (bg.n_channels() < 1)
    throw InvalidParameterError("no background channels remain after removing the COI");

  // constant channels contribute nothing and break normalization
  std::vector<std::string> constant;
  for (Eigen::Index c = 0; c < bg.n_channels(); ++c) {
    const Eigen::VectorXd col = bg.values.col(c);
    if ((col.array() - col.mean()).abs().maxCoeff() == 0.0)
      constant.push_back(bg.labels[static_cast<size_t>(c)]);
  }
  if (!constant.empty()) {
    std::cerr << "warning: dropping " << constant.size()
              << " constant background channel(s) before spectral estimation\n";
    bg = drop_channels(bg, constant);
    if (bg.n_channels() < 1)
      throw DegenerateInputError("all background channels are constant");
    if (dropped) *dropped = constant;
  }
  return bg;
}

}  // namespace

ScoreMatrix background_scores(const MultiChannelSeries& input, const PipelineConfig& cfg,
                              ResolvedParams* resolved, Eigen::VectorXd* all_variance) {
  const Eigen::Index T = input.t_len();
  ResolvedParams res;
  MultiChannelSeries bg = split_background(input, cfg, &res.dropped_background);
  const int n = static_cast<int>(bg.n_channels());

  res.L_window = cfg.L_window >= 0 ? cfg.L_window
                                   : static_cast<int>(std::floor(std::sqrt(static_cast<double>(T))));
  res.L_filter = cfg.L_filter >= 0 ? cfg.L_filter : res.L_window;
  res.n_freq = cfg.n_freq >= 1 ? cfg.n_freq : std::max(128, 4 * res.L_window + 1);

  ScoreMatrix scores;
  Eigen::VectorXd v_all;
  if (cfg.score_method == ScoreMethod::Sdpca) {
    const LagCovarianceSequence lagcov = autocov(bg, res.L_window);
    const SpectralDensity sd =
        spectral_density(lagcov, cfg.kernel, FrequencyGrid::regular(res.n_freq));
    const DynamicEigs eigs = dynamic_eigs(sd, n);
    v_all = explained_variance(eigs);
    const int k = cfg.k_scores > 0 ? std::min(cfg.k_scores, n)
                                   : choose_k(v_all, cfg.variance_threshold);
    res.k_scores = k;
    const DynamicFilterSet filters =
        filters_from_eigs(slice_eigs(eigs, k), res.L_filter, cfg.sidedness);
    scores = dpc_scores(bg, filters);
    res.boundary_margin = scores.boundary_margin;
  } else {
    ScoreMatrix full = static_pca_scores(bg, n);
    v_all = full.explained_variance;
    const int k = cfg.k_scores > 0 ? std::min(cfg.k_scores, n)
                                   : choose_k(v_all, cfg.variance_threshold);
    res.k_scores = k;
    scores.values = full.values.leftCols(k);
    scores.explained_variance = full.explained_variance.head(k);
    scores.boundary_margin = 0;
  }

  if (resolved) *resolved = res;
  if (all_variance) *all_variance = v_all;
  return scores;
}

AnalysisResult analyze(const MultiChannelSeries& input, const PipelineConfig& cfg) {
  run_stage("input", [&] {
    input.validate();
    cfg.validate();
    for (const auto& l : cfg.coi)
      if (input.index_of(l) < 0)
        throw InvalidInputError("channel of interest '" + l + "' not present in the input");
    return 0;
  });

  AnalysisResult result;
  MultiChannelSeries coi = run_stage("input", [&] { return select_channels(input, cfg.coi); });

  result.scores = run_stage("background-scores", [&] {
    return background_scores(input, cfg, &result.resolved, &result.explained_variance);
  });

  result.isolated = run_stage("residualize", [&] {
    RegressionSpec spec;
    spec.include_intercept = true;
    spec.include_interactions = cfg.interactions;
    return residualize_all(coi, result.scores, spec);
  });

  result.connectivity = run_stage("granger", [&] {
    return pairwise_gc(result.isolated, cfg.p_lags, cfg.q_lags, cfg.alpha, cfg.correction,
                       cfg.lag_criterion, cfg.max_lag);
  });

  return result;
}

nlohmann::json pipeline_config_to_json(const PipelineConfig& cfg) {
  nlohmann::json j;
  j["coi"] = cfg.coi;
  if (!cfg.background.empty()) j["background"] = cfg.background;
  j["L_window"] = cfg.L_window >= 0 ? nlohmann::json(cfg.L_window) : nlohmann::json("auto");
  j["L_filter"] = cfg.L_filter >= 0 ? nlohmann::json(cfg.L_filter) : nlohmann::json("auto");
  j["n_freq"] = cfg.n_freq >= 1 ? nlohmann::json(cfg.n_freq) : nlohmann::json("auto");
  j["kernel"] = kernel_name(cfg.kernel);
  j["k_scores"] = cfg.k_scores > 0 ? nlohmann::json(cfg.k_scores) : nlohmann::json("auto");
  j["variance_threshold"] = cfg.variance_threshold;
  j["sidedness"] = cfg.sidedness == Sidedness::TwoSided ? "two_sided" : "one_sided";
  j["interactions"] = cfg.interactions;
  j["score_method"] = cfg.score_method == ScoreMethod::Sdpca ? "sdpca" : "static_pca";
  j["p_lags"] = cfg.p_lags;
  j["q_lags"] = cfg.q_lags;
  switch (cfg.lag_criterion) {
    case LagCriterion::Fixed: j["lag_criterion"] = "fixed"; break;
    case LagCriterion::Bic: j["lag_criterion"] = "bic"; break;
    case LagCriterion::Aic: j["lag_criterion"] = "aic"; break;
  }
  j["max_lag"] = cfg.max_lag;
  j["alpha"] = cfg.alpha;
  j["correction"] = cfg.correction == Correction::None ? "none" : "bh";
  j["seed"] = cfg.seed;
  return j;
}

namespace {

int auto_or_int(const nlohmann::json& v, const std::string& field) {
  if (v.is_string()) {
    if (v.get<std::string>() == "auto") return -1;
    throw FormatError("pipeline config: field '" + field + "' must be a count or \"auto\"");
  }
  return v.get<int>();
}

}  // namespace

PipelineConfig pipeline_config_from_json(const nlohmann::json& j) {
  PipelineConfig cfg;
  try {
    if (j.contains("coi")) cfg.coi = j.at("coi").get<std::vector<std::string>>();
    if (j.contains("background"))
      cfg.background = j.at("background").get<std::vector<std::string>>();
    if (j.contains("L_window")) cfg.L_window = auto_or_int(j.at("L_window"), "L_window");
    if (j.contains("L_filter")) cfg.L_filter = auto_or_int(j.at("L_filter"), "L_filter");
    if (j.contains("n_freq")) cfg.n_freq = auto_or_int(j.at("n_freq"), "n_freq");
    if (j.contains("kernel")) cfg.kernel = kernel_from_name(j.at("kernel").get<std::string>());
    if (j.contains("k_scores")) {
      const auto& v = j.at("k_scores");
      cfg.k_scores = v.is_string() && v.get<std::string>() == "auto" ? 0 : v.get<int>();
    }
    if (j.contains("variance_threshold"))
      cfg.variance_threshold = j.at("variance_threshold").get<double>();
    if (j.contains("sidedness")) {
      const std::string s = j.at("sidedness").get<std::string>();
      if (s == "two_sided") cfg.sidedness = Sidedness::TwoSided;
      else if (s == "one_sided") cfg.sidedness = Sidedness::OneSided;
      else throw FormatError("pipeline config: unknown sidedness '" + s + "'");
    }
    if (j.contains("interactions")) cfg.interactions = j.at("interactions").get<bool>();
    if (j.contains("score_method")) {
      const std::string s = j.at("score_method").get<std::string>();
      if (s == "sdpca") cfg.score_method = ScoreMethod::Sdpca;
      else if (s == "static_pca") cfg.score_method = ScoreMethod::StaticPca;
      else throw FormatError("pipeline config: unknown score method '" + s + "'");
    }
    if (j.contains("p_lags")) cfg.p_lags = j.at("p_lags").get<int>();
    if (j.contains("q_lags")) cfg.q_lags = j.at("q_lags").get<int>();
    if (j.contains("lag_criterion")) {
      const std::string s = j.at("lag_criterion").get<std::string>();
      if (s == "fixed") cfg.lag_criterion = LagCriterion::Fixed;
      else if (s == "bic") cfg.lag_criterion = LagCriterion::Bic;
      else if (s == "aic") cfg.lag_criterion = LagCriterion::Aic;
      else throw FormatError("pipeline config: unknown lag criterion '" + s + "'");
    }
    if (j.contains("max_lag")) cfg.max_lag = j.at("max_lag").get<int>();
    if (j.contains("alpha")) cfg.alpha = j.at("alpha").get<double>();
    if (j.contains("correction")) {
      const std::string s = j.at("correction").get<std::string>();
      if (s == "none") cfg.correction = Correction::None;
      else if (s == "bh") cfg.correction = Correction::BenjaminiHochberg;
      else throw FormatError("pipeline config: unknown correction '" + s + "'");
    }
    if (j.contains("seed")) cfg.seed = j.at("seed").get<uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("pipeline config: ") + e.what());
  }
  return cfg;
}

nlohmann::json resolved_params_to_json(const ResolvedParams& r) {
  nlohmann::json j;
  j["L_window"] = r.L_window;
  j["L_filter"] = r.L_filter;
  j["n_freq"] = r.n_freq;
  j["k_scores"] = r.k_scores;
  j["boundary_margin"] = r.boundary_margin;
  j["dropped_background"] = r.dropped_background;
  return j;
}

}  // namespace hdgc
