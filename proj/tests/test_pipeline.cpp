#include <doctest.h>

#include <random>

#include "hdgc/errors.hpp"
#include "hdgc/evalmetrics.hpp"
#include "hdgc/pipeline.hpp"
#include "hdgc/simgen.hpp"

using namespace hdgc;

namespace {

MultiChannelSeries random_input(int T, int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  MultiChannelSeries s;
  s.values.resize(T, n);
  for (int t = 0; t < T; ++t)
    for (int c = 0; c < n; ++c) s.values(t, c) = g(rng);
  s.labels = MultiChannelSeries::default_labels(n);
  return s;
}

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("analyze: six channels of interest yield thirty directed tests") {
  const auto input = random_input(600, 10, 1);
  PipelineConfig cfg;
  cfg.coi = {"ch1", "ch2", "ch3", "ch4", "ch5", "ch6"};
  const auto result = analyze(input, cfg);
  CHECK(result.connectivity.entries.size() == 30);
  CHECK(result.resolved.L_window == 24);  // floor(sqrt(600))
  CHECK(result.resolved.n_freq == 128);
  CHECK(result.explained_variance.size() == 4);
}

TEST_CASE("analyze: single background channel degenerates gracefully") {
  const auto input = random_input(400, 3, 2);
  PipelineConfig cfg;
  cfg.coi = {"ch1", "ch2"};
  cfg.k_scores = 1;
  const auto result = analyze(input, cfg);
  CHECK(result.resolved.k_scores == 1);
  CHECK(result.connectivity.entries.size() == 2);
}

TEST_CASE("analyze: background scores never read the channels of interest") {
  auto input = random_input(500, 8, 3);
  PipelineConfig cfg;
  cfg.coi = {"ch1", "ch2"};
  ResolvedParams res_a;
  const auto base = background_scores(input, cfg, &res_a);

  // poison the COI channels; the background summary must not move
  input.values.col(0).setConstant(1e6);
  input.values.col(1).setLinSpaced(500, -1e5, 1e5);
  const auto poisoned = background_scores(input, cfg);
  CHECK((base.values - poisoned.values).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("analyze: repeated runs are identical") {
  const auto input = random_input(512, 6, 4);
  PipelineConfig cfg;
  cfg.coi = {"ch1", "ch2", "ch3"};
  const auto a = analyze(input, cfg);
  const auto b = analyze(input, cfg);
  REQUIRE(a.connectivity.entries.size() == b.connectivity.entries.size());
  for (size_t i = 0; i < a.connectivity.entries.size(); ++i) {
    CHECK(a.connectivity.entries[i].f_stat == b.connectivity.entries[i].f_stat);
    CHECK(a.connectivity.entries[i].p_value == b.connectivity.entries[i].p_value);
  }
}

TEST_CASE("analyze: missing channel of interest is an input error") {
  const auto input = random_input(300, 4, 5);
  PipelineConfig cfg;
  cfg.coi = {"ch1", "nope"};
  CHECK_THROWS_AS(analyze(input, cfg), StageError);
  try {
    analyze(input, cfg);
  } catch (const StageError& e) {
    CHECK(e.stage() == "input");
  }
}

TEST_CASE("analyze: all channels as COI leaves no background") {
  const auto input = random_input(300, 3, 6);
  PipelineConfig cfg;
  cfg.coi = {"ch1", "ch2", "ch3"};
  CHECK_THROWS_AS(analyze(input, cfg), StageError);
}

TEST_CASE("analyze: constant background channels are dropped with a warning") {
  auto input = random_input(400, 5, 7);
  input.values.col(4).setConstant(2.0);
  PipelineConfig cfg;
  cfg.coi = {"ch1", "ch2"};
  const auto result = analyze(input, cfg);
  CHECK(result.resolved.dropped_background == std::vector<std::string>{"ch5"});
  CHECK(result.explained_variance.size() == 2);
}

TEST_CASE("analyze: static baseline and BH correction run end to end") {
  const auto input = random_input(512, 8, 8);
  PipelineConfig cfg;
  cfg.coi = {"ch1", "ch2", "ch3"};
  cfg.score_method = ScoreMethod::StaticPca;
  cfg.correction = Correction::BenjaminiHochberg;
  const auto result = analyze(input, cfg);
  CHECK(result.connectivity.entries.size() == 6);
  CHECK(result.resolved.boundary_margin == 0);
}

TEST_CASE("analyze: one-sided filters and BIC lag selection run end to end") {
  const auto input = random_input(512, 8, 9);
  PipelineConfig cfg;
  cfg.coi = {"ch1", "ch2"};
  cfg.sidedness = Sidedness::OneSided;
  cfg.lag_criterion = LagCriterion::Bic;
  cfg.max_lag = 4;
  const auto result = analyze(input, cfg);
  CHECK(result.connectivity.entries.size() == 2);
  for (const auto& e : result.connectivity.entries) {
    CHECK(e.p_lags >= 1);
    CHECK(e.p_lags <= 4);
    CHECK(e.p_lags == e.q_lags);
  }
}

TEST_CASE("analyze: recovers a planted edge through linear confounding") {
  NetworkConfig net_cfg;
  net_cfg.n_coi = 4;
  net_cfg.n_external = 24;
  net_cfg.T = 1024;
  net_cfg.scheme = Scheme::Linear;
  net_cfg.n_influencers = 8;
  net_cfg.influence_weight = 0.1;
  net_cfg.seed = 42;
  auto [series, truth] = simulate(net_cfg);

  PipelineConfig cfg;
  cfg.coi = {"X1", "X2", "Y1", "Y2"};
  const auto result = analyze(series, cfg);
  const auto counts = confusion(result.connectivity, truth, EvalScope::DesignedOnly);
  CHECK(counts.tp == 2);  // both designed edges found
}

TEST_CASE("analyze: zero influence is indistinguishable from no influence") {
  // transparency: with omega = 0 the linear scheme must not change the
  // pipeline's detection rate relative to the untouched network
  int detected_zero = 0, detected_none = 0, total = 0;
  for (int rep = 0; rep < 20; ++rep) {
    NetworkConfig net_cfg;
    net_cfg.n_coi = 4;
    net_cfg.n_external = 16;
    net_cfg.T = 512;
    net_cfg.scheme = Scheme::Linear;
    net_cfg.n_influencers = 4;
    net_cfg.influence_weight = 0.0;
    net_cfg.seed = 500 + static_cast<uint64_t>(rep);

    auto [plain, truth_plain] = gen_network(net_cfg);
    auto [zeroed, truth_zero] = simulate(net_cfg);

    PipelineConfig cfg;
    cfg.coi = {"X1", "X2", "Y1", "Y2"};
    const auto counts_none =
        confusion(analyze(plain, cfg).connectivity, truth_plain, EvalScope::DesignedOnly);
    const auto counts_zero =
        confusion(analyze(zeroed, cfg).connectivity, truth_zero, EvalScope::DesignedOnly);
    detected_none += counts_none.tp;
    detected_zero += counts_zero.tp;
    total += static_cast<int>(truth_plain.edges.size());
  }
  const double rate_none = static_cast<double>(detected_none) / total;
  const double rate_zero = static_cast<double>(detected_zero) / total;
  CHECK(std::abs(rate_none - rate_zero) < 0.05);
}

TEST_CASE("pipeline config json round trip") {
  PipelineConfig cfg;
  cfg.coi = {"a", "b"};
  cfg.L_window = 12;
  cfg.k_scores = 3;
  cfg.sidedness = Sidedness::OneSided;
  cfg.score_method = ScoreMethod::StaticPca;
  cfg.lag_criterion = LagCriterion::Bic;
  cfg.correction = Correction::BenjaminiHochberg;
  const auto back = pipeline_config_from_json(pipeline_config_to_json(cfg));
  CHECK(back.coi == cfg.coi);
  CHECK(back.L_window == 12);
  CHECK(back.L_filter == -1);
  CHECK(back.k_scores == 3);
  CHECK(back.sidedness == Sidedness::OneSided);
  CHECK(back.score_method == ScoreMethod::StaticPca);
  CHECK(back.lag_criterion == LagCriterion::Bic);
  CHECK(back.correction == Correction::BenjaminiHochberg);
  CHECK_THROWS_AS(pipeline_config_from_json(nlohmann::json{{"kernel", "welch"}}),
                  InvalidParameterError);
}

}  // TEST_SUITE
