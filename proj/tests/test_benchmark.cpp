#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "hdgc/benchmark.hpp"
#include "hdgc/errors.hpp"

using namespace hdgc;

namespace {

SweepConfig tiny_sweep() {
  SweepConfig cfg;
  cfg.schemes = {Scheme::Linear};
  cfg.weights = {0.1, 0.7};
  cfg.influencer_counts = {4, 8};
  cfg.replicates = 3;
  cfg.base.n_coi = 4;
  cfg.base.n_external = 12;
  cfg.base.T = 400;
  cfg.seed = 7;
  return cfg;
}

}  // namespace

TEST_SUITE("benchmark") {

TEST_CASE("sweep emits one detail row per cell-replicate plus cell aggregates") {
  const auto summary = run_benchmark(tiny_sweep());
  CHECK(summary.detail.size() == 12);  // 2 weights x 2 counts x 3 replicates
  CHECK(summary.aggregates.size() == 4);
  CHECK(summary.failures == 0);
  for (const auto& row : summary.aggregates) CHECK(row.replicate == -1);
}

TEST_CASE("identical sweep and seed reproduce every number") {
  const auto a = run_benchmark(tiny_sweep());
  const auto b = run_benchmark(tiny_sweep());
  REQUIRE(a.detail.size() == b.detail.size());
  for (size_t i = 0; i < a.detail.size(); ++i) {
    CHECK(a.detail[i].accuracy == b.detail[i].accuracy);
    CHECK(a.detail[i].mcc == b.detail[i].mcc);
    CHECK(a.detail[i].designed_accuracy == b.detail[i].designed_accuracy);
  }
}

TEST_CASE("thread count does not change the results") {
  auto cfg = tiny_sweep();
  cfg.threads = 1;
  const auto serial = run_benchmark(cfg);
  cfg.threads = 4;
  const auto parallel = run_benchmark(cfg);
  REQUIRE(serial.detail.size() == parallel.detail.size());
  for (size_t i = 0; i < serial.detail.size(); ++i)
    CHECK(serial.detail[i].accuracy == parallel.detail[i].accuracy);
}

TEST_CASE("heavier influence weights lose designed edges") {
  SweepConfig cfg;
  cfg.schemes = {Scheme::Nonlinear};
  cfg.weights = {0.1, 0.7};
  cfg.influencer_counts = {12};
  cfg.replicates = 4;
  cfg.base.n_coi = 4;
  cfg.base.n_external = 24;
  cfg.base.T = 800;
  cfg.seed = 1;
  const auto summary = run_benchmark(cfg);
  REQUIRE(summary.aggregates.size() == 2);
  CHECK(summary.aggregates[0].designed_accuracy > summary.aggregates[1].designed_accuracy);
}

TEST_CASE("per-cell failures are recorded and the sweep continues") {
  auto cfg = tiny_sweep();
  // a COI list covering every channel leaves no background, failing analyze
  cfg.pipeline.coi = {"X1", "X2", "Y1", "Y2", "Z1", "Z2", "Z3", "Z4",
                      "Z5", "Z6", "Z7", "Z8", "Z9", "Z10", "Z11", "Z12"};
  const auto summary = run_benchmark(cfg);
  CHECK(summary.failures == 12);
  for (const auto& row : summary.detail) {
    CHECK(row.failed);
    CHECK(!row.error.empty());
  }
  for (const auto& row : summary.aggregates) CHECK(row.failed);
}

TEST_CASE("csv writer round trips byte-identically") {
  const auto dir = std::filesystem::temp_directory_path() / "hdgc_bench_test";
  std::filesystem::create_directories(dir);
  const auto summary = run_benchmark(tiny_sweep());
  write_benchmark_csv(dir / "a.csv", summary);
  write_benchmark_csv(dir / "b.csv", summary);
  std::ifstream fa(dir / "a.csv"), fb(dir / "b.csv");
  const std::string sa((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
  const std::string sb((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
  CHECK(sa == sb);
  CHECK(sa.find("scheme,weight,n_influencers,k_scores,replicate,accuracy,mcc,kappa,"
                "designed_accuracy,note") == 0);
}

TEST_CASE("sweep config json round trip") {
  auto cfg = tiny_sweep();
  cfg.schemes = {Scheme::Linear, Scheme::Causative};
  const auto back = sweep_config_from_json(sweep_config_to_json(cfg));
  CHECK(back.schemes == cfg.schemes);
  CHECK(back.weights == cfg.weights);
  CHECK(back.influencer_counts == cfg.influencer_counts);
  CHECK(back.replicates == cfg.replicates);
  CHECK(back.seed == cfg.seed);
  CHECK(back.base.n_coi == cfg.base.n_coi);
  CHECK_THROWS_AS(sweep_config_from_json(nlohmann::json{{"replicates", "many"}}), FormatError);
}

}  // TEST_SUITE
