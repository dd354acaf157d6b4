#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "hdgc/dataio.hpp"
#include "hdgc/errors.hpp"

using namespace hdgc;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  const fs::path dir = fs::temp_directory_path() / "hdgc_test_io";
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p);
  out << content;
}

MultiChannelSeries sample_series(int T, int n, unsigned seed) {
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

TEST_SUITE("dataio") {

TEST_CASE("read_series: well-formed file") {
  const auto path = temp_dir() / "ok.csv";
  write_file(path, "a,b,c\n1,2,3\n4,5,6\n7,8,9\n10,11,12\n13,14,15\n");
  const auto s = read_series_csv(path);
  CHECK(s.t_len() == 5);
  CHECK(s.n_channels() == 3);
  CHECK(s.labels[1] == "b");
  CHECK(s.values(4, 2) == 15.0);
}

TEST_CASE("read_series: NaN cell is rejected with its location") {
  const auto path = temp_dir() / "nan.csv";
  write_file(path, "a,b\n1,2\n3,NaN\n5,6\n");
  CHECK_THROWS_AS(read_series_csv(path), FormatError);
  try {
    read_series_csv(path);
  } catch (const FormatError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("row 3") != std::string::npos);
    CHECK(msg.find("'b'") != std::string::npos);
  }
}

TEST_CASE("read_series: ragged rows and duplicate labels") {
  const auto ragged = temp_dir() / "ragged.csv";
  write_file(ragged, "a,b\n1,2\n3\n");
  CHECK_THROWS_AS(read_series_csv(ragged), FormatError);

  const auto dup = temp_dir() / "dup.csv";
  write_file(dup, "a,a\n1,2\n3,4\n");
  CHECK_THROWS_AS(read_series_csv(dup), FormatError);

  const auto bad = temp_dir() / "bad.csv";
  write_file(bad, "a,b\n1,2\nx,4\n");
  CHECK_THROWS_AS(read_series_csv(bad), FormatError);

  CHECK_THROWS_AS(read_series_csv(temp_dir() / "missing.csv"), IoError);
}

TEST_CASE("series round trip preserves values") {
  const auto path = temp_dir() / "rt.csv";
  auto s = sample_series(40, 4, 21);
  s.values(0, 0) = 1.0 / 3.0;
  s.values(1, 1) = 1e-17;
  s.values(2, 2) = -123456.789012345678;
  write_series_csv(path, s);
  const auto back = read_series_csv(path);
  CHECK((back.values - s.values).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(back.labels == s.labels);
}

TEST_CASE("augment: self-difference and balanced laplacian vanish") {
  auto s = sample_series(30, 3, 22);
  AugmentationSpec spec;
  spec.pair_differences.emplace_back("ch1", "ch1");
  const auto out = augment_channels(s, spec);
  CHECK(out.n_channels() == 4);
  CHECK(out.values.col(3).cwiseAbs().maxCoeff() == 0.0);

  AugmentationSpec lap;
  lap.laplacians.push_back({"ch1", {"ch2", "ch3"}});
  MultiChannelSeries equal = s;
  equal.values.col(1) = s.values.col(0);
  equal.values.col(2) = s.values.col(0);
  const auto out2 = augment_channels(equal, lap);
  CHECK(out2.values.col(3).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("augment: products match elementwise computation") {
  auto s = sample_series(16, 2, 23);
  // +/-1 square waves
  for (int t = 0; t < 16; ++t) {
    s.values(t, 0) = t % 2 == 0 ? 1.0 : -1.0;
    s.values(t, 1) = t % 4 < 2 ? 1.0 : -1.0;
  }
  AugmentationSpec spec;
  spec.products.emplace_back("ch1", "ch2");
  const auto out = augment_channels(s, spec);
  for (int t = 0; t < 16; ++t)
    CHECK(out.values(t, 2) == s.values(t, 0) * s.values(t, 1));
}

TEST_CASE("augment: appends exactly the specified channels, originals untouched") {
  const auto s = sample_series(25, 3, 24);
  AugmentationSpec spec;
  spec.pair_differences.emplace_back("ch1", "ch2");
  spec.regional_averages.push_back({"front", {"ch1", "ch2", "ch3"}});
  spec.laplacians.push_back({"ch2", {"ch1", "ch3"}});
  spec.products.emplace_back("ch1", "ch3");
  const auto out = augment_channels(s, spec);
  CHECK(out.n_channels() == 7);
  CHECK((out.values.leftCols(3) - s.values).cwiseAbs().maxCoeff() == 0.0);
  CHECK(out.labels[3] == "ch1-ch2");
  CHECK(out.labels[4] == "front");
  CHECK(out.labels[5] == "ch2.lap");
  CHECK(out.labels[6] == "ch1*ch3");
  const Eigen::VectorXd avg = (s.values.col(0) + s.values.col(1) + s.values.col(2)) / 3.0;
  CHECK((out.values.col(4) - avg).cwiseAbs().maxCoeff() < 1e-15);

  AugmentationSpec unknown;
  unknown.products.emplace_back("ch1", "nope");
  CHECK_THROWS_AS(augment_channels(s, unknown), InvalidInputError);
}

TEST_CASE("augment: spec parses from json") {
  const auto j = nlohmann::json::parse(R"({
    "differences": [["a", "b"]],
    "averages": [{"label": "m", "channels": ["a", "b"]}],
    "laplacians": [{"center": "a", "neighbors": ["b"]}],
    "products": [["a", "b"]]
  })");
  const auto spec = AugmentationSpec::from_json(j);
  CHECK(spec.pair_differences.size() == 1);
  CHECK(spec.regional_averages.size() == 1);
  CHECK(spec.laplacians.size() == 1);
  CHECK(spec.products.size() == 1);
}

TEST_CASE("report files: empty edge set and full adjacency") {
  ConnectivityMatrix conn;
  conn.labels = {"c1", "c2", "c3", "c4", "c5", "c6"};
  conn.alpha = 0.05;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      if (i == j) continue;
      GcTestResult r;
      r.cause = conn.labels[static_cast<size_t>(i)];
      r.effect = conn.labels[static_cast<size_t>(j)];
      r.f_stat = 1.0;
      r.df1 = 2;
      r.df2 = 100;
      r.p_value = 0.5;
      r.reject = false;
      conn.entries.push_back(r);
    }

  const auto dir = temp_dir() / "report";
  write_report(dir, conn, nlohmann::json{{"alpha", 0.05}}, Eigen::VectorXd::Zero(3));

  // DOT file contains the nodes and no edges
  std::ifstream dot(dir / "graph.dot");
  std::string dot_text((std::istreambuf_iterator<char>(dot)), std::istreambuf_iterator<char>());
  CHECK(dot_text.find("\"c1\";") != std::string::npos);
  CHECK(dot_text.find("->") == std::string::npos);

  // adjacency is 6x6 with an empty diagonal
  std::vector<std::string> labels;
  const auto adj = read_adjacency_csv(dir / "adjacency.csv", &labels);
  CHECK(labels == conn.labels);
  CHECK(adj.rows() == 6);
  CHECK(adj.cwiseAbs().maxCoeff() == 0);

  // report.json parses and re-serializes to an equivalent document
  std::ifstream in(dir / "report.json");
  nlohmann::json parsed;
  in >> parsed;
  CHECK(parsed.at("tests").size() == 30);
  const auto again = nlohmann::json::parse(parsed.dump());
  CHECK(again == parsed);
}

TEST_CASE("truth json round trip") {
  GroundTruth truth;
  truth.labels = {"X1", "Y1", "Z1", "Z2"};
  truth.edges = {{0, 1}};
  truth.influencer_map = {{1, 0}, {0}};
  truth.influence_weights = {{0.11, 0.12}, {0.13}};
  const auto path = temp_dir() / "truth.json";
  write_truth_json(path, truth, nlohmann::json{{"seed", 5}});
  const auto back = read_truth_json(path);
  CHECK(back.labels == truth.labels);
  CHECK(back.edges == truth.edges);
  CHECK(back.influencer_map == truth.influencer_map);
  CHECK(back.influence_weights == truth.influence_weights);
}

TEST_CASE("network config json round trip") {
  NetworkConfig cfg;
  cfg.n_coi = 6;
  cfg.n_external = 12;
  cfg.T = 333;
  cfg.scheme = Scheme::Nonlinear;
  cfg.influence_weight = 0.25;
  cfg.seed = 99;
  const auto j = network_config_to_json(cfg);
  const auto back = network_config_from_json(j);
  CHECK(back.n_coi == 6);
  CHECK(back.n_external == 12);
  CHECK(back.T == 333);
  CHECK(back.scheme == Scheme::Nonlinear);
  CHECK(back.influence_weight == 0.25);
  CHECK(back.seed == 99);
  CHECK(back.bands.size() == cfg.bands.size());
}

}  // TEST_SUITE
