#include <doctest.h>

#include <cmath>
#include <random>

#include "hdgc/errors.hpp"
#include "hdgc/evalmetrics.hpp"

using namespace hdgc;

namespace {

// connectivity with reject flags set from an adjacency matrix
ConnectivityMatrix from_adjacency(const std::vector<std::string>& labels,
                                  const Eigen::MatrixXi& adj) {
  ConnectivityMatrix conn;
  conn.labels = labels;
  const int m = static_cast<int>(labels.size());
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      GcTestResult r;
      r.cause = labels[static_cast<size_t>(i)];
      r.effect = labels[static_cast<size_t>(j)];
      r.reject = adj(i, j) != 0;
      r.p_value = r.reject ? 0.001 : 0.5;
      conn.entries.push_back(r);
    }
  return conn;
}

GroundTruth make_truth(const std::vector<std::string>& labels,
                       const std::vector<std::pair<int, int>>& edges) {
  GroundTruth t;
  t.labels = labels;
  t.edges = edges;
  return t;
}

}  // namespace

TEST_SUITE("evalmetrics") {

TEST_CASE("confusion: perfect prediction") {
  const std::vector<std::string> labels{"a", "b", "c"};
  Eigen::MatrixXi adj = Eigen::MatrixXi::Zero(3, 3);
  adj(0, 1) = 1;
  const auto truth = make_truth(labels, {{0, 1}});
  const auto counts = confusion(from_adjacency(labels, adj), truth);
  CHECK(counts.tp == 1);
  CHECK(counts.fp == 0);
  CHECK(counts.fn == 0);
  CHECK(counts.tn == 5);
  CHECK(counts.total() == 6);
}

TEST_CASE("confusion: all-negative prediction counts every edge as missed") {
  const std::vector<std::string> labels{"a", "b", "c", "d"};
  const Eigen::MatrixXi adj = Eigen::MatrixXi::Zero(4, 4);
  const auto truth = make_truth(labels, {{0, 1}, {2, 3}});
  const auto counts = confusion(from_adjacency(labels, adj), truth);
  CHECK(counts.fn == 2);
  CHECK(counts.tp == 0);
  CHECK(counts.fp == 0);
}

TEST_CASE("confusion: matches hand enumeration on a random instance") {
  std::mt19937_64 rng(31);
  const std::vector<std::string> labels{"a", "b", "c", "d", "e", "f"};
  Eigen::MatrixXi adj(6, 6);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) adj(i, j) = i != j && (rng() % 3 == 0);
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      if (i != j && rng() % 4 == 0) edges.emplace_back(i, j);
  const auto truth = make_truth(labels, edges);
  const auto counts = confusion(from_adjacency(labels, adj), truth);

  long tp = 0, fp = 0, fn = 0, tn = 0;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      if (i == j) continue;
      const bool det = adj(i, j) != 0;
      const bool act =
          std::find(edges.begin(), edges.end(), std::make_pair(i, j)) != edges.end();
      if (det && act) ++tp;
      else if (det && !act) ++fp;
      else if (!det && act) ++fn;
      else ++tn;
    }
  CHECK(counts.tp == tp);
  CHECK(counts.fp == fp);
  CHECK(counts.fn == fn);
  CHECK(counts.tn == tn);
}

TEST_CASE("confusion: designed scope scores only the injected edges") {
  const std::vector<std::string> labels{"a", "b", "c", "d"};
  Eigen::MatrixXi adj = Eigen::MatrixXi::Zero(4, 4);
  adj(0, 1) = 1;
  adj(1, 0) = 1;  // reverse direction must not count in designed scope
  const auto truth = make_truth(labels, {{0, 1}, {2, 3}});
  const auto counts = confusion(from_adjacency(labels, adj), truth, EvalScope::DesignedOnly);
  CHECK(counts.tp == 1);
  CHECK(counts.fn == 1);
  CHECK(counts.fp == 0);
  CHECK(counts.tn == 0);
}

TEST_CASE("confusion: unknown label is rejected") {
  const std::vector<std::string> labels{"a", "q"};
  const Eigen::MatrixXi adj = Eigen::MatrixXi::Zero(2, 2);
  const auto truth = make_truth({"a", "b"}, {});
  CHECK_THROWS_AS(confusion(from_adjacency(labels, adj), truth), InvalidInputError);
}

TEST_CASE("metrics: perfect and inverted predictions") {
  ConfusionCounts perfect{5, 0, 0, 5};
  CHECK(accuracy(perfect) == doctest::Approx(1.0));
  CHECK(mcc(perfect) == doctest::Approx(1.0));
  CHECK(cohen_kappa(perfect) == doctest::Approx(1.0));

  ConfusionCounts inverted{0, 5, 5, 0};
  CHECK(accuracy(inverted) == doctest::Approx(0.0));
  CHECK(mcc(inverted) == doctest::Approx(-1.0));
}

TEST_CASE("metrics: worked example") {
  const ConfusionCounts c{40, 10, 20, 130};
  CHECK(accuracy(c) == doctest::Approx(0.85).epsilon(1e-12));
  const double expected_mcc =
      (40.0 * 130.0 - 10.0 * 20.0) / std::sqrt(50.0 * 60.0 * 140.0 * 150.0);
  CHECK(mcc(c) == doctest::Approx(expected_mcc).epsilon(1e-12));
  const double po = 170.0 / 200.0;
  const double pe = (50.0 / 200.0) * (60.0 / 200.0) + (150.0 / 200.0) * (140.0 / 200.0);
  CHECK(cohen_kappa(c) == doctest::Approx((po - pe) / (1.0 - pe)).epsilon(1e-12));
}

TEST_CASE("metrics: zero-denominator conventions") {
  // all cells in one class: MCC denominator vanishes
  CHECK(mcc(ConfusionCounts{0, 0, 0, 10}) == 0.0);
  CHECK(mcc(ConfusionCounts{10, 0, 0, 0}) == 0.0);
  // complete chance structure: kappa 1 iff observed agreement is total
  CHECK(cohen_kappa(ConfusionCounts{0, 0, 0, 10}) == 1.0);
  CHECK(cohen_kappa(ConfusionCounts{0, 10, 0, 0}) == 0.0);
  CHECK_THROWS_AS(accuracy(ConfusionCounts{}), InvalidInputError);
}

TEST_CASE("metrics: ranges and permutation invariance on random counts") {
  std::mt19937_64 rng(32);
  for (int rep = 0; rep < 50; ++rep) {
    ConfusionCounts c;
    c.tp = static_cast<long>(rng() % 20);
    c.fp = static_cast<long>(rng() % 20);
    c.fn = static_cast<long>(rng() % 20);
    c.tn = static_cast<long>(rng() % 20);
    if (c.total() == 0) c.tn = 1;
    CHECK(accuracy(c) >= 0.0);
    CHECK(accuracy(c) <= 1.0);
    CHECK(mcc(c) >= -1.0 - 1e-12);
    CHECK(mcc(c) <= 1.0 + 1e-12);
    CHECK(cohen_kappa(c) <= 1.0 + 1e-12);
  }

  // permuting channel labels permutes pairs but not the counts
  std::vector<std::string> labels{"a", "b", "c"};
  Eigen::MatrixXi adj(3, 3);
  adj << 0, 1, 0, 0, 0, 1, 1, 0, 0;
  const auto truth = make_truth(labels, {{0, 1}, {1, 2}});
  const auto base = confusion(from_adjacency(labels, adj), truth);

  const std::vector<int> perm{2, 0, 1};
  std::vector<std::string> plabels{"c", "a", "b"};
  Eigen::MatrixXi padj(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) padj(i, j) = adj(perm[static_cast<size_t>(i)], perm[static_cast<size_t>(j)]);
  const auto permuted = confusion(from_adjacency(plabels, padj), truth);
  CHECK(base.tp == permuted.tp);
  CHECK(base.fp == permuted.fp);
  CHECK(base.fn == permuted.fn);
  CHECK(base.tn == permuted.tn);
}

TEST_CASE("consensus: single input acts as identity") {
  Eigen::MatrixXi adj(2, 2);
  adj << 0, 1, 0, 0;
  const auto out = consensus_graph({adj}, 0.7);
  CHECK(out == adj);
}

TEST_CASE("consensus: 70% boundary at 35 inputs") {
  Eigen::MatrixXi present(2, 2), absent(2, 2);
  present << 0, 1, 0, 0;
  absent.setZero();

  std::vector<Eigen::MatrixXi> inputs24(24, present);
  inputs24.insert(inputs24.end(), 11, absent);
  CHECK(consensus_graph(inputs24, 0.7)(0, 1) == 0);  // 24/35 = 0.686

  std::vector<Eigen::MatrixXi> inputs25(25, present);
  inputs25.insert(inputs25.end(), 10, absent);
  CHECK(consensus_graph(inputs25, 0.7)(0, 1) == 1);  // 25/35 = 0.714
}

TEST_CASE("consensus: low threshold approaches union, threshold 1 is intersection") {
  Eigen::MatrixXi a(2, 2), b(2, 2);
  a << 0, 1, 0, 0;
  b << 0, 1, 1, 0;
  const auto uni = consensus_graph({a, b}, 1e-9);
  CHECK(uni(0, 1) == 1);
  CHECK(uni(1, 0) == 1);
  const auto inter = consensus_graph({a, b}, 1.0);
  CHECK(inter(0, 1) == 1);
  CHECK(inter(1, 0) == 0);
}

TEST_CASE("consensus: input validation") {
  CHECK_THROWS_AS(consensus_graph({}, 0.7), InvalidInputError);
  Eigen::MatrixXi a = Eigen::MatrixXi::Zero(2, 2);
  Eigen::MatrixXi b = Eigen::MatrixXi::Zero(3, 3);
  CHECK_THROWS_AS(consensus_graph({a, b}, 0.7), InvalidInputError);
  CHECK_THROWS_AS(consensus_graph({a}, 0.0), InvalidParameterError);
}

}  // TEST_SUITE
