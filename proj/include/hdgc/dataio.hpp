#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "hdgc/granger.hpp"
#include "hdgc/series.hpp"
#include "hdgc/simgen.hpp"

namespace hdgc {

// CSV ingest: first row is the header of channel labels, each following row
// one time point. Rejects ragged rows, duplicate labels, unparseable or
// non-finite cells with row/column diagnostics.
MultiChannelSeries read_series_csv(const std::filesystem::path& path);

// 17 significant digits so values round-trip exactly.
void write_series_csv(const std::filesystem::path& path, const MultiChannelSeries& series);

// Derived-channel recipe: differences, regional averages, Laplacians
// (center minus the mean of its neighbors) and elementwise products.
struct AugmentationSpec {
  std::vector<std::pair<std::string, std::string>> pair_differences;
  struct RegionalAverage {
    std::string label;
    std::vector<std::string> channels;
  };
  std::vector<RegionalAverage> regional_averages;
  struct Laplacian {
    std::string center;
    std::vector<std::string> neighbors;
  };
  std::vector<Laplacian> laplacians;
  std::vector<std::pair<std::string, std::string>> products;

  static AugmentationSpec from_json(const nlohmann::json& j);
};

// Appends the derived channels in recipe order; originals are untouched.
MultiChannelSeries augment_channels(const MultiChannelSeries& series, const AugmentationSpec& spec);

// Formats a double with 17 significant digits.
std::string format_number(double v);

// Connectivity report: report.json (per-pair statistics plus metadata),
// adjacency.csv (0/1 matrix with empty diagonal) and graph.dot (significant
// edges as a digraph).
void write_report(const std::filesystem::path& dir, const ConnectivityMatrix& results,
                  const nlohmann::json& metadata, const Eigen::VectorXd& explained_variance);

void write_adjacency_csv(const std::filesystem::path& path, const std::vector<std::string>& labels,
                         const Eigen::MatrixXi& adjacency);
Eigen::MatrixXi read_adjacency_csv(const std::filesystem::path& path,
                                   std::vector<std::string>* labels = nullptr);

void write_truth_json(const std::filesystem::path& path, const GroundTruth& truth,
                      const nlohmann::json& config_echo);
GroundTruth read_truth_json(const std::filesystem::path& path);

nlohmann::json network_config_to_json(const NetworkConfig& cfg);
NetworkConfig network_config_from_json(const nlohmann::json& j);

}  // namespace hdgc
