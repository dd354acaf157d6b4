#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

namespace hdgc {

// A synchronized panel of real-valued signals: T time points by n channels.
// The universal input/output of the analysis pipeline.
struct MultiChannelSeries {
  Eigen::MatrixXd values;           // T x n, row t is one time point
  std::vector<std::string> labels;  // size n, unique
  std::optional<double> sample_rate;

  Eigen::Index t_len() const { return values.rows(); }
  Eigen::Index n_channels() const { return values.cols(); }

  // Index of a label, or -1 when absent.
  int index_of(const std::string& label) const;

  // Throws InvalidInputError unless T >= 2, n >= 1, labels unique and
  // matching the column count, and all values finite.
  void validate() const;

  static std::vector<std::string> default_labels(Eigen::Index n);
};

// New series holding exactly the named channels, in the given order.
MultiChannelSeries select_channels(const MultiChannelSeries& s,
                                   const std::vector<std::string>& labels);

// New series holding every channel except the named ones.
MultiChannelSeries drop_channels(const MultiChannelSeries& s,
                                 const std::vector<std::string>& labels);

}  // namespace hdgc
