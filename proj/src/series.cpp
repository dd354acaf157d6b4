#include "hdgc/series.hpp"

#include <unordered_set>

#include "hdgc/errors.hpp"

namespace hdgc {

int MultiChannelSeries::index_of(const std::string& label) const {
  for (size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == label) return static_cast<int>(i);
  return -1;
}

void MultiChannelSeries::validate() const {
  if (values.rows() < 2) throw InvalidInputError("series needs at least 2 time points");
  if (values.cols() < 1) throw InvalidInputError("series needs at least 1 channel");
  if (static_cast<Eigen::Index>(labels.size()) != values.cols())
    throw InvalidInputError("label count does not match channel count");
  std::unordered_set<std::string> seen;
  for (const auto& l : labels)
    if (!seen.insert(l).second) throw InvalidInputError("duplicate channel label '" + l + "'");
  if (!values.allFinite()) throw InvalidInputError("series contains non-finite values");
}

std::vector<std::string> MultiChannelSeries::default_labels(Eigen::Index n) {
  std::vector<std::string> out;
  out.reserve(static_cast<size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) out.push_back("ch" + std::to_string(i + 1));
  return out;
}

MultiChannelSeries select_channels(const MultiChannelSeries& s,
                                   const std::vector<std::string>& labels) {
  MultiChannelSeries out;
  out.sample_rate = s.sample_rate;
  out.values.resize(s.values.rows(), static_cast<Eigen::Index>(labels.size()));
  out.labels = labels;
  for (size_t i = 0; i < labels.size(); ++i) {
    int idx = s.index_of(labels[i]);
    if (idx < 0) throw InvalidInputError("channel '" + labels[i] + "' not found");
    out.values.col(static_cast<Eigen::Index>(i)) = s.values.col(idx);
  }
  return out;
}

MultiChannelSeries drop_channels(const MultiChannelSeries& s,
                                 const std::vector<std::string>& labels) {
  std::unordered_set<std::string> dropped(labels.begin(), labels.end());
  for (const auto& l : labels)
    if (s.index_of(l) < 0) throw InvalidInputError("channel '" + l + "' not found");
  std::vector<std::string> keep;
  for (const auto& l : s.labels)
    if (!dropped.count(l)) keep.push_back(l);
  return select_channels(s, keep);
}

}  // namespace hdgc
