#include "hdgc/evalmetrics.hpp"

#include <cmath>
#include <set>
#include <string>
#include <unordered_map>

#include "hdgc/errors.hpp"

namespace hdgc {

ConfusionCounts confusion(const ConnectivityMatrix& predicted, const GroundTruth& truth,
                          EvalScope scope) {
  std::unordered_map<std::string, int> truth_index;
  for (size_t i = 0; i < truth.labels.size(); ++i)
    truth_index[truth.labels[i]] = static_cast<int>(i);

  std::unordered_map<std::string, int> pred_index;
  for (size_t i = 0; i < predicted.labels.size(); ++i) {
    if (!truth_index.count(predicted.labels[i]))
      throw InvalidInputError("confusion: predicted label '" + predicted.labels[i] +
                              "' not present in the ground truth");
    pred_index[predicted.labels[i]] = static_cast<int>(i);
  }

  std::set<std::pair<int, int>> true_edges(truth.edges.begin(), truth.edges.end());

  ConfusionCounts counts;
  if (scope == EvalScope::DesignedOnly) {
    for (const auto& [cause, effect] : truth.edges) {
      const auto ci = pred_index.find(truth.labels[static_cast<size_t>(cause)]);
      const auto ei = pred_index.find(truth.labels[static_cast<size_t>(effect)]);
      if (ci == pred_index.end() || ei == pred_index.end())
        throw InvalidInputError("confusion: designed edge endpoints missing from prediction");
      if (predicted.at(ci->second, ei->second).reject)
        ++counts.tp;
      else
        ++counts.fn;
    }
    return counts;
  }

  const int m = predicted.n_labels();
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      const int ti = truth_index.at(predicted.labels[static_cast<size_t>(i)]);
      const int tj = truth_index.at(predicted.labels[static_cast<size_t>(j)]);
      const bool actual = true_edges.count({ti, tj}) > 0;
      const bool detected = predicted.at(i, j).reject;
      if (actual && detected) ++counts.tp;
      else if (actual && !detected) ++counts.fn;
      else if (!actual && detected) ++counts.fp;
      else ++counts.tn;
    }
  }
  return counts;
}

double accuracy(const ConfusionCounts& c) {
  if (c.total() <= 0) throw InvalidInputError("accuracy: empty counts");
  return static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
}

double mcc(const ConfusionCounts& c) {
  if (c.total() <= 0) throw InvalidInputError("mcc: empty counts");
  const double tp = static_cast<double>(c.tp);
  const double fp = static_cast<double>(c.fp);
  const double fn = static_cast<double>(c.fn);
  const double tn = static_cast<double>(c.tn);
  const double denom = std::sqrt((tp + fp) * (tp + fn) * (tn + fp) * (tn + fn));
  if (denom == 0.0) return 0.0;
  return (tp * tn - fp * fn) / denom;
}

double cohen_kappa(const ConfusionCounts& c) {
  if (c.total() <= 0) throw InvalidInputError("cohen_kappa: empty counts");
  const double tot = static_cast<double>(c.total());
  const double po = static_cast<double>(c.tp + c.tn) / tot;
  const double p_yes =
      (static_cast<double>(c.tp + c.fp) / tot) * (static_cast<double>(c.tp + c.fn) / tot);
  const double p_no =
      (static_cast<double>(c.fn + c.tn) / tot) * (static_cast<double>(c.fp + c.tn) / tot);
  const double pe = p_yes + p_no;
  if (std::abs(1.0 - pe) < 1e-15) return po >= 1.0 - 1e-15 ? 1.0 : 0.0;
  return (po - pe) / (1.0 - pe);
}

Eigen::MatrixXi consensus_graph(const std::vector<Eigen::MatrixXi>& adjacencies, double threshold) {
  if (adjacencies.empty()) throw InvalidInputError("consensus_graph: no adjacency matrices");
  if (!(threshold > 0.0) || threshold > 1.0)
    throw InvalidParameterError("consensus_graph: threshold must lie in (0, 1]");
  const Eigen::Index rows = adjacencies.front().rows();
  const Eigen::Index cols = adjacencies.front().cols();
  Eigen::MatrixXd freq = Eigen::MatrixXd::Zero(rows, cols);
  for (const auto& a : adjacencies) {
    if (a.rows() != rows || a.cols() != cols)
      throw InvalidInputError("consensus_graph: adjacency shapes differ");
    freq += (a.array() != 0).cast<double>().matrix();
  }
  freq /= static_cast<double>(adjacencies.size());
  return (freq.array() >= threshold).cast<int>().matrix();
}

}  // namespace hdgc
