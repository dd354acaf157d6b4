#pragma once

#include <Eigen/Dense>
#include <vector>

#include "hdgc/granger.hpp"
#include "hdgc/simgen.hpp"

namespace hdgc {

struct ConfusionCounts {
  long tp = 0;
  long fp = 0;
  long fn = 0;
  long tn = 0;

  long total() const { return tp + fp + fn + tn; }
};

// Which ordered pairs are scored against the ground truth.
//   CoiPairs:     every ordered pair among the predicted labels (default)
//   DesignedOnly: just the injected cause->effect pairs
enum class EvalScope { CoiPairs, DesignedOnly };

ConfusionCounts confusion(const ConnectivityMatrix& predicted, const GroundTruth& truth,
                          EvalScope scope = EvalScope::CoiPairs);

double accuracy(const ConfusionCounts& c);
// Matthews correlation; 0 when the denominator vanishes.
double mcc(const ConfusionCounts& c);
// Cohen's kappa; when chance agreement is total, 1 for perfect observed
// agreement and 0 otherwise.
double cohen_kappa(const ConfusionCounts& c);

// Edge present iff its frequency across the inputs reaches the threshold.
Eigen::MatrixXi consensus_graph(const std::vector<Eigen::MatrixXi>& adjacencies, double threshold);

}  // namespace hdgc
