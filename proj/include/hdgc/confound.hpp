#pragma once

#include <Eigen/Dense>
#include <vector>

#include "hdgc/numeric.hpp"
#include "hdgc/sdpca.hpp"
#include "hdgc/series.hpp"

namespace hdgc {

// Shape of the regression of a channel of interest on the background scores.
struct RegressionSpec {
  bool include_intercept = true;
  bool include_interactions = false;  // pairwise score products, order 2
};

// Design columns: [intercept] + score columns + products s_i * s_j (i < j)
// when interactions are on.
Eigen::MatrixXd build_design(const ScoreMatrix& scores, const RegressionSpec& spec);

// Residualize one target against a prepared design. When filter_collinear
// is set, columns whose pivot ratio exceeds a 1e10 condition contribution
// are dropped (with a warning) instead of failing.
Eigen::VectorXd residualize_channel(const Eigen::VectorXd& target, const Eigen::MatrixXd& design,
                                    bool filter_collinear, OlsFit* fit = nullptr,
                                    std::vector<int>* dropped = nullptr);

// Two channels of interest freed from the background captured by the scores.
struct IsolatedPair {
  Eigen::VectorXd x;
  Eigen::VectorXd y;
  OlsFit fit_x;
  OlsFit fit_y;
};

IsolatedPair residualize(const MultiChannelSeries& targets, const ScoreMatrix& scores,
                         const RegressionSpec& spec);

// Residualize every channel of a series against the same score design.
MultiChannelSeries residualize_all(const MultiChannelSeries& targets, const ScoreMatrix& scores,
                                   const RegressionSpec& spec);

// Classical PCA scores of the zero-lag covariance; the GC-PCA baseline.
// Eigenvalue-descending, sign-fixed like the dynamic path so the two
// coincide when L_window = L_filter = 0.
ScoreMatrix static_pca_scores(const MultiChannelSeries& background, int k);

}  // namespace hdgc
