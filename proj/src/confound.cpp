#include "hdgc/confound.hpp"

#include <cmath>
#include <iostream>

#include "hdgc/errors.hpp"

namespace hdgc {

Eigen::MatrixXd build_design(const ScoreMatrix& scores, const RegressionSpec& spec) {
  const Eigen::Index T = scores.values.rows();
  const Eigen::Index k = scores.values.cols();
  if (k < 1) throw InvalidParameterError("build_design: need at least one score column");

  Eigen::Index cols = k + (spec.include_intercept ? 1 : 0);
  if (spec.include_interactions) cols += k * (k - 1) / 2;

  Eigen::MatrixXd design(T, cols);
  Eigen::Index c = 0;
  if (spec.include_intercept) design.col(c++).setOnes();
  design.middleCols(c, k) = scores.values;
  c += k;
  if (spec.include_interactions) {
    for (Eigen::Index i = 0; i < k; ++i)
      for (Eigen::Index j = i + 1; j < k; ++j)
        design.col(c++) = scores.values.col(i).cwiseProduct(scores.values.col(j));
  }
  return design;
}

Eigen::VectorXd residualize_channel(const Eigen::VectorXd& target, const Eigen::MatrixXd& design,
                                    bool filter_collinear, OlsFit* fit, std::vector<int>* dropped) {
  if (target.size() != design.rows())
    throw DimensionMismatchError("residualize: target length does not match design rows");

  Eigen::MatrixXd use = design;

  if (filter_collinear) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    const Eigen::MatrixXd& r = qr.matrixR();
    const double pivot0 = std::abs(r(0, 0));
    std::vector<int> keep_cols;
    std::vector<int> drop_cols;
    const auto perm = qr.colsPermutation().indices();
    for (Eigen::Index i = 0; i < design.cols(); ++i) {
      const double piv = i < r.rows() ? std::abs(r(i, i)) : 0.0;
      if (piv >= pivot0 * 1e-10)
        keep_cols.push_back(perm(i));
      else
        drop_cols.push_back(perm(i));
    }
    if (!drop_cols.empty()) {
      std::sort(keep_cols.begin(), keep_cols.end());
      std::sort(drop_cols.begin(), drop_cols.end());
      std::cerr << "warning: dropping " << drop_cols.size()
                << " near-collinear design column(s) before residualization\n";
      use.resize(design.rows(), static_cast<Eigen::Index>(keep_cols.size()));
      for (size_t i = 0; i < keep_cols.size(); ++i)
        use.col(static_cast<Eigen::Index>(i)) = design.col(keep_cols[i]);
      if (dropped) *dropped = drop_cols;
    }
  }

  OlsFit f = ols_fit(use, target);
  if (fit) *fit = f;
  return f.residuals;
}

IsolatedPair residualize(const MultiChannelSeries& targets, const ScoreMatrix& scores,
                         const RegressionSpec& spec) {
  targets.validate();
  if (targets.n_channels() != 2)
    throw InvalidParameterError("residualize: expected exactly two channels of interest");
  if (targets.t_len() != scores.values.rows())
    throw DimensionMismatchError("residualize: series and scores have different lengths");

  const Eigen::MatrixXd design = build_design(scores, spec);
  IsolatedPair pair;
  pair.x = residualize_channel(targets.values.col(0), design, spec.include_interactions, &pair.fit_x);
  pair.y = residualize_channel(targets.values.col(1), design, spec.include_interactions, &pair.fit_y);
  return pair;
}

MultiChannelSeries residualize_all(const MultiChannelSeries& targets, const ScoreMatrix& scores,
                                   const RegressionSpec& spec) {
  targets.validate();
  if (targets.t_len() != scores.values.rows())
    throw DimensionMismatchError("residualize: series and scores have different lengths");

  const Eigen::MatrixXd design = build_design(scores, spec);
  MultiChannelSeries out = targets;
  for (Eigen::Index c = 0; c < targets.n_channels(); ++c)
    out.values.col(c) =
        residualize_channel(targets.values.col(c), design, spec.include_interactions);
  return out;
}

ScoreMatrix static_pca_scores(const MultiChannelSeries& background, int k) {
  background.validate();
  const Eigen::Index n = background.n_channels();
  if (k < 1 || k > n) throw InvalidParameterError("static_pca_scores: k out of range");

  const Eigen::MatrixXd c0 = autocov(background, 0).at(0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(c0);
  if (solver.info() != Eigen::Success)
    throw ContractViolationError("static_pca_scores: eigensolver failed");

  // descending eigenvalues; sign fix mirrors the dynamic path's phase fix
  Eigen::VectorXd evals(n);
  Eigen::MatrixXd evecs(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    evals(j) = solver.eigenvalues()(n - 1 - j);
    evecs.col(j) = solver.eigenvectors().col(n - 1 - j);
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    Eigen::Index pivot = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double a = std::abs(evecs(i, j));
      if (a > best) {
        best = a;
        pivot = i;
      }
    }
    if (evecs(pivot, j) < 0) evecs.col(j) = -evecs.col(j);
  }

  Eigen::MatrixXd centered = background.values.rowwise() - background.values.colwise().mean();
  const double total = evals.sum();

  ScoreMatrix out;
  out.values = centered * evecs.leftCols(k);
  out.explained_variance =
      total > 0 ? Eigen::VectorXd((evals.head(k) / total).cwiseMax(0.0)) : Eigen::VectorXd::Zero(k);
  out.boundary_margin = 0;
  return out;
}

}  // namespace hdgc
