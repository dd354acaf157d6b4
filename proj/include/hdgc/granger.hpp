#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "hdgc/numeric.hpp"
#include "hdgc/series.hpp"

namespace hdgc {

// Outcome of one directed Granger F-test.
struct GcTestResult {
  std::string cause;
  std::string effect;
  double f_stat = 0.0;
  int df1 = 0;  // q_lags
  int df2 = 0;  // T_eff - (p_lags + q_lags + 1)
  double p_value = 1.0;
  bool reject = false;
  int p_lags = 0;
  int q_lags = 0;
};

// Regression of y_t on an intercept, y_{t-1..t-p}, and (when x is given)
// x_{t-1..t-q}. Rows start at max(p_lags, q_lags) so nested fits share the
// same effective sample.
OlsFit fit_ar(const Eigen::VectorXd& y, int p_lags, const Eigen::VectorXd* x = nullptr,
              int q_lags = 0);

// Upper-tail probability of the F(d1, d2) distribution via the regularized
// incomplete beta function.
double f_sf(double f, int d1, int d2);

// I_x(a, b), exposed for the distribution helpers and their tests.
double regularized_incomplete_beta(double x, double a, double b);

// F-test of H0: no lagged influence of x on y, from the restricted and
// unrestricted fits on the common effective sample.
GcTestResult gc_test(const Eigen::VectorXd& x, const Eigen::VectorXd& y, int p_lags, int q_lags,
                     double alpha);

enum class Correction { None, BenjaminiHochberg };

// Tests for every ordered pair of channels, diagonal excluded.
struct ConnectivityMatrix {
  std::vector<std::string> labels;
  std::vector<GcTestResult> entries;  // cause-major order, self pairs skipped
  double alpha = 0.05;

  int n_labels() const { return static_cast<int>(labels.size()); }
  const GcTestResult& at(int cause, int effect) const;
  // 0/1 reject flags as an m x m matrix with zero diagonal
  Eigen::MatrixXi adjacency() const;
};

enum class LagCriterion { Fixed, Bic, Aic };

ConnectivityMatrix pairwise_gc(const MultiChannelSeries& channels, int p_lags, int q_lags,
                               double alpha, Correction correction = Correction::None,
                               LagCriterion criterion = LagCriterion::Fixed, int max_lag = 8);

// Common lag order for the pair (restricted to p = q), minimizing BIC/AIC of
// the unrestricted fit over a shared sample; Fixed passes fixed_lags through.
std::pair<int, int> select_lag(const Eigen::VectorXd& y, const Eigen::VectorXd& x, int max_lag,
                               LagCriterion criterion, int fixed_lags = 2);

}  // namespace hdgc
