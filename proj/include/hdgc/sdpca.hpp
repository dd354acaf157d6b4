#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "hdgc/numeric.hpp"
#include "hdgc/series.hpp"

namespace hdgc {

// Lag window applied to the autocovariances before the frequency sum.
// Bartlett is the default; it keeps the estimate positive semidefinite.
enum class Kernel { Bartlett, Parzen, Flat };

Kernel kernel_from_name(const std::string& name);
std::string kernel_name(Kernel k);
double kernel_weight(Kernel k, double x);  // x = |h| / L in [0, 1]

enum class Sidedness { TwoSided, OneSided };

// Empirical lagged autocovariances C(h) for h in [-L, L], with
// C(-h) = C(h)' held exactly by construction.
struct LagCovarianceSequence {
  int n = 0;
  int max_lag = 0;  // L_window
  std::vector<Eigen::MatrixXd> mats;  // size 2*max_lag + 1, index h + max_lag

  const Eigen::MatrixXd& at(int h) const { return mats[static_cast<size_t>(h + max_lag)]; }
};

// C(h) = (1/T) sum_{t} (Z_{t+h} - mean)(Z_t - mean)', divisor T for every lag.
LagCovarianceSequence autocov(const MultiChannelSeries& series, int L_window);

// Regular angular-frequency grid: omega_k = 2 pi k / n_freq for integer k,
// mapped into [-pi, pi) and stored ascending. Symmetric about zero except
// for the unpaired -pi point when n_freq is even.
struct FrequencyGrid {
  int n_freq = 0;
  std::vector<int> k;          // integer frequencies, ascending
  std::vector<double> points;  // 2 pi k / n_freq

  static FrequencyGrid regular(int n_freq);

  // Index of the point with frequency -omega(idx). Self for omega = 0 and
  // for the unpaired -pi point.
  int mirror(int idx) const;
  bool self_conjugate(int idx) const;
};

struct SpectralDensity {
  FrequencyGrid grid;
  std::vector<Eigen::MatrixXcd> mats;  // Hermitian, one per grid point
  Kernel kernel = Kernel::Bartlett;
  int L_window = 0;

  int n() const { return mats.empty() ? 0 : static_cast<int>(mats.front().rows()); }
};

// F(omega_s) = sum_{|h| <= L} w(|h|/L) C(h) exp(-i h omega_s).
SpectralDensity spectral_density(const LagCovarianceSequence& lagcov, Kernel kernel,
                                 const FrequencyGrid& grid);

// Top-k eigenpairs of F(omega) at every grid point. Eigenvectors are
// phase-fixed (largest-modulus entry real positive) on the omega >= 0
// half-grid and mirrored as conjugates to negative frequencies, so the
// filter coefficients derived from them come out real.
struct DynamicEigs {
  FrequencyGrid grid;
  int n = 0;
  int k_scores = 0;
  std::vector<Eigen::VectorXd> values;    // per point, descending, size k_scores
  std::vector<Eigen::MatrixXcd> vectors;  // per point, n x k_scores
  std::vector<double> trace;              // Re tr F(omega) per point
};

DynamicEigs dynamic_eigs(const SpectralDensity& sd, int k_scores);

// Restriction of a decomposition to its top k components.
DynamicEigs slice_eigs(const DynamicEigs& eigs, int k);

// v_j = sum_s lambda_j(omega_s) / sum_s tr F(omega_s), for the components
// carried by eigs. Sums to 1 over all n components.
Eigen::VectorXd explained_variance(const DynamicEigs& eigs);

// Smallest k whose cumulative explained variance reaches the threshold.
int choose_k(const Eigen::VectorXd& v, double threshold);

// Real filter taps phi_k^{(j)} over lags k in [-span, span], one n-vector
// per retained component. One-sided sets are zero for k < 0 and
// renormalized to unit total norm.
struct DynamicFilterSet {
  int n = 0;
  int k_scores = 0;
  int span = 0;  // L_filter
  Sidedness sidedness = Sidedness::TwoSided;
  std::vector<Eigen::MatrixXd> taps;  // size 2*span + 1, index k + span, each n x k_scores
  Eigen::VectorXd explained_variance;
  double max_imag_residue = 0.0;  // largest |Im| discarded when realifying

  const Eigen::MatrixXd& tap(int k) const { return taps[static_cast<size_t>(k + span)]; }
};

// phi_k = (1/n_freq) sum_s phi(omega_s) exp(-i k omega_s); the inverse
// transform of the eigenvector field on the grid.
DynamicFilterSet filters_from_eigs(const DynamicEigs& eigs, int L_filter, Sidedness sidedness);

struct ScoreMatrix {
  Eigen::MatrixXd values;  // T x k_scores, column means are zero
  Eigen::VectorXd explained_variance;
  int boundary_margin = 0;  // points per end affected by truncated convolution
};

// dpc_t^{(j)} = sum_k phi_k^{(j)}' Z_{t-k}, truncated at the series ends,
// applied to the mean-centered series and re-centered.
ScoreMatrix dpc_scores(const MultiChannelSeries& series, const DynamicFilterSet& filters);

}  // namespace hdgc
