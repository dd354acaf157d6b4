#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace hdgc {

// The library-wide transform convention is a negative exponent for the
// forward direction: X_s = sum_t x_t exp(-i 2 pi s t / N). Every module
// that needs a transform references this convention instead of choosing
// its own.
enum class DftSign { Negative, Positive };

// Discrete Fourier transform, X_s = sum_t x_t exp(sign i 2 pi s t / N).
// Radix-2 for power-of-two lengths, Bluestein otherwise.
std::vector<std::complex<double>> dft_forward(const std::vector<std::complex<double>>& x,
                                              DftSign sign = DftSign::Negative);

// Positive-sign transform scaled by 1/N; exact inverse of the forward
// transform up to roundoff.
std::vector<std::complex<double>> dft_inverse(const std::vector<std::complex<double>>& x);

bool is_hermitian(const Eigen::MatrixXcd& m, double rel_tol = 1e-12);

struct HermitianEig {
  Eigen::VectorXd values;    // descending
  Eigen::MatrixXcd vectors;  // unit-norm columns, column j pairs with values[j]
};

// Dense eigendecomposition of a Hermitian matrix. Eigenvalues come back
// sorted descending; within a group of equal eigenvalues, vectors are
// ordered by the first index at which their entry magnitudes differ
// (larger magnitude first) so repeated runs give identical output.
HermitianEig hermitian_eig(const Eigen::MatrixXcd& m);

struct OlsFit {
  Eigen::VectorXd coefficients;
  Eigen::VectorXd residuals;  // length = rows of the design
  double rss = 0.0;
  int n_params = 0;
};

// Least squares via column-pivoted QR. Rank-deficient designs raise
// SingularDesignError naming the dependent columns.
OlsFit ols_fit(const Eigen::MatrixXd& design, const Eigen::VectorXd& response);

}  // namespace hdgc
