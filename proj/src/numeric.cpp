#include "hdgc/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "hdgc/errors.hpp"

namespace hdgc {

namespace {

using cplx = std::complex<double>;

bool power_of_two(size_t n) { return n != 0 && (n & (n - 1)) == 0; }

size_t next_pow2(size_t n) {
  size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// In-place iterative radix-2 transform. sign is +1 or -1 in the exponent.
void fft_pow2(std::vector<cplx>& a, int sign) {
  const size_t n = a.size();
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    const double ang = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
    for (size_t i = 0; i < n; i += len) {
      for (size_t j = 0; j < len / 2; ++j) {
        // twiddle recomputed per index; sizes here are small enough that
        // accuracy wins over the recurrence.
        const cplx w = std::polar(1.0, ang * static_cast<double>(j));
        const cplx u = a[i + j];
        const cplx v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
      }
    }
  }
}

// Bluestein chirp transform for arbitrary lengths, built on the radix-2 core.
std::vector<cplx> bluestein(const std::vector<cplx>& x, int sign) {
  const size_t n = x.size();
  const size_t m = next_pow2(2 * n - 1);
  // chirp angles kept accurate by reducing k^2 modulo 2n before scaling
  auto chirp = [&](size_t k) {
    const auto k2 = static_cast<long long>((static_cast<unsigned long long>(k) * k) % (2 * n));
    return std::polar(1.0, sign * std::numbers::pi * static_cast<double>(k2) / static_cast<double>(n));
  };
  std::vector<cplx> a(m, cplx(0, 0)), b(m, cplx(0, 0));
  for (size_t k = 0; k < n; ++k) {
    a[k] = x[k] * chirp(k);
    const cplx c = std::conj(chirp(k));
    b[k] = c;
    if (k > 0) b[m - k] = c;
  }
  fft_pow2(a, -1);
  fft_pow2(b, -1);
  for (size_t k = 0; k < m; ++k) a[k] *= b[k];
  fft_pow2(a, +1);
  std::vector<cplx> out(n);
  for (size_t k = 0; k < n; ++k) out[k] = a[k] * chirp(k) / static_cast<double>(m);
  return out;
}

}  // namespace

std::vector<cplx> dft_forward(const std::vector<cplx>& x, DftSign sign) {
  if (x.empty()) throw InvalidParameterError("dft input must not be empty");
  for (const auto& v : x)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw InvalidInputError("dft input contains non-finite entries");
  const int s = sign == DftSign::Negative ? -1 : +1;
  if (x.size() == 1) return x;
  if (power_of_two(x.size())) {
    std::vector<cplx> a = x;
    fft_pow2(a, s);
    return a;
  }
  return bluestein(x, s);
}

std::vector<cplx> dft_inverse(const std::vector<cplx>& x) {
  std::vector<cplx> out = dft_forward(x, DftSign::Positive);
  const double scale = 1.0 / static_cast<double>(x.size());
  for (auto& v : out) v *= scale;
  return out;
}

bool is_hermitian(const Eigen::MatrixXcd& m, double rel_tol) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = i; j < m.cols(); ++j)
      if (std::abs(m(i, j) - std::conj(m(j, i))) > rel_tol * scale) return false;
  return true;
}

HermitianEig hermitian_eig(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) throw ContractViolationError("hermitian_eig: matrix not square");
  if (!m.allFinite()) throw InvalidInputError("hermitian_eig: non-finite entries");
  if (!is_hermitian(m, 1e-12))
    throw ContractViolationError("hermitian_eig: matrix is not Hermitian within tolerance");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(0.5 * (m + m.adjoint()));
  if (solver.info() != Eigen::Success)
    throw ContractViolationError("hermitian_eig: eigensolver failed to converge");

  const Eigen::Index n = m.rows();
  HermitianEig out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    out.values(j) = solver.eigenvalues()(n - 1 - j);
    out.vectors.col(j) = solver.eigenvectors().col(n - 1 - j);
  }

  // Deterministic ordering inside groups of (numerically) equal eigenvalues:
  // compare entry magnitudes from the top, larger first.
  const double tie_tol = 1e-10 * std::max(1.0, out.values.cwiseAbs().maxCoeff());
  auto mag_less = [&](Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double da = std::abs(out.vectors(i, a));
      const double db = std::abs(out.vectors(i, b));
      if (std::abs(da - db) > 1e-12) return da > db;
    }
    return false;
  };
  Eigen::Index lo = 0;
  while (lo < n) {
    Eigen::Index hi = lo + 1;
    while (hi < n && std::abs(out.values(hi) - out.values(lo)) <= tie_tol) ++hi;
    if (hi - lo > 1) {
      std::vector<Eigen::Index> idx(static_cast<size_t>(hi - lo));
      std::iota(idx.begin(), idx.end(), lo);
      std::stable_sort(idx.begin(), idx.end(), mag_less);
      Eigen::MatrixXcd block(n, hi - lo);
      Eigen::VectorXd vals(hi - lo);
      for (Eigen::Index k = 0; k < hi - lo; ++k) {
        block.col(k) = out.vectors.col(idx[static_cast<size_t>(k)]);
        vals(k) = out.values(idx[static_cast<size_t>(k)]);
      }
      out.vectors.middleCols(lo, hi - lo) = block;
      out.values.segment(lo, hi - lo) = vals;
    }
    lo = hi;
  }
  return out;
}

OlsFit ols_fit(const Eigen::MatrixXd& design, const Eigen::VectorXd& response) {
  const Eigen::Index rows = design.rows();
  const Eigen::Index cols = design.cols();
  if (cols < 1) throw InvalidParameterError("ols_fit: design has no columns");
  if (rows != response.size())
    throw DimensionMismatchError("ols_fit: design rows do not match response length");
  if (rows <= cols)
    throw InvalidParameterError("ols_fit: need more observations than parameters");
  if (!design.allFinite() || !response.allFinite())
    throw InvalidInputError("ols_fit: non-finite entries");

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < cols) {
    // pivots beyond the numerical rank identify the dependent columns
    const auto perm = qr.colsPermutation().indices();
    std::vector<int> dependent;
    for (Eigen::Index i = qr.rank(); i < cols; ++i) dependent.push_back(perm(i));
    std::sort(dependent.begin(), dependent.end());
    std::ostringstream msg;
    msg << "ols_fit: rank-deficient design (rank " << qr.rank() << " of " << cols
        << "); dependent columns:";
    for (int c : dependent) msg << ' ' << c;
    throw SingularDesignError(msg.str());
  }

  OlsFit fit;
  fit.coefficients = qr.solve(response);
  fit.residuals = response - design * fit.coefficients;
  fit.rss = fit.residuals.squaredNorm();
  fit.n_params = static_cast<int>(cols);
  return fit;
}

}  // namespace hdgc
