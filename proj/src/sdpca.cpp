#include "hdgc/sdpca.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "hdgc/errors.hpp"

namespace hdgc {

namespace {
using cplx = std::complex<double>;
}

Kernel kernel_from_name(const std::string& name) {
  if (name == "bartlett") return Kernel::Bartlett;
  if (name == "parzen") return Kernel::Parzen;
  if (name == "flat") return Kernel::Flat;
  throw InvalidParameterError("unknown kernel '" + name + "' (expected bartlett, parzen or flat)");
}

std::string kernel_name(Kernel k) {
  switch (k) {
    case Kernel::Bartlett: return "bartlett";
    case Kernel::Parzen: return "parzen";
    case Kernel::Flat: return "flat";
  }
  return "?";
}

double kernel_weight(Kernel k, double x) {
  switch (k) {
    case Kernel::Bartlett:
      return 1.0 - x;
    case Kernel::Parzen:
      if (x <= 0.5) return 1.0 - 6.0 * x * x + 6.0 * x * x * x;
      return 2.0 * (1.0 - x) * (1.0 - x) * (1.0 - x);
    case Kernel::Flat:
      return 1.0;
  }
  return 0.0;
}

LagCovarianceSequence autocov(const MultiChannelSeries& series, int L_window) {
  series.validate();
  const Eigen::Index T = series.t_len();
  const Eigen::Index n = series.n_channels();
  if (L_window < 0) throw InvalidParameterError("autocov: L_window must be nonnegative");
  if (L_window >= T) throw InvalidParameterError("autocov: L_window must be smaller than T");

  Eigen::MatrixXd centered = series.values.rowwise() - series.values.colwise().mean();

  LagCovarianceSequence out;
  out.n = static_cast<int>(n);
  out.max_lag = L_window;
  out.mats.resize(static_cast<size_t>(2 * L_window + 1));
  for (int h = 0; h <= L_window; ++h) {
    const Eigen::Index len = T - h;
    Eigen::MatrixXd c =
        centered.middleRows(h, len).transpose() * centered.middleRows(0, len) / static_cast<double>(T);
    out.mats[static_cast<size_t>(L_window + h)] = c;
    if (h > 0) out.mats[static_cast<size_t>(L_window - h)] = c.transpose();
  }
  return out;
}

FrequencyGrid FrequencyGrid::regular(int n_freq) {
  if (n_freq < 1) throw InvalidParameterError("frequency grid needs at least one point");
  FrequencyGrid g;
  g.n_freq = n_freq;
  const int k_lo = -(n_freq / 2);
  g.k.resize(static_cast<size_t>(n_freq));
  g.points.resize(static_cast<size_t>(n_freq));
  for (int i = 0; i < n_freq; ++i) {
    g.k[static_cast<size_t>(i)] = k_lo + i;
    g.points[static_cast<size_t>(i)] =
        2.0 * std::numbers::pi * static_cast<double>(k_lo + i) / static_cast<double>(n_freq);
  }
  return g;
}

int FrequencyGrid::mirror(int idx) const {
  const int kk = k[static_cast<size_t>(idx)];
  if (self_conjugate(idx)) return idx;
  const int k_lo = k.front();
  return -kk - k_lo;
}

bool FrequencyGrid::self_conjugate(int idx) const {
  const int kk = k[static_cast<size_t>(idx)];
  return kk == 0 || 2 * kk == -n_freq;
}

SpectralDensity spectral_density(const LagCovarianceSequence& lagcov, Kernel kernel,
                                 const FrequencyGrid& grid) {
  const int L = lagcov.max_lag;
  if (grid.n_freq < 2 * L + 1)
    throw InvalidParameterError("spectral_density: grid must have at least 2*L_window+1 points");

  std::vector<Eigen::MatrixXd> weighted(static_cast<size_t>(L + 1));
  for (int h = 0; h <= L; ++h) {
    const double w = L == 0 ? 1.0 : kernel_weight(kernel, static_cast<double>(h) / L);
    weighted[static_cast<size_t>(h)] = w * lagcov.at(h);
  }

  SpectralDensity sd;
  sd.grid = grid;
  sd.kernel = kernel;
  sd.L_window = L;
  sd.mats.resize(grid.points.size());
  for (size_t s = 0; s < grid.points.size(); ++s) {
    const double omega = grid.points[s];
    Eigen::MatrixXcd f = weighted[0].cast<cplx>();
    for (int h = 1; h <= L; ++h) {
      const cplx e = std::polar(1.0, -static_cast<double>(h) * omega);
      // C(h) e^{-ih w} + C(h)' e^{+ih w}: exactly Hermitian in floating point
      f += weighted[static_cast<size_t>(h)] * e +
           weighted[static_cast<size_t>(h)].transpose() * std::conj(e);
    }
    sd.mats[s] = std::move(f);
  }
  return sd;
}

namespace {

// Rotate each column so its largest-modulus entry is real and positive;
// realify outright at self-conjugate frequencies where the matrix is real.
void phase_fix(Eigen::MatrixXcd& vecs, bool realify) {
  for (Eigen::Index j = 0; j < vecs.cols(); ++j) {
    Eigen::Index pivot = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < vecs.rows(); ++i) {
      const double a = std::abs(vecs(i, j));
      if (a > best) {  // strict: the first index attaining the max wins
        best = a;
        pivot = i;
      }
    }
    const cplx p = vecs(pivot, j);
    if (std::abs(p) > 0) vecs.col(j) *= std::conj(p) / std::abs(p);
    if (realify) {
      Eigen::VectorXd re = vecs.col(j).real();
      const double norm = re.norm();
      if (norm > 0) re /= norm;
      vecs.col(j) = re.cast<cplx>();
    }
  }
}

}  // namespace

DynamicEigs dynamic_eigs(const SpectralDensity& sd, int k_scores) {
  const int n = sd.n();
  if (k_scores < 1) throw InvalidParameterError("dynamic_eigs: k_scores must be positive");
  if (k_scores > n)
    throw InvalidParameterError("dynamic_eigs: k_scores exceeds channel count");

  DynamicEigs out;
  out.grid = sd.grid;
  out.n = n;
  out.k_scores = k_scores;
  const size_t npts = sd.mats.size();
  out.values.resize(npts);
  out.vectors.resize(npts);
  out.trace.resize(npts);

  for (size_t s = 0; s < npts; ++s) out.trace[s] = sd.mats[s].trace().real();

  // decompose on the omega >= 0 half (plus the unpaired -pi point) and
  // mirror conjugates to the negative half
  for (size_t s = 0; s < npts; ++s) {
    const int kk = sd.grid.k[s];
    if (kk < 0 && !sd.grid.self_conjugate(static_cast<int>(s))) continue;
    HermitianEig eig = hermitian_eig(sd.mats[s]);
    Eigen::MatrixXcd top = eig.vectors.leftCols(k_scores);
    phase_fix(top, sd.grid.self_conjugate(static_cast<int>(s)));
    out.values[s] = eig.values.head(k_scores);
    out.vectors[s] = std::move(top);
  }
  for (size_t s = 0; s < npts; ++s) {
    const int kk = sd.grid.k[s];
    if (kk >= 0 || sd.grid.self_conjugate(static_cast<int>(s))) continue;
    const int m = sd.grid.mirror(static_cast<int>(s));
    out.values[s] = out.values[static_cast<size_t>(m)];
    out.vectors[s] = out.vectors[static_cast<size_t>(m)].conjugate();
  }
  return out;
}

DynamicEigs slice_eigs(const DynamicEigs& eigs, int k) {
  if (k < 1 || k > eigs.k_scores)
    throw InvalidParameterError("slice_eigs: k out of range");
  DynamicEigs out;
  out.grid = eigs.grid;
  out.n = eigs.n;
  out.k_scores = k;
  out.trace = eigs.trace;
  out.values.resize(eigs.values.size());
  out.vectors.resize(eigs.vectors.size());
  for (size_t s = 0; s < eigs.values.size(); ++s) {
    out.values[s] = eigs.values[s].head(k);
    out.vectors[s] = eigs.vectors[s].leftCols(k);
  }
  return out;
}

Eigen::VectorXd explained_variance(const DynamicEigs& eigs) {
  double total = 0.0;
  for (double t : eigs.trace) total += t;
  if (!(total > 0.0))
    throw DegenerateInputError("explained_variance: total spectral trace is zero");

  Eigen::VectorXd v = Eigen::VectorXd::Zero(eigs.k_scores);
  for (const auto& vals : eigs.values) v += vals;
  v /= total;
  // indefinite estimates (flat kernel) can dip slightly below zero
  return v.cwiseMax(0.0);
}

int choose_k(const Eigen::VectorXd& v, double threshold) {
  if (v.size() == 0) throw InvalidParameterError("choose_k: empty variance vector");
  if (!(threshold > 0.0) || threshold > 1.0)
    throw InvalidParameterError("choose_k: threshold must lie in (0, 1]");
  double cum = 0.0;
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    cum += v(j);
    if (cum >= threshold - 1e-12) return static_cast<int>(j) + 1;
  }
  return static_cast<int>(v.size());
}

DynamicFilterSet filters_from_eigs(const DynamicEigs& eigs, int L_filter, Sidedness sidedness) {
  if (L_filter < 0) throw InvalidParameterError("filters_from_eigs: negative span");
  if (2 * L_filter + 1 > eigs.grid.n_freq)
    throw InvalidParameterError("filters_from_eigs: span too large for the frequency grid");

  DynamicFilterSet out;
  out.n = eigs.n;
  out.k_scores = eigs.k_scores;
  out.span = L_filter;
  out.sidedness = sidedness;
  out.taps.resize(static_cast<size_t>(2 * L_filter + 1));
  out.max_imag_residue = 0.0;

  const int npts = eigs.grid.n_freq;
  for (int k = -L_filter; k <= L_filter; ++k) {
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(eigs.n, eigs.k_scores);
    for (int s = 0; s < npts; ++s) {
      const cplx e = std::polar(1.0, -static_cast<double>(k) * eigs.grid.points[static_cast<size_t>(s)]);
      acc += eigs.vectors[static_cast<size_t>(s)] * e;
    }
    acc /= static_cast<double>(npts);
    out.max_imag_residue = std::max(out.max_imag_residue, acc.imag().cwiseAbs().maxCoeff());
    out.taps[static_cast<size_t>(k + L_filter)] = acc.real();
  }

  if (sidedness == Sidedness::OneSided) {
    for (int k = -L_filter; k < 0; ++k)
      out.taps[static_cast<size_t>(k + L_filter)].setZero();
    Eigen::VectorXd norm2 = Eigen::VectorXd::Zero(eigs.k_scores);
    for (int k = 0; k <= L_filter; ++k)
      norm2 += out.tap(k).colwise().squaredNorm().transpose();
    for (Eigen::Index j = 0; j < norm2.size(); ++j) {
      const double nrm = std::sqrt(norm2(j));
      if (nrm > 0)
        for (auto& t : out.taps) t.col(j) /= nrm;
    }
  }

  double total_trace = 0.0;
  for (double t : eigs.trace) total_trace += t;
  if (total_trace > 0.0) out.explained_variance = explained_variance(eigs);
  return out;
}

ScoreMatrix dpc_scores(const MultiChannelSeries& series, const DynamicFilterSet& filters) {
  series.validate();
  const Eigen::Index T = series.t_len();
  if (series.n_channels() != filters.n)
    throw DimensionMismatchError("dpc_scores: series channel count does not match filter dimension");
  if (T <= 2 * filters.span)
    throw InvalidParameterError("dpc_scores: series shorter than twice the filter span");

  Eigen::MatrixXd centered = series.values.rowwise() - series.values.colwise().mean();
  Eigen::MatrixXd scores = Eigen::MatrixXd::Zero(T, filters.k_scores);
  for (int k = -filters.span; k <= filters.span; ++k) {
    // rows t with 0 <= t - k <= T-1; out-of-range taps are dropped
    const Eigen::Index lo = std::max<Eigen::Index>(0, k);
    const Eigen::Index hi = std::min<Eigen::Index>(T - 1, T - 1 + k);
    if (hi < lo) continue;
    const Eigen::Index len = hi - lo + 1;
    scores.middleRows(lo, len).noalias() += centered.middleRows(lo - k, len) * filters.tap(k);
  }
  scores.rowwise() -= scores.colwise().mean();

  ScoreMatrix out;
  out.values = std::move(scores);
  out.explained_variance = filters.explained_variance;
  out.boundary_margin = filters.span;
  return out;
}

}  // namespace hdgc
