#include "hdgc/granger.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hdgc/errors.hpp"

namespace hdgc {

namespace {

// Lentz-style continued fraction for the incomplete beta function
// (the classical betacf form).
double beta_cont_fraction(double x, double a, double b) {
  constexpr int kMaxIter = 500;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

Eigen::MatrixXd ar_design(const Eigen::VectorXd& y, int p_lags, const Eigen::VectorXd* x,
                          int q_lags, int max_lag) {
  const Eigen::Index T = y.size();
  const Eigen::Index rows = T - max_lag;
  const Eigen::Index cols = 1 + p_lags + (x ? q_lags : 0);
  Eigen::MatrixXd design(rows, cols);
  design.col(0).setOnes();
  for (int i = 1; i <= p_lags; ++i)
    design.col(i) = y.segment(max_lag - i, rows);
  if (x)
    for (int j = 1; j <= q_lags; ++j)
      design.col(p_lags + j) = x->segment(max_lag - j, rows);
  return design;
}

}  // namespace

double regularized_incomplete_beta(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0))
    throw InvalidParameterError("regularized_incomplete_beta: a and b must be positive");
  if (!(x >= 0.0) || !(x <= 1.0))
    throw InvalidInputError("regularized_incomplete_beta: x outside [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;

  const double ln_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cont_fraction(x, a, b) / a;
  return 1.0 - front * beta_cont_fraction(1.0 - x, b, a) / b;
}

double f_sf(double f, int d1, int d2) {
  if (!std::isfinite(f)) throw InvalidInputError("f_sf: non-finite statistic");
  if (f < 0.0) throw InvalidInputError("f_sf: negative statistic");
  if (d1 < 1 || d2 < 1) throw InvalidParameterError("f_sf: degrees of freedom must be positive");
  const double da = static_cast<double>(d1);
  const double db = static_cast<double>(d2);
  return regularized_incomplete_beta(db / (db + da * f), db / 2.0, da / 2.0);
}

OlsFit fit_ar(const Eigen::VectorXd& y, int p_lags, const Eigen::VectorXd* x, int q_lags) {
  if (p_lags < 1) throw InvalidParameterError("fit_ar: p_lags must be at least 1");
  if (q_lags < 0 || (x && q_lags < 1))
    throw InvalidParameterError("fit_ar: q_lags must be at least 1 when x is given");
  if (x && x->size() != y.size())
    throw DimensionMismatchError("fit_ar: x and y lengths differ");

  const int max_lag = std::max(p_lags, q_lags);
  const Eigen::Index T = y.size();
  const Eigen::Index n_params = 1 + p_lags + (x ? q_lags : 0);
  if (T - max_lag <= n_params)
    throw InvalidParameterError("fit_ar: series too short for the requested lag orders");

  return ols_fit(ar_design(y, p_lags, x, q_lags, max_lag), y.tail(T - max_lag));
}

GcTestResult gc_test(const Eigen::VectorXd& x, const Eigen::VectorXd& y, int p_lags, int q_lags,
                     double alpha) {
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw InvalidParameterError("gc_test: alpha must lie in (0, 1)");
  if (q_lags < 1) throw InvalidParameterError("gc_test: q_lags must be at least 1");
  if (x.size() != y.size()) throw DimensionMismatchError("gc_test: x and y lengths differ");

  const OlsFit restricted = fit_ar(y, p_lags, nullptr, q_lags);
  const OlsFit unrestricted = fit_ar(y, p_lags, &x, q_lags);

  const int t_eff = static_cast<int>(y.size()) - std::max(p_lags, q_lags);
  const int n_params = p_lags + q_lags + 1;
  const int df2 = t_eff - n_params;

  if (unrestricted.rss <= restricted.rss * 1e-13)
    throw DegenerateFitError("gc_test: unrestricted fit is (numerically) perfect");

  const double num = std::max(0.0, restricted.rss - unrestricted.rss) / q_lags;
  const double den = unrestricted.rss / df2;

  GcTestResult result;
  result.f_stat = num / den;
  result.df1 = q_lags;
  result.df2 = df2;
  result.p_value = f_sf(result.f_stat, q_lags, df2);
  result.reject = result.p_value < alpha;
  result.p_lags = p_lags;
  result.q_lags = q_lags;
  return result;
}

const GcTestResult& ConnectivityMatrix::at(int cause, int effect) const {
  const int m = n_labels();
  if (cause < 0 || cause >= m || effect < 0 || effect >= m || cause == effect)
    throw InvalidParameterError("ConnectivityMatrix::at: bad pair");
  // cause-major layout with the diagonal skipped
  const int row_base = cause * (m - 1);
  const int offset = effect < cause ? effect : effect - 1;
  return entries[static_cast<size_t>(row_base + offset)];
}

Eigen::MatrixXi ConnectivityMatrix::adjacency() const {
  const int m = n_labels();
  Eigen::MatrixXi adj = Eigen::MatrixXi::Zero(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (i != j && at(i, j).reject) adj(i, j) = 1;
  return adj;
}

namespace {

void apply_bh(std::vector<GcTestResult>& entries, double alpha) {
  const size_t m = entries.size();
  std::vector<size_t> order(m);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return entries[a].p_value < entries[b].p_value; });
  double threshold = -1.0;
  for (size_t r = m; r >= 1; --r) {
    const double p = entries[order[r - 1]].p_value;
    if (p <= alpha * static_cast<double>(r) / static_cast<double>(m)) {
      threshold = p;
      break;
    }
  }
  for (auto& e : entries) e.reject = threshold >= 0.0 && e.p_value <= threshold;
}

template <class E>
[[noreturn]] void rethrow_for_pair(const E& e, const std::string& cause, const std::string& effect) {
  throw E(std::string(e.what()) + " [pair " + cause + " -> " + effect + "]");
}

}  // namespace

ConnectivityMatrix pairwise_gc(const MultiChannelSeries& channels, int p_lags, int q_lags,
                               double alpha, Correction correction, LagCriterion criterion,
                               int max_lag) {
  channels.validate();
  const int m = static_cast<int>(channels.n_channels());
  if (m < 2) throw InvalidParameterError("pairwise_gc: need at least two channels");

  ConnectivityMatrix out;
  out.labels = channels.labels;
  out.alpha = alpha;
  out.entries.reserve(static_cast<size_t>(m) * (m - 1));
  for (int cause = 0; cause < m; ++cause) {
    for (int effect = 0; effect < m; ++effect) {
      if (cause == effect) continue;
      const Eigen::VectorXd x = channels.values.col(cause);
      const Eigen::VectorXd y = channels.values.col(effect);
      try {
        int p = p_lags;
        int q = q_lags;
        if (criterion != LagCriterion::Fixed)
          std::tie(p, q) = select_lag(y, x, max_lag, criterion, p_lags);
        GcTestResult r = gc_test(x, y, p, q, alpha);
        r.cause = channels.labels[static_cast<size_t>(cause)];
        r.effect = channels.labels[static_cast<size_t>(effect)];
        out.entries.push_back(std::move(r));
      } catch (const SingularDesignError& e) {
        rethrow_for_pair(e, channels.labels[static_cast<size_t>(cause)],
                         channels.labels[static_cast<size_t>(effect)]);
      } catch (const DegenerateFitError& e) {
        rethrow_for_pair(e, channels.labels[static_cast<size_t>(cause)],
                         channels.labels[static_cast<size_t>(effect)]);
      } catch (const InvalidParameterError& e) {
        rethrow_for_pair(e, channels.labels[static_cast<size_t>(cause)],
                         channels.labels[static_cast<size_t>(effect)]);
      }
    }
  }

  if (correction == Correction::BenjaminiHochberg) apply_bh(out.entries, alpha);
  return out;
}

std::pair<int, int> select_lag(const Eigen::VectorXd& y, const Eigen::VectorXd& x, int max_lag,
                               LagCriterion criterion, int fixed_lags) {
  if (max_lag < 1) throw InvalidParameterError("select_lag: max_lag must be at least 1");
  if (criterion == LagCriterion::Fixed) return {fixed_lags, fixed_lags};
  if (x.size() != y.size()) throw DimensionMismatchError("select_lag: x and y lengths differ");

  // all candidates scored on the common sample dictated by max_lag
  const Eigen::Index T = y.size();
  const Eigen::Index rows = T - max_lag;
  double best_ic = std::numeric_limits<double>::infinity();
  int best_lag = 1;
  for (int lag = 1; lag <= max_lag; ++lag) {
    const Eigen::Index cols = 1 + 2 * lag;
    if (rows <= cols) break;
    Eigen::MatrixXd design(rows, cols);
    design.col(0).setOnes();
    for (int i = 1; i <= lag; ++i) {
      design.col(i) = y.segment(max_lag - i, rows);
      design.col(lag + i) = x.segment(max_lag - i, rows);
    }
    const OlsFit fit = ols_fit(design, y.tail(rows));
    const double sigma2 = std::max(fit.rss / static_cast<double>(rows), 1e-300);
    const double penalty = criterion == LagCriterion::Bic
                               ? std::log(static_cast<double>(rows)) * static_cast<double>(cols)
                               : 2.0 * static_cast<double>(cols);
    const double ic = static_cast<double>(rows) * std::log(sigma2) + penalty;
    if (ic < best_ic) {
      best_ic = ic;
      best_lag = lag;
    }
  }
  return {best_lag, best_lag};
}

}  // namespace hdgc
