#include "hdgc/simgen.hpp"

#include <cmath>
#include <numbers>

#include "hdgc/errors.hpp"

namespace hdgc {

namespace {

constexpr int kBurnIn = 200;

// stream purposes for substream derivation
enum : uint64_t {
  kStreamBand = 1,
  kStreamChannelNoise,
  kStreamBandWeights,
  kStreamEffectNoise,
  kStreamInfluencerSet,
  kStreamInfluenceWeights,
  kStreamCausativeNoise,
};

}  // namespace

void BandSpec::validate() const {
  const double psi1 = 2.0 * r * std::cos(rho);
  const double psi2 = -r * r;
  const bool stationary = psi2 > -1.0 && psi1 + psi2 < 1.0 && psi2 - psi1 < 1.0;
  if (r < 0.0 || !stationary)
    throw InvalidParameterError("band '" + name + "': AR(2) outside the stationarity triangle");
  if (!(sigma > 0.0)) throw InvalidParameterError("band '" + name + "': sigma must be positive");
}

std::vector<BandSpec> default_bands() {
  // pole angles 2*pi*f/160 at nominal band-center frequencies
  const double base = 2.0 * std::numbers::pi / 160.0;
  return {
      {"delta", 0.95, base * 2.0, 1.0},
      {"theta", 0.95, base * 6.0, 1.0},
      {"alpha", 0.95, base * 10.0, 1.0},
      {"beta", 0.95, base * 21.0, 1.0},
      {"gamma", 0.95, base * 40.0, 1.0},
  };
}

Scheme scheme_from_name(const std::string& name) {
  if (name == "linear") return Scheme::Linear;
  if (name == "nonlinear") return Scheme::Nonlinear;
  if (name == "causative") return Scheme::Causative;
  throw InvalidParameterError("unknown scheme '" + name + "'");
}

std::string scheme_name(Scheme s) {
  switch (s) {
    case Scheme::Linear: return "linear";
    case Scheme::Nonlinear: return "nonlinear";
    case Scheme::Causative: return "causative";
  }
  return "?";
}

void NetworkConfig::validate() const {
  if (n_coi < 2 || n_coi % 2 != 0)
    throw InvalidParameterError("n_coi must be a positive even count");
  if (n_external < 1) throw InvalidParameterError("n_external must be positive");
  if (T < 100) throw InvalidParameterError("T must be at least 100");
  if (n_influencers < 1) throw InvalidParameterError("n_influencers must be positive");
  const size_t pool = connected_subset.empty() ? static_cast<size_t>(n_external)
                                               : connected_subset.size();
  if (static_cast<size_t>(n_influencers) > pool)
    throw InvalidParameterError("n_influencers exceeds the connected subset size");
  for (int idx : connected_subset)
    if (idx < 0 || idx >= n_external)
      throw InvalidParameterError("connected_subset index out of range");
  if (influence_weight < 0.0) throw InvalidParameterError("influence_weight must be nonnegative");
  if (interaction_scale < 0.0) throw InvalidParameterError("interaction_scale must be nonnegative");
  if (!(std::abs(mu) < 1.0)) throw InvalidParameterError("mu must satisfy |mu| < 1");
  if (!(sigma_eps > 0.0) || !(sigma_xi > 0.0) || !(sigma_nu > 0.0))
    throw InvalidParameterError("noise standard deviations must be positive");
  if (bands.empty()) throw InvalidParameterError("at least one band is required");
  for (const auto& b : bands) b.validate();
  if (!band_weights.empty() && band_weights.size() != bands.size())
    throw InvalidParameterError("band_weights size must match the band count");
  if (!(weight_jitter_lo > 0.0) || weight_jitter_hi < weight_jitter_lo)
    throw InvalidParameterError("weight jitter bounds must satisfy 0 < lo <= hi");
}

Eigen::VectorXd ar2_band(int T, const BandSpec& spec, RngStream& rng) {
  if (T < 100) throw InvalidParameterError("ar2_band: T must be at least 100");
  spec.validate();
  const double psi1 = 2.0 * spec.r * std::cos(spec.rho);
  const double psi2 = -spec.r * spec.r;

  Eigen::VectorXd out(T);
  double prev1 = 0.0, prev2 = 0.0;
  for (int t = -kBurnIn; t < T; ++t) {
    const double v = psi1 * prev1 + psi2 * prev2 + rng.normal(0.0, spec.sigma);
    prev2 = prev1;
    prev1 = v;
    if (t >= 0) out(t) = v;
  }
  return out;
}

double companion_spectral_radius(double psi1, double psi2) {
  // roots of z^2 - psi1 z - psi2
  const double disc = psi1 * psi1 + 4.0 * psi2;
  if (disc >= 0.0) {
    const double s = std::sqrt(disc);
    return std::max(std::abs((psi1 + s) / 2.0), std::abs((psi1 - s) / 2.0));
  }
  return std::sqrt(-psi2);
}

std::array<double, 2> scaled_effect_coeffs(const std::array<double, 2>& psi, double radius_cap) {
  if (companion_spectral_radius(psi[0], psi[1]) <= radius_cap) return psi;
  double lo = 0.0, hi = 1.0;
  for (int iter = 0; iter < 80; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (companion_spectral_radius(mid * psi[0], mid * psi[1]) <= radius_cap)
      lo = mid;
    else
      hi = mid;
  }
  return {lo * psi[0], lo * psi[1]};
}

namespace {

// Mixed-band source signal of internal length T + 2; the two leading samples
// serve as the presample for the effect channel's lags.
Eigen::VectorXd make_source(int source_idx, int t_internal, const NetworkConfig& cfg) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(t_internal);
  RngStream wstream(cfg.seed, stream_id(kStreamBandWeights, static_cast<uint64_t>(source_idx)));
  for (size_t b = 0; b < cfg.bands.size(); ++b) {
    const double base = cfg.band_weights.empty() ? 1.0 : cfg.band_weights[b];
    const double w = base * wstream.uniform(cfg.weight_jitter_lo, cfg.weight_jitter_hi);
    RngStream bstream(cfg.seed,
                      stream_id(kStreamBand, static_cast<uint64_t>(source_idx), static_cast<uint64_t>(b)));
    x += w * ar2_band(t_internal, cfg.bands[b], bstream);
  }
  RngStream nstream(cfg.seed, stream_id(kStreamChannelNoise, static_cast<uint64_t>(source_idx)));
  for (int t = 0; t < t_internal; ++t) x(t) += nstream.normal(0.0, cfg.sigma_eps);
  return x;
}

std::vector<int> influence_pool(const NetworkConfig& cfg) {
  if (!cfg.connected_subset.empty()) return cfg.connected_subset;
  std::vector<int> pool(static_cast<size_t>(cfg.n_external));
  for (int j = 0; j < cfg.n_external; ++j) pool[static_cast<size_t>(j)] = j;
  return pool;
}

// Influencer sets and realized weights for all N paired channels, recorded
// into the ground truth. Draws are keyed per channel, so the result does not
// depend on evaluation order.
void draw_influencers(const NetworkConfig& cfg, GroundTruth& truth) {
  const std::vector<int> pool = influence_pool(cfg);
  if (static_cast<size_t>(cfg.n_influencers) > pool.size())
    throw InvalidParameterError("n_influencers exceeds the connected subset size");
  truth.influencer_map.assign(static_cast<size_t>(cfg.n_coi), {});
  truth.influence_weights.assign(static_cast<size_t>(cfg.n_coi), {});
  const double omega = cfg.influence_weight;
  for (int c = 0; c < cfg.n_coi; ++c) {
    int set_key = c;
    if (cfg.shared_influencers && c >= cfg.n_pairs()) set_key = c - cfg.n_pairs();
    RngStream sstream(cfg.seed, stream_id(kStreamInfluencerSet, static_cast<uint64_t>(set_key)));
    std::vector<int> set = sstream.sample_without_replacement(pool, cfg.n_influencers);
    RngStream wstream(cfg.seed, stream_id(kStreamInfluenceWeights, static_cast<uint64_t>(c)));
    std::vector<double> weights(set.size());
    for (size_t j = 0; j < set.size(); ++j)
      weights[j] = wstream.uniform(omega - omega / 16.0, omega + omega / 16.0);
    truth.influencer_map[static_cast<size_t>(c)] = std::move(set);
    truth.influence_weights[static_cast<size_t>(c)] = std::move(weights);
  }
}

}  // namespace

std::pair<MultiChannelSeries, GroundTruth> gen_network(const NetworkConfig& cfg) {
  cfg.validate();
  const int n_pairs = cfg.n_pairs();
  const int t_internal = cfg.T + 2;
  const std::array<double, 2> psi = scaled_effect_coeffs(cfg.effect_coeffs);

  MultiChannelSeries net;
  net.values.resize(cfg.T, cfg.n_total());
  net.labels.reserve(static_cast<size_t>(cfg.n_total()));
  for (int i = 0; i < n_pairs; ++i) net.labels.push_back("X" + std::to_string(i + 1));
  for (int i = 0; i < n_pairs; ++i) net.labels.push_back("Y" + std::to_string(i + 1));
  for (int j = 0; j < cfg.n_external; ++j) net.labels.push_back("Z" + std::to_string(j + 1));

  // sources: n_pairs cause channels then n_external outer channels
  for (int i = 0; i < n_pairs; ++i) {
    const Eigen::VectorXd x = make_source(i, t_internal, cfg);
    net.values.col(i) = x.tail(cfg.T);
    RngStream estream(cfg.seed, stream_id(kStreamEffectNoise, static_cast<uint64_t>(i)));
    for (int t = 0; t < cfg.T; ++t)
      net.values(t, n_pairs + i) =
          psi[0] * x(t + 1) + psi[1] * x(t) + estream.normal(0.0, cfg.sigma_xi);
  }
  for (int j = 0; j < cfg.n_external; ++j) {
    const Eigen::VectorXd z = make_source(n_pairs + j, t_internal, cfg);
    net.values.col(cfg.n_coi + j) = z.tail(cfg.T);
  }

  GroundTruth truth;
  truth.labels = net.labels;
  truth.edges.reserve(static_cast<size_t>(n_pairs));
  for (int i = 0; i < n_pairs; ++i) truth.edges.emplace_back(i, n_pairs + i);
  truth.influencer_map.assign(static_cast<size_t>(cfg.n_coi), {});
  truth.influence_weights.assign(static_cast<size_t>(cfg.n_coi), {});
  return {std::move(net), std::move(truth)};
}

double softplus(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

MultiChannelSeries apply_linear_influence(const MultiChannelSeries& net, GroundTruth& truth,
                                          const NetworkConfig& cfg) {
  if (cfg.scheme != Scheme::Linear)
    throw InvalidParameterError("apply_linear_influence: config scheme is not linear");
  cfg.validate();
  draw_influencers(cfg, truth);

  MultiChannelSeries out = net;
  for (int c = 0; c < cfg.n_coi; ++c) {
    const auto& set = truth.influencer_map[static_cast<size_t>(c)];
    const auto& w = truth.influence_weights[static_cast<size_t>(c)];
    for (size_t j = 0; j < set.size(); ++j)
      out.values.col(c) += w[j] * net.values.col(cfg.n_coi + set[j]);
  }
  return out;
}

MultiChannelSeries apply_nonlinear_influence(const MultiChannelSeries& net, GroundTruth& truth,
                                             const NetworkConfig& cfg) {
  if (cfg.scheme != Scheme::Nonlinear)
    throw InvalidParameterError("apply_nonlinear_influence: config scheme is not nonlinear");
  cfg.validate();
  draw_influencers(cfg, truth);

  const Eigen::Index T = net.t_len();
  MultiChannelSeries out = net;
  for (int c = 0; c < cfg.n_coi; ++c) {
    const auto& set = truth.influencer_map[static_cast<size_t>(c)];
    const auto& w = truth.influence_weights[static_cast<size_t>(c)];
    Eigen::VectorXd linear = Eigen::VectorXd::Zero(T);
    Eigen::VectorXd squares = Eigen::VectorXd::Zero(T);
    for (size_t j = 0; j < set.size(); ++j) {
      const Eigen::VectorXd term = w[j] * net.values.col(cfg.n_coi + set[j]);
      linear += term;
      squares += term.cwiseProduct(term);
    }
    // sum_{j<k} W_j W_k Z_j Z_k = (L^2 - sum_j W_j^2 Z_j^2) / 2
    for (Eigen::Index t = 0; t < T; ++t) {
      const double pairwise = 0.5 * (linear(t) * linear(t) - squares(t));
      out.values(t, c) += softplus(linear(t)) + cfg.interaction_scale * pairwise;
    }
  }
  return out;
}

MultiChannelSeries apply_causative_influence(const MultiChannelSeries& net, GroundTruth& truth,
                                             const NetworkConfig& cfg) {
  if (cfg.scheme != Scheme::Causative)
    throw InvalidParameterError("apply_causative_influence: config scheme is not causative");
  cfg.validate();
  draw_influencers(cfg, truth);

  const Eigen::Index T = net.t_len();
  MultiChannelSeries out = net;
  for (int c = 0; c < cfg.n_coi; ++c) {
    const auto& set = truth.influencer_map[static_cast<size_t>(c)];
    const auto& w = truth.influence_weights[static_cast<size_t>(c)];
    RngStream nstream(cfg.seed, stream_id(kStreamCausativeNoise, static_cast<uint64_t>(c)));
    Eigen::VectorXd replaced(T);
    for (Eigen::Index t = 0; t < T; ++t) {
      double v = nstream.normal(0.0, cfg.sigma_nu);
      if (t >= 1) {
        v += cfg.mu * net.values(t - 1, c);
        for (size_t j = 0; j < set.size(); ++j)
          v += w[j] * net.values(t - 1, cfg.n_coi + set[j]);
      }
      replaced(t) = v;
    }
    out.values.col(c) = replaced;
  }
  return out;
}

std::pair<MultiChannelSeries, GroundTruth> simulate(const NetworkConfig& cfg) {
  auto [net, truth] = gen_network(cfg);
  MultiChannelSeries influenced;
  switch (cfg.scheme) {
    case Scheme::Linear: influenced = apply_linear_influence(net, truth, cfg); break;
    case Scheme::Nonlinear: influenced = apply_nonlinear_influence(net, truth, cfg); break;
    case Scheme::Causative: influenced = apply_causative_influence(net, truth, cfg); break;
  }
  return {std::move(influenced), std::move(truth)};
}

}  // namespace hdgc
