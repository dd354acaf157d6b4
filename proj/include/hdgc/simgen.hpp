#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hdgc/rng.hpp"
#include "hdgc/series.hpp"

namespace hdgc {

// One oscillatory component: an AR(2) process with pole modulus r and pole
// angle rho, psi1 = 2 r cos(rho), psi2 = -r^2.
struct BandSpec {
  std::string name;
  double r = 0.95;
  double rho = 0.5;   // radians, in (0, pi)
  double sigma = 1.0;

  void validate() const;  // throws InvalidParameterError outside the stationarity triangle
};

// delta/theta/alpha/beta/gamma with pole angles matching their nominal band
// centers at 160 samples/s.
std::vector<BandSpec> default_bands();

enum class Scheme { Linear, Nonlinear, Causative };
Scheme scheme_from_name(const std::string& name);
std::string scheme_name(Scheme s);

struct NetworkConfig {
  int n_coi = 20;        // N, even: channels X_1..X_{N/2}, Y_1..Y_{N/2}
  int n_external = 108;  // outer channels Z_1..Z_{n_external}
  int T = 2000;
  Scheme scheme = Scheme::Linear;
  int n_influencers = 30;          // k per influenced channel
  double influence_weight = 0.1;   // omega
  double interaction_scale = 0.1;  // omega*, nonlinear scheme only
  double mu = 0.5;                 // causative scheme only, |mu| < 1
  std::array<double, 2> effect_coeffs{1.5, -1.5};  // rescaled to stationarity
  double sigma_eps = 1.0;  // channel noise
  double sigma_xi = 1.0;   // effect noise
  double sigma_nu = 1.0;   // causative noise
  std::vector<BandSpec> bands = default_bands();
  std::vector<double> band_weights;  // base per-band weights; empty = all 1
  double weight_jitter_lo = 0.5;     // per-channel multiplier drawn uniformly
  double weight_jitter_hi = 1.5;
  bool shared_influencers = false;   // Y_i reuses X_i's influencer set
  std::vector<int> connected_subset; // external indices eligible to influence; empty = all
  uint64_t seed = 1;

  int n_pairs() const { return n_coi / 2; }
  int n_total() const { return n_coi + n_external; }
  void validate() const;
};

// Injected causal structure of a simulated network.
struct GroundTruth {
  std::vector<std::string> labels;                   // full network channel labels
  std::vector<std::pair<int, int>> edges;            // (cause, effect) channel indices
  std::vector<std::vector<int>> influencer_map;      // per influenced channel, external indices
  std::vector<std::vector<double>> influence_weights;  // aligned with influencer_map
};

// Stationary AR(2) realization; 200 burn-in samples are generated and
// discarded before the returned T.
Eigen::VectorXd ar2_band(int T, const BandSpec& spec, RngStream& rng);

// Companion-matrix spectral radius of lag coefficients (psi1, psi2).
double companion_spectral_radius(double psi1, double psi2);

// Largest uniform rescaling of psi keeping the companion radius at or below
// the cap. Returns the scaled pair.
std::array<double, 2> scaled_effect_coeffs(const std::array<double, 2>& psi, double radius_cap = 0.95);

// Base network without any influence scheme applied: X pairs, their effects
// Y, and independent external channels. Channel order X_1..X_{N/2},
// Y_1..Y_{N/2}, Z_1..Z_{n_external}.
std::pair<MultiChannelSeries, GroundTruth> gen_network(const NetworkConfig& config);

// Influence schemes. Each fills the truth's influencer map and realized
// weights for the paired channels; Z channels are never modified.
MultiChannelSeries apply_linear_influence(const MultiChannelSeries& net, GroundTruth& truth,
                                          const NetworkConfig& config);
MultiChannelSeries apply_nonlinear_influence(const MultiChannelSeries& net, GroundTruth& truth,
                                             const NetworkConfig& config);
MultiChannelSeries apply_causative_influence(const MultiChannelSeries& net, GroundTruth& truth,
                                             const NetworkConfig& config);

// gen_network followed by the configured scheme.
std::pair<MultiChannelSeries, GroundTruth> simulate(const NetworkConfig& config);

// Numerically stable softplus ln(1 + e^x).
double softplus(double x);

}  // namespace hdgc
