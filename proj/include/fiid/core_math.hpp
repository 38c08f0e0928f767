#pragma once

#include <cstdint>
#include <utility>

namespace fiid {

enum class CutMode { min, max };

const char *to_string(CutMode mode);
CutMode parse_cut_mode(const char *text);

/// Degree of the regular tree together with its spectral radius 2*sqrt(d-1)/d.
struct DegreeParams {
  int d;
  double rho_d;

  static DegreeParams make(int d);
};

/// Persistence parameter of the symmetric two-state tree-indexed Markov chain.
struct MarkovParams {
  double theta;
  int d;

  static MarkovParams make(int d, double theta);

  double keep_probability() const { return 0.5 * (1.0 + theta); }
};

/// Spectral radius of the simple random walk operator on the d-regular tree.
double spectral_radius(int d);

/// P[sgn Z1 != sgn Z2] for standard jointly normal (Z1, Z2) with correlation
/// `rho`, i.e. arccos(rho)/pi. Inputs within 1e-12 of [-1, 1] are clamped.
double sign_flip_probability(double rho);

/// E[sgn Z1 sgn Z2] = (2/pi) arcsin(rho) for standard jointly normal pairs.
double sign_correlation(double rho);

/// (d/2pi) arccos(+rho_d) for min, (d/2pi) arccos(-rho_d) for max.
double bisection_bound(int d, CutMode mode);

/// Number of vertices at distance n from the root of the d-regular tree.
std::uint64_t sphere_size(int d, int n);

/// Number of vertices within distance r of the root.
std::uint64_t ball_size(int d, int r);

/// Correlation at adjacent vertices of the radius-n Gaussian block factor.
/// `alternating` selects weights (-1)^k (d-1)^(-k/2); the non-alternating
/// factor has the opposite sign.
double block_factor_correlation(int d, int n, bool alternating = true);

/// Var(Sigma_n)/|S_n| for the tree-indexed Markov chain.
double mc_variance_ratio(int d, double theta, int n);

/// E[sigma(o) Sigma_n] = |S_n| theta^n.
double mc_root_sphere_covariance(int d, double theta, int n);

/// Distance-n correlation (n(d-2)/d + 1)(d-1)^(-n/2) of the Gaussian wave
/// function; also the decay bound for square-integrable factors of IID.
double cghv_correlation(int d, int n);

} // namespace fiid
