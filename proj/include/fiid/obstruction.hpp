#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fiid/core_math.hpp"
#include "fiid/gaussian.hpp"
#include "fiid/tree.hpp"

namespace fiid {

/// Draws one configuration on a tree ball. `values` has one slot per ball
/// vertex; the seed is the replica's substream seed.
using ConfigurationSampler = std::function<void(std::uint64_t seed, std::span<double> values)>;

// The returned samplers keep a reference to `ball`.
ConfigurationSampler iid_spin_sampler(const TreeBall &ball);
ConfigurationSampler mc_direct_sampler(const TreeBall &ball, const MarkovParams &params);
ConfigurationSampler mc_cluster_sampler(const TreeBall &ball, const MarkovParams &params);
/// Gaussian block factor on the ball (raw values or their signs). Vertices
/// whose support leaves the ball read as 0.
ConfigurationSampler gauss_block_sampler(const TreeBall &ball, const BlockFactorSpec &spec,
                                         bool sign_rounded);

enum class Classification { obstructed, not_obstructed, inconclusive };

const char *to_string(Classification c);

/// Sphere-sum statistics: Var(Sigma_n)/|S_n| and Corr(sigma(o), Sigma_n)
/// per radius n, with standard errors.
struct ObstructionReport {
  int d = 3;
  std::optional<double> theta;
  std::string process;
  std::vector<int> n_values;
  std::vector<double> var_ratio;
  std::vector<double> var_ratio_se;
  std::vector<double> root_corr;
  std::vector<double> root_corr_se;
  Classification classification = Classification::inconclusive;
};

/// Monte Carlo sphere-sum statistics over `replicas` independent draws;
/// replica i uses derive_substream(seed, i), so the result does not depend
/// on `threads`. Throws std::domain_error if sigma(o) never varies.
ObstructionReport sphere_sum_stats(const ConfigurationSampler &sampler, const TreeBall &ball,
                                   std::span<const int> n_values, std::size_t replicas,
                                   std::uint64_t seed, unsigned threads = 1);

/// Closed-form (variance ratio, root-sphere correlation) for the Markov chain.
std::pair<double, double> mc_exact_stats(int d, double theta, int n);

/// Report built from mc_exact_stats with zero standard errors.
ObstructionReport mc_exact_report(int d, double theta, std::span<const int> n_values);

struct ClassifierConfig {
  double growth_threshold = std::log(1.05);
  double corr_floor = 0.05;
  double z = 1.959963984540054; // two-sided 95%
};

/// Finite-sample reading of the obstruction criterion. "obstructed" needs
/// the log variance ratio to grow in n faster than the threshold (lower 95%
/// bound of the regression slope) and |root_corr| - 3 SE above the floor at
/// the two largest radii. "not_obstructed" holds when the slope's upper
/// bound stays below the threshold, or when |root_corr| + 3 SE at the
/// largest radius is below the floor.
Classification classify(const ObstructionReport &report, const ClassifierConfig &config = {});

} // namespace fiid
