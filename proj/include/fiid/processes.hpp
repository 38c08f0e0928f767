#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fiid/core_math.hpp"
#include "fiid/seeding.hpp"
#include "fiid/tree.hpp"

namespace fiid {

/// Spins in {-1, +1}, indexed by vertex (tree balls: breadth-first order).
struct SpinField {
  std::vector<std::int8_t> values;
};

/// IID uniform [0, 1] labels: two per vertex and one per edge.
struct UniformLabelField {
  std::vector<double> vertex_labels_1;
  std::vector<double> vertex_labels_2;
  std::vector<double> edge_labels;
};

/// Edge-indexed membership flags of a matching on a tree ball.
struct MatchingConfig {
  std::vector<std::uint8_t> in_matching;
};

/// Edge-indexed colors in 1..d.
struct ColoringConfig {
  std::vector<std::uint8_t> color;
};

/// Disjoint matchings P_1..P_{d-2} plus the leftover union of paths, whose
/// two matchings per path are assigned to the unordered pair {Q_1, Q_2}.
struct MatchingListConfig {
  std::vector<MatchingConfig> matchings;
  /// Per edge: index of the leftover path component, or -1 for P edges.
  std::vector<std::int32_t> component;
  /// Per edge: 1 or 2 for leftover edges (the Q class), 0 for P edges.
  std::vector<std::uint8_t> q_class;
  /// Per component: class of its first matching (the one holding the
  /// smaller-indexed edge at the component's top vertex); the other matching
  /// of the component has the other class.
  std::vector<std::uint8_t> pair_class;
};

UniformLabelField sample_uniform_labels(const TreeBall &ball, Rng &rng);
UniformLabelField sample_uniform_labels(const TreeBall &ball, std::uint64_t seed);

/// Tree-indexed Markov chain sampled outward from a uniform root spin.
SpinField sample_mc_direct(const TreeBall &ball, const MarkovParams &params, Rng &rng);
SpinField sample_mc_direct(const TreeBall &ball, const MarkovParams &params, std::uint64_t seed);

/// Same law through Bernoulli(|theta|) bond percolation: each open cluster
/// takes the spin sgn(U2(x_C) - 1/2) at its minimum-U1 vertex x_C, constant
/// across the cluster for theta >= 0 and alternating for theta < 0.
SpinField sample_mc_cluster(const TreeBall &ball, const MarkovParams &params,
                            const UniformLabelField &labels);

/// Outward sampler for the invariant perfect matching: the root matches to a
/// uniform neighbor, and every still-unmatched vertex below the boundary
/// matches to a uniform child.
MatchingConfig sample_perfect_matching(const TreeBall &ball, Rng &rng);
MatchingConfig sample_perfect_matching(const TreeBall &ball, std::uint64_t seed);

/// Outward sampler for the invariant proper d-edge-coloring.
ColoringConfig sample_proper_coloring(const TreeBall &ball, Rng &rng);
ColoringConfig sample_proper_coloring(const TreeBall &ball, std::uint64_t seed);

/// Peels d-2 perfect matchings off the ball, then pairs the matchings of the
/// leftover paths across deleted edges with the edge-label sign rule.
MatchingListConfig sample_matching_list(const TreeBall &ball, const UniformLabelField &labels,
                                        std::uint64_t seed);

/// Matching that is perfect below the boundary: every vertex of depth <
/// radius is covered exactly once, boundary vertices at most once.
bool is_interior_perfect_matching(const TreeBall &ball, const MatchingConfig &config);

/// Proper coloring using all d colors at every vertex below the boundary.
bool is_interior_proper_coloring(const TreeBall &ball, const ColoringConfig &config);

/// Edge-disjoint matchings whose complement has degree <= 2 everywhere and
/// exactly 2 below the boundary, with the two matchings of every leftover
/// component in distinct classes.
bool is_valid_matching_list(const TreeBall &ball, const MatchingListConfig &config);

} // namespace fiid
