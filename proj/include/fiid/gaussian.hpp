#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "fiid/graph.hpp"
#include "fiid/processes.hpp"
#include "fiid/seeding.hpp"
#include "fiid/tree.hpp"

namespace fiid {

/// `alternating` weights (-1)^k (d-1)^(-k/2) give negative adjacent
/// correlation (max-cut direction); `positive` weights (d-1)^(-k/2) give the
/// depth-parity image with positive adjacent correlation (min-cut direction).
enum class WeightSign { positive, alternating };

const char *to_string(WeightSign sign);

/// Normalized distance-weighted sum of IID standard normals over the ball of
/// radius n-1 around a vertex:
///   F = c * sum_{dist(x,y) < n} weight(dist(x,y)) Z_y,
///   c = 1/sqrt(1 + (n-1) d/(d-1)),
/// which has unit variance on the d-regular tree.
struct BlockFactorSpec {
  int d = 3;
  int n = 2;
  WeightSign sign = WeightSign::alternating;

  static BlockFactorSpec make(int d, int n, WeightSign sign);

  double weight(int k) const;
  double normalization() const;
  /// normalization() * weight(k) for k = 0..n-1.
  Eigen::VectorXd scaled_weights() const;
  /// Correlation of the factor at two adjacent tree vertices.
  double adjacent_correlation() const;
  /// Largest distance that enters the sum.
  int support_radius() const { return n - 1; }
};

struct GaussField {
  Eigen::VectorXd values;
  std::vector<std::uint8_t> defined_mask;
};

/// Vector of IID standard normals drawn in index order from one stream.
Eigen::VectorXd standard_normals(std::size_t count, Rng &rng);

/// Block factor on a tree ball, defined at every vertex whose support ball
/// lies inside the tree ball (depth <= radius - (n-1)).
GaussField evaluate_on_tree(const TreeBall &ball, const BlockFactorSpec &spec,
                            const Eigen::VectorXd &labels);
GaussField evaluate_on_tree(const TreeBall &ball, const BlockFactorSpec &spec, std::uint64_t seed);

/// Emulates the block factor on a finite graph: defined where the ball of
/// radius n-1 is rooted isomorphic to the tree ball, zero elsewhere.
GaussField emulate_on_graph(const Graph &g, const BlockFactorSpec &spec,
                            const Eigen::VectorXd &labels, unsigned threads = 1);
GaussField emulate_on_graph(const Graph &g, const BlockFactorSpec &spec, std::uint64_t seed,
                            unsigned threads = 1);

/// sum_{dist(x,y) <= radius} weights[dist] * labels[y] by breadth-first
/// expansion. Throws ContractError unless the radius-ball around x is tree-like.
double distance_weighted_sum(const Graph &g, Vertex x, const Eigen::VectorXd &labels,
                             std::span<const double> weights, int radius, int d);

Eigen::SparseMatrix<double> adjacency_matrix(const Graph &g);

/// Non-backtracking sphere sums S_0..S_radius of `labels` (one column per
/// label draw):
///   S_0 = Z, S_1 = A Z, S_2 = A S_1 - D S_0, S_k = A S_{k-1} - (D - I) S_{k-2}.
/// Row x of S_k sums Z over the endpoints of non-backtracking walks of length
/// k from x, which is the distance-k sphere sum wherever the ball is a tree.
template <class Derived>
std::vector<Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Derived::ColsAtCompileTime>>
nonbacktracking_sphere_sums(const Graph &g, const Eigen::MatrixBase<Derived> &labels, int radius) {
  using Scalar = typename Derived::Scalar;
  using Block = Eigen::Matrix<Scalar, Eigen::Dynamic, Derived::ColsAtCompileTime>;
  const Eigen::SparseMatrix<Scalar> adjacency = adjacency_matrix(g).template cast<Scalar>();
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> degree(static_cast<Eigen::Index>(g.vertex_count()));
  for (Eigen::Index v = 0; v < degree.size(); ++v)
    degree(v) = static_cast<Scalar>(g.degree(static_cast<Vertex>(v)));

  std::vector<Block> sums;
  sums.reserve(static_cast<std::size_t>(radius) + 1);
  sums.emplace_back(labels);
  if (radius >= 1)
    sums.emplace_back(adjacency * sums[0]);
  for (int k = 2; k <= radius; ++k) {
    const auto backtrack = k == 2 ? degree : (degree.array() - Scalar(1)).matrix().eval();
    sums.emplace_back(adjacency * sums[k - 1] - backtrack.asDiagonal() * sums[k - 2]);
  }
  return sums;
}

/// +1 for positive values, -1 for negative, an independent fair sign from
/// `tie_seed` for exact zeros (including undefined vertices).
SpinField sign_field(const GaussField &field, std::uint64_t tie_seed);

} // namespace fiid
