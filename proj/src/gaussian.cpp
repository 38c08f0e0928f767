#include "fiid/gaussian.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "fiid/core_math.hpp"
#include "fiid/errors.hpp"

namespace fiid {

const char *to_string(WeightSign sign) {
  return sign == WeightSign::positive ? "positive" : "alternating";
}

BlockFactorSpec BlockFactorSpec::make(int d, int n, WeightSign sign) {
  if (d < 3)
    throw std::domain_error("block factor degree must be >= 3");
  if (n < 2)
    throw std::domain_error("block factor radius n must be >= 2");
  return {d, n, sign};
}

double BlockFactorSpec::weight(int k) const {
  const double magnitude = std::pow(d - 1.0, -0.5 * k);
  return sign == WeightSign::alternating && k % 2 != 0 ? -magnitude : magnitude;
}

double BlockFactorSpec::normalization() const {
  return 1.0 / std::sqrt(1.0 + (n - 1.0) * d / (d - 1.0));
}

Eigen::VectorXd BlockFactorSpec::scaled_weights() const {
  Eigen::VectorXd w(n);
  for (int k = 0; k < n; ++k)
    w(k) = normalization() * weight(k);
  return w;
}

double BlockFactorSpec::adjacent_correlation() const {
  return block_factor_correlation(d, n, sign == WeightSign::alternating);
}

Eigen::VectorXd standard_normals(std::size_t count, Rng &rng) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd z(static_cast<Eigen::Index>(count));
  for (Eigen::Index i = 0; i < z.size(); ++i)
    z(i) = normal(rng);
  return z;
}

GaussField evaluate_on_tree(const TreeBall &ball, const BlockFactorSpec &spec,
                            const Eigen::VectorXd &labels) {
  if (spec.d != ball.degree())
    throw std::domain_error("block factor degree differs from the tree degree");
  const int reach = spec.support_radius();
  const int max_depth = ball.radius() - reach;
  if (max_depth < 0)
    throw std::domain_error("tree ball radius " + std::to_string(ball.radius()) +
                            " is too small for a block factor of radius " + std::to_string(spec.n));
  const Eigen::VectorXd w = spec.scaled_weights();

  GaussField field;
  field.values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(ball.vertex_count()));
  field.defined_mask.assign(ball.vertex_count(), 0);
  // Depth-first walk of the support ball; `from` prevents stepping back.
  struct Frame {
    Vertex v;
    Vertex from;
    int dist;
  };
  std::vector<Frame> stack;
  const Vertex last = ball.sphere(max_depth).back();
  for (Vertex x = 0; x <= last; ++x) {
    double total = 0.0;
    stack.assign(1, {x, kNoParent, 0});
    while (!stack.empty()) {
      const Frame f = stack.back();
      stack.pop_back();
      total += w(f.dist) * labels(f.v);
      if (f.dist == reach)
        continue;
      ball.for_each_neighbor(f.v, [&](Vertex y) {
        if (y != f.from)
          stack.push_back({y, f.v, f.dist + 1});
      });
    }
    field.values(x) = total;
    field.defined_mask[x] = 1;
  }
  return field;
}

GaussField evaluate_on_tree(const TreeBall &ball, const BlockFactorSpec &spec, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  return evaluate_on_tree(ball, spec, standard_normals(ball.vertex_count(), rng));
}

Eigen::SparseMatrix<double> adjacency_matrix(const Graph &g) {
  const auto n = static_cast<Eigen::Index>(g.vertex_count());
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(2 * g.edge_count());
  for (Vertex u = 0; u < static_cast<Vertex>(n); ++u)
    for (Vertex v : g.neighbors(u))
      entries.emplace_back(u, v, 1.0);
  Eigen::SparseMatrix<double> a(n, n);
  a.setFromTriplets(entries.begin(), entries.end());
  return a;
}

GaussField emulate_on_graph(const Graph &g, const BlockFactorSpec &spec,
                            const Eigen::VectorXd &labels, unsigned threads) {
  if (static_cast<std::size_t>(labels.size()) != g.vertex_count())
    throw std::domain_error("label vector length differs from the vertex count");
  const int reach = spec.support_radius();
  const TreeLikeReport local = tree_like_report(g, reach, spec.d, threads);
  const auto spheres = nonbacktracking_sphere_sums(g, labels, reach);
  const Eigen::VectorXd w = spec.scaled_weights();

  GaussField field;
  field.values = Eigen::VectorXd::Zero(labels.size());
  for (int k = 0; k <= reach; ++k)
    field.values += w(k) * spheres[k];
  field.defined_mask = local.tree_like_mask;
  for (Eigen::Index v = 0; v < field.values.size(); ++v)
    if (!field.defined_mask[v])
      field.values(v) = 0.0;
  return field;
}

GaussField emulate_on_graph(const Graph &g, const BlockFactorSpec &spec, std::uint64_t seed,
                            unsigned threads) {
  Rng rng = make_rng(seed);
  return emulate_on_graph(g, spec, standard_normals(g.vertex_count(), rng), threads);
}

double distance_weighted_sum(const Graph &g, Vertex x, const Eigen::VectorXd &labels,
                             std::span<const double> weights, int radius, int d) {
  if (radius < 0 || weights.size() <= static_cast<std::size_t>(radius))
    throw std::domain_error("need one weight per distance 0..radius");
  BallScanner scanner(g);
  if (!scanner.tree_like(x, radius, d))
    throw ContractError("ball of radius " + std::to_string(radius) + " around vertex " +
                        std::to_string(x) + " is not tree-like");
  double total = 0.0;
  for (Vertex y : scanner.scan(x, radius))
    total += weights[static_cast<std::size_t>(scanner.distance(y))] * labels(y);
  return total;
}

SpinField sign_field(const GaussField &field, std::uint64_t tie_seed) {
  Rng rng = make_rng(tie_seed);
  SpinField spins;
  spins.values.resize(static_cast<std::size_t>(field.values.size()));
  for (Eigen::Index v = 0; v < field.values.size(); ++v) {
    const double x = field.values(v);
    if (x > 0.0)
      spins.values[v] = 1;
    else if (x < 0.0)
      spins.values[v] = -1;
    else
      spins.values[v] = uniform01(rng) < 0.5 ? 1 : -1;
  }
  return spins;
}

} // namespace fiid
