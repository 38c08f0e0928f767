#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "fiid/tree.hpp"

namespace fiid {

struct Edge {
  Vertex u;
  Vertex v;

  friend bool operator==(const Edge &, const Edge &) = default;
  friend auto operator<=>(const Edge &, const Edge &) = default;
};

/// Finite simple undirected graph in compressed adjacency form with sorted
/// neighbor lists.
class Graph {
public:
  Graph() = default;

  /// Builds the graph on `n` vertices. Throws std::domain_error on self-loops,
  /// repeated edges, or out-of-range endpoints.
  Graph(std::size_t n, std::span<const Edge> edges);

  std::size_t vertex_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const { return neighbors_.size() / 2; }

  std::span<const Vertex> neighbors(Vertex v) const {
    return {neighbors_.data() + offsets_[v], neighbors_.data() + offsets_[v + 1]};
  }
  int degree(Vertex v) const { return static_cast<int>(offsets_[v + 1] - offsets_[v]); }
  int max_degree() const;
  bool has_edge(Vertex u, Vertex v) const;

  /// All edges with u < v in lexicographic order. Position in this list is
  /// the edge index used by edge-indexed results.
  std::vector<Edge> edges() const;

private:
  std::vector<std::size_t> offsets_;
  std::vector<Vertex> neighbors_;
};

inline constexpr std::uint64_t kDefaultRejectionCap = 1'000'000;

/// Uniform simple d-regular graph: uniform pairing of the n*d half-edges,
/// rejecting the whole pairing whenever it has a loop or a repeated edge.
Graph random_regular(std::size_t n, int d, std::uint64_t seed,
                     std::uint64_t max_attempts = kDefaultRejectionCap);

/// Length of the shortest cycle; std::nullopt for forests.
std::optional<int> girth(const Graph &g);

/// Reusable breadth-first scratch space for repeated local-ball queries.
class BallScanner {
public:
  explicit BallScanner(const Graph &g);

  /// Visits the ball of radius r around x. Returns the visited vertices in
  /// breadth-first order; distance(v) is valid for them until the next scan.
  std::span<const Vertex> scan(Vertex x, int r);
  int distance(Vertex v) const { return dist_[v]; }

  /// True iff the ball of radius r around x induces a tree in which x and
  /// every vertex at distance < r has degree exactly d, i.e. the ball is
  /// rooted isomorphic to B_r of the d-regular tree.
  bool tree_like(Vertex x, int r, int d);

private:
  const Graph *g_;
  std::vector<int> dist_;
  std::vector<Vertex> order_;
};

bool ball_is_tree_like(const Graph &g, Vertex x, int r, int d);

struct TreeLikeReport {
  int r = 0;
  std::vector<std::uint8_t> tree_like_mask;
  double fraction = 0.0;
};

TreeLikeReport tree_like_report(const Graph &g, int r, int d, unsigned threads = 1);

/// Adjoins pendant trees so that every vertex of g has degree at least d and
/// every original vertex sees a full d-regular tree out to distance `depth`
/// wherever g itself is tree-like. Original vertices keep their indices;
/// added vertices follow. Vertices of degree > d are left untouched.
Graph pad_to_regular(const Graph &g, int d, int depth);

/// The tree ball as an ordinary graph (boundary vertices have degree 1).
Graph tree_ball_graph(const TreeBall &ball);

/// Edge-list text format: first line "n m", then m lines "u v" with u < v,
/// sorted lexicographically, each line terminated by '\n'.
void write_edge_list(std::ostream &out, const Graph &g);
Graph read_edge_list(std::istream &in);

} // namespace fiid
