#pragma once

#include <cstddef>
#include <cstdint>
#include <ranges>
#include <vector>

namespace fiid {

using Vertex = std::int32_t;
inline constexpr Vertex kNoParent = -1;

/// Contiguous block of vertex indices [first, last).
using VertexRange = std::ranges::iota_view<Vertex, Vertex>;

/// Ball of radius r around the root of the d-regular tree.
///
/// Vertices are numbered breadth-first, so depth is nondecreasing in the
/// index, every sphere is a contiguous range, and the children of a vertex
/// are contiguous. Each non-root vertex v owns the edge {parent(v), v}, which
/// gets edge index v - 1; edge-indexed arrays therefore have vertex_count()-1
/// entries.
class TreeBall {
public:
  static constexpr std::uint64_t kDefaultVertexBudget = std::uint64_t{1} << 24;

  TreeBall(int d, int radius, std::uint64_t vertex_budget = kDefaultVertexBudget);

  int degree() const { return d_; }
  int radius() const { return radius_; }
  std::size_t vertex_count() const { return parent_.size(); }
  std::size_t edge_count() const { return parent_.size() - 1; }

  Vertex root() const { return 0; }
  Vertex parent(Vertex v) const { return parent_[check(v)]; }
  int depth(Vertex v) const { return depth_[check(v)]; }
  VertexRange children(Vertex v) const {
    check(v);
    return {child_begin_[v], child_end_[v]};
  }
  std::size_t child_count(Vertex v) const {
    check(v);
    return static_cast<std::size_t>(child_end_[v] - child_begin_[v]);
  }

  /// Vertices at distance n from the root.
  VertexRange sphere(int n) const;

  /// The edge {parent(child), child}.
  static std::size_t edge_of(Vertex child) { return static_cast<std::size_t>(child) - 1; }
  static Vertex child_of_edge(std::size_t edge) { return static_cast<Vertex>(edge + 1); }

  /// Calls f(w) for every neighbor w of v inside the ball.
  template <class F> void for_each_neighbor(Vertex v, F &&f) const {
    if (parent_[v] != kNoParent)
      f(parent_[v]);
    for (Vertex c = child_begin_[v]; c < child_end_[v]; ++c)
      f(c);
  }

private:
  Vertex check(Vertex v) const;

  int d_;
  int radius_;
  std::vector<Vertex> parent_;
  std::vector<int> depth_;
  std::vector<Vertex> child_begin_;
  std::vector<Vertex> child_end_;
  std::vector<Vertex> sphere_begin_; // radius + 2 entries
};

inline TreeBall build_tree_ball(int d, int radius,
                                std::uint64_t vertex_budget = TreeBall::kDefaultVertexBudget) {
  return TreeBall(d, radius, vertex_budget);
}

/// Graph distance through the lowest common ancestor.
int tree_distance(const TreeBall &ball, Vertex x, Vertex y);

VertexRange sphere_vertices(const TreeBall &ball, int n);

} // namespace fiid
