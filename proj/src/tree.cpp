#include "fiid/tree.hpp"

#include <stdexcept>
#include <string>

#include "fiid/core_math.hpp"
#include "fiid/errors.hpp"

namespace fiid {

TreeBall::TreeBall(int d, int radius, std::uint64_t vertex_budget) : d_(d), radius_(radius) {
  if (d < 3)
    throw std::domain_error("tree degree must be >= 3");
  if (radius < 0)
    throw std::domain_error("tree radius must be >= 0");

  std::uint64_t total = 0;
  for (int k = 0; k <= radius; ++k) {
    total += sphere_size(d, k);
    if (total > vertex_budget)
      break;
  }
  if (total > vertex_budget || total > static_cast<std::uint64_t>(INT32_MAX))
    throw ResourceError("tree ball B_" + std::to_string(radius) + " of T_" + std::to_string(d) +
                            " exceeds the vertex budget of " + std::to_string(vertex_budget),
                        ball_size(d, radius));

  const auto n = static_cast<std::size_t>(total);
  parent_.resize(n);
  depth_.resize(n);
  child_begin_.resize(n);
  child_end_.resize(n);
  sphere_begin_.resize(static_cast<std::size_t>(radius) + 2);

  parent_[0] = kNoParent;
  depth_[0] = 0;
  sphere_begin_[0] = 0;
  sphere_begin_[1] = 1;
  Vertex next = 1;
  for (Vertex v = 0; v < static_cast<Vertex>(n); ++v) {
    const int k = depth_[v];
    const int fanout = k == radius ? 0 : (k == 0 ? d : d - 1);
    child_begin_[v] = next;
    for (int i = 0; i < fanout; ++i, ++next) {
      parent_[next] = v;
      depth_[next] = k + 1;
    }
    child_end_[v] = next;
    if (k < radius && (v + 1 == static_cast<Vertex>(n) || depth_[v + 1] != k))
      sphere_begin_[k + 2] = next;
  }
}

Vertex TreeBall::check(Vertex v) const {
  if (v < 0 || static_cast<std::size_t>(v) >= parent_.size())
    throw std::domain_error("vertex index " + std::to_string(v) + " outside the tree ball");
  return v;
}

VertexRange TreeBall::sphere(int n) const {
  if (n < 0 || n > radius_)
    throw std::domain_error("sphere radius " + std::to_string(n) + " outside [0, " +
                            std::to_string(radius_) + "]");
  return {sphere_begin_[n], sphere_begin_[n + 1]};
}

int tree_distance(const TreeBall &ball, Vertex x, Vertex y) {
  int dx = ball.depth(x);
  int dy = ball.depth(y);
  const int total = dx + dy;
  while (dx > dy) {
    x = ball.parent(x);
    --dx;
  }
  while (dy > dx) {
    y = ball.parent(y);
    --dy;
  }
  while (x != y) {
    x = ball.parent(x);
    y = ball.parent(y);
    --dx;
  }
  return total - 2 * dx;
}

VertexRange sphere_vertices(const TreeBall &ball, int n) { return ball.sphere(n); }

} // namespace fiid
