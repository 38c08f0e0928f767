#include "fiid/processes.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <utility>

namespace fiid {
namespace {

std::int8_t sign_of_half(double u) { return u > 0.5 ? 1 : -1; }

/// One outward matching round restricted to edges flagged in `available`.
MatchingConfig sample_matching_round(const TreeBall &ball, std::span<const std::uint8_t> available,
                                     Rng &rng) {
  MatchingConfig config;
  config.in_matching.assign(ball.edge_count(), 0);
  std::vector<std::uint8_t> covered(ball.vertex_count(), 0);
  std::vector<Vertex> options;
  for (Vertex v = 0; v < static_cast<Vertex>(ball.vertex_count()); ++v) {
    if (covered[v] || ball.depth(v) == ball.radius())
      continue;
    options.clear();
    for (Vertex c : ball.children(v))
      if (available[TreeBall::edge_of(c)])
        options.push_back(c);
    if (options.empty())
      continue;
    std::uniform_int_distribution<std::size_t> pick(0, options.size() - 1);
    const Vertex c = options[pick(rng)];
    config.in_matching[TreeBall::edge_of(c)] = 1;
    covered[v] = 1;
    covered[c] = 1;
  }
  return config;
}

} // namespace

UniformLabelField sample_uniform_labels(const TreeBall &ball, Rng &rng) {
  UniformLabelField labels;
  labels.vertex_labels_1.resize(ball.vertex_count());
  labels.vertex_labels_2.resize(ball.vertex_count());
  labels.edge_labels.resize(ball.edge_count());
  for (double &u : labels.vertex_labels_1)
    u = uniform01(rng);
  for (double &u : labels.vertex_labels_2)
    u = uniform01(rng);
  for (double &u : labels.edge_labels)
    u = uniform01(rng);
  return labels;
}

UniformLabelField sample_uniform_labels(const TreeBall &ball, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  return sample_uniform_labels(ball, rng);
}

SpinField sample_mc_direct(const TreeBall &ball, const MarkovParams &params, Rng &rng) {
  SpinField field;
  field.values.resize(ball.vertex_count());
  const double keep = params.keep_probability();
  field.values[0] = uniform01(rng) < 0.5 ? 1 : -1;
  for (Vertex v = 1; v < static_cast<Vertex>(ball.vertex_count()); ++v) {
    const std::int8_t up = field.values[ball.parent(v)];
    field.values[v] = uniform01(rng) < keep ? up : static_cast<std::int8_t>(-up);
  }
  return field;
}

SpinField sample_mc_direct(const TreeBall &ball, const MarkovParams &params, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  return sample_mc_direct(ball, params, rng);
}

SpinField sample_mc_cluster(const TreeBall &ball, const MarkovParams &params,
                            const UniformLabelField &labels) {
  const std::size_t n = ball.vertex_count();
  const double threshold = std::abs(params.theta);

  // Open clusters are subtrees; label each by its topmost vertex.
  std::vector<Vertex> cluster(n);
  cluster[0] = 0;
  for (Vertex v = 1; v < static_cast<Vertex>(n); ++v)
    cluster[v] = labels.edge_labels[TreeBall::edge_of(v)] <= threshold ? cluster[ball.parent(v)] : v;

  // x_C minimizes U1 over the cluster, ties to the smaller index.
  std::vector<Vertex> leader(n, kNoParent);
  for (Vertex v = 0; v < static_cast<Vertex>(n); ++v) {
    Vertex &best = leader[cluster[v]];
    if (best == kNoParent || labels.vertex_labels_1[v] < labels.vertex_labels_1[best])
      best = v;
  }

  SpinField field;
  field.values.resize(n);
  for (Vertex v = 0; v < static_cast<Vertex>(n); ++v) {
    const Vertex x = leader[cluster[v]];
    std::int8_t spin = sign_of_half(labels.vertex_labels_2[x]);
    // Inside a subtree cluster the path from x to v has length of the same
    // parity as the depth difference.
    if (params.theta < 0 && (ball.depth(v) - ball.depth(x)) % 2 != 0)
      spin = static_cast<std::int8_t>(-spin);
    field.values[v] = spin;
  }
  return field;
}

MatchingConfig sample_perfect_matching(const TreeBall &ball, Rng &rng) {
  const std::vector<std::uint8_t> all(ball.edge_count(), 1);
  return sample_matching_round(ball, all, rng);
}

MatchingConfig sample_perfect_matching(const TreeBall &ball, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  return sample_perfect_matching(ball, rng);
}

ColoringConfig sample_proper_coloring(const TreeBall &ball, Rng &rng) {
  const int d = ball.degree();
  ColoringConfig config;
  config.color.assign(ball.edge_count(), 0);
  std::vector<std::uint8_t> palette;
  for (Vertex v = 0; v < static_cast<Vertex>(ball.vertex_count()); ++v) {
    if (ball.depth(v) == ball.radius())
      continue;
    const int taken = v == ball.root() ? 0 : config.color[TreeBall::edge_of(v)];
    palette.clear();
    for (int c = 1; c <= d; ++c)
      if (c != taken)
        palette.push_back(static_cast<std::uint8_t>(c));
    std::shuffle(palette.begin(), palette.end(), rng);
    std::size_t i = 0;
    for (Vertex c : ball.children(v))
      config.color[TreeBall::edge_of(c)] = palette[i++];
  }
  return config;
}

ColoringConfig sample_proper_coloring(const TreeBall &ball, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  return sample_proper_coloring(ball, rng);
}

MatchingListConfig sample_matching_list(const TreeBall &ball, const UniformLabelField &labels,
                                        std::uint64_t seed) {
  Rng rng = make_rng(seed);
  const std::size_t n = ball.vertex_count();
  const std::size_t m = ball.edge_count();
  MatchingListConfig out;

  std::vector<std::uint8_t> available(m, 1);
  for (int i = 0; i < ball.degree() - 2; ++i) {
    out.matchings.push_back(sample_matching_round(ball, available, rng));
    for (std::size_t e = 0; e < m; ++e)
      if (out.matchings.back().in_matching[e])
        available[e] = 0;
  }

  // Leftover components are subtrees of paths; name each by its top vertex.
  std::vector<std::int32_t> vertex_component(n);
  std::vector<Vertex> tops;
  for (Vertex v = 0; v < static_cast<Vertex>(n); ++v) {
    if (v != ball.root() && available[TreeBall::edge_of(v)]) {
      vertex_component[v] = vertex_component[ball.parent(v)];
    } else {
      vertex_component[v] = static_cast<std::int32_t>(tops.size());
      tops.push_back(v);
    }
  }

  // Alternate the two matchings of each path: at a top vertex the smaller
  // child edge starts matching 0; elsewhere a child edge takes the opposite
  // matching of the parent edge.
  std::vector<std::uint8_t> side(m, 0);
  out.component.assign(m, -1);
  for (Vertex v = 0; v < static_cast<Vertex>(n); ++v) {
    const bool top = v == ball.root() || !available[TreeBall::edge_of(v)];
    std::uint8_t next = top ? 0 : static_cast<std::uint8_t>(1 - side[TreeBall::edge_of(v)]);
    for (Vertex c : ball.children(v)) {
      const std::size_t e = TreeBall::edge_of(c);
      if (!available[e])
        continue;
      out.component[e] = vertex_component[v];
      side[e] = next;
      if (top)
        next = 1;
    }
  }

  // Leftover edges at a vertex, in increasing edge index.
  auto leftover_edges = [&](Vertex v) {
    std::array<std::size_t, 2> found{};
    std::size_t count = 0;
    if (v != ball.root() && available[TreeBall::edge_of(v)])
      found[count++] = TreeBall::edge_of(v);
    for (Vertex c : ball.children(v))
      if (available[TreeBall::edge_of(c)] && count < 2)
        found[count++] = TreeBall::edge_of(c);
    return std::pair{found, count};
  };
  // +1 iff (U(a), a) > (U(b), b): the edge index breaks exact label ties.
  auto label_order = [&](std::size_t a, std::size_t b) {
    const double ua = labels.edge_labels[a];
    const double ub = labels.edge_labels[b];
    return (ua > ub || (ua == ub && a > b)) ? 1 : -1;
  };

  // Each non-root component hangs below exactly one deleted edge, the parent
  // edge of its top, so one pass in top order fixes every class that the
  // ball determines. Components whose link is cut by the boundary restart at
  // class bit 0.
  std::vector<std::uint8_t> bit(tops.size(), 0);
  for (std::size_t t = 1; t < tops.size(); ++t) {
    const Vertex lower = tops[t];
    const Vertex upper = ball.parent(lower);
    const auto [near, near_count] = leftover_edges(upper);
    const auto [far, far_count] = leftover_edges(lower);
    if (near_count < 2 || far_count < 2)
      continue;
    const bool same = label_order(near[0], near[1]) * label_order(far[0], far[1]) > 0;
    const std::size_t upper_component = static_cast<std::size_t>(vertex_component[upper]);
    // class(upper, side(near0)) == class(lower, side(far0)) iff same.
    bit[t] = static_cast<std::uint8_t>(bit[upper_component] ^ side[near[0]] ^ side[far[0]] ^
                                       (same ? 0 : 1));
  }

  out.pair_class.resize(tops.size());
  for (std::size_t t = 0; t < tops.size(); ++t)
    out.pair_class[t] = static_cast<std::uint8_t>(1 + bit[t]);
  out.q_class.assign(m, 0);
  for (std::size_t e = 0; e < m; ++e)
    if (available[e])
      out.q_class[e] = static_cast<std::uint8_t>(1 + (bit[out.component[e]] ^ side[e]));
  return out;
}

bool is_interior_perfect_matching(const TreeBall &ball, const MatchingConfig &config) {
  if (config.in_matching.size() != ball.edge_count())
    return false;
  std::vector<int> cover(ball.vertex_count(), 0);
  for (std::size_t e = 0; e < ball.edge_count(); ++e) {
    if (!config.in_matching[e])
      continue;
    const Vertex c = TreeBall::child_of_edge(e);
    ++cover[c];
    ++cover[ball.parent(c)];
  }
  for (Vertex v = 0; v < static_cast<Vertex>(ball.vertex_count()); ++v) {
    if (ball.depth(v) < ball.radius() ? cover[v] != 1 : cover[v] > 1)
      return false;
  }
  return true;
}

bool is_interior_proper_coloring(const TreeBall &ball, const ColoringConfig &config) {
  const int d = ball.degree();
  if (config.color.size() != ball.edge_count())
    return false;
  for (Vertex v = 0; v < static_cast<Vertex>(ball.vertex_count()); ++v) {
    std::vector<int> seen(static_cast<std::size_t>(d) + 1, 0);
    int incident = 0;
    auto note = [&](std::size_t e) {
      const int c = config.color[e];
      if (c >= 1 && c <= d)
        ++seen[c];
      ++incident;
    };
    if (v != ball.root())
      note(TreeBall::edge_of(v));
    for (Vertex c : ball.children(v))
      note(TreeBall::edge_of(c));
    for (int c = 1; c <= d; ++c)
      if (seen[c] > 1)
        return false;
    const int distinct = static_cast<int>(std::count_if(seen.begin() + 1, seen.end(),
                                                        [](int s) { return s == 1; }));
    if (distinct != incident)
      return false; // color outside 1..d
    if (ball.depth(v) < ball.radius() && distinct != d)
      return false;
  }
  return true;
}

bool is_valid_matching_list(const TreeBall &ball, const MatchingListConfig &config) {
  const std::size_t m = ball.edge_count();
  if (config.matchings.size() != static_cast<std::size_t>(ball.degree() - 2) ||
      config.q_class.size() != m || config.component.size() != m)
    return false;
  std::vector<int> owner(m, 0);
  for (const MatchingConfig &p : config.matchings) {
    if (p.in_matching.size() != m)
      return false;
    std::vector<int> cover(ball.vertex_count(), 0);
    for (std::size_t e = 0; e < m; ++e) {
      if (!p.in_matching[e])
        continue;
      if (++owner[e] > 1)
        return false;
      const Vertex c = TreeBall::child_of_edge(e);
      if (++cover[c] > 1 || ++cover[ball.parent(c)] > 1)
        return false;
    }
  }
  for (Vertex v = 0; v < static_cast<Vertex>(ball.vertex_count()); ++v) {
    int leftover = 0;
    std::array<int, 3> classes{};
    auto note = [&](std::size_t e) {
      if (owner[e] == 0) {
        ++leftover;
        if (config.q_class[e] < 1 || config.q_class[e] > 2)
          leftover = 99;
        else
          ++classes[config.q_class[e]];
      } else if (config.q_class[e] != 0) {
        leftover = 99;
      }
    };
    if (v != ball.root())
      note(TreeBall::edge_of(v));
    for (Vertex c : ball.children(v))
      note(TreeBall::edge_of(c));
    if (leftover > 2 || (ball.depth(v) < ball.radius() && leftover != 2))
      return false;
    // The two path edges at a vertex lie in different matchings, hence in
    // different classes.
    if (classes[1] > 1 || classes[2] > 1)
      return false;
  }
  return true;
}

} // namespace fiid
