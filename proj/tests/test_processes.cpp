#include <doctest.h>

#include <array>
#include <cmath>
#include <map>
#include <vector>

#include "fiid/processes.hpp"

using namespace fiid;

namespace {

/// 4-bit code of the spins on B_1 (root first).
int b1_code(const SpinField &f) {
  int code = 0;
  for (int v = 0; v < 4; ++v)
    code |= (f.values[static_cast<std::size_t>(v)] > 0 ? 1 : 0) << v;
  return code;
}

/// Exact law of the chain on B_1 of the cubic tree.
std::array<double, 16> b1_law(double theta) {
  std::array<double, 16> p{};
  const double keep = 0.5 * (1.0 + theta);
  for (int code = 0; code < 16; ++code) {
    double q = 0.5;
    for (int v = 1; v < 4; ++v)
      q *= ((code >> v) & 1) == (code & 1) ? keep : 1.0 - keep;
    p[static_cast<std::size_t>(code)] = q;
  }
  return p;
}

double total_variation(const std::array<double, 16> &a, const std::array<double, 16> &b) {
  double tv = 0.0;
  for (std::size_t i = 0; i < 16; ++i)
    tv += std::abs(a[i] - b[i]);
  return 0.5 * tv;
}

bool within(double observed, double expected, double se, double k) {
  return std::abs(observed - expected) <= k * se;
}

} // namespace

TEST_CASE("uniform labels cover the ball") {
  const TreeBall ball(3, 3);
  const auto labels = sample_uniform_labels(ball, 5);
  CHECK(labels.vertex_labels_1.size() == ball.vertex_count());
  CHECK(labels.vertex_labels_2.size() == ball.vertex_count());
  CHECK(labels.edge_labels.size() == ball.edge_count());
  for (double u : labels.edge_labels)
    CHECK((u >= 0.0 && u <= 1.0));
}

TEST_CASE("direct chain sampler extremes") {
  const TreeBall ball(3, 4);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto same = sample_mc_direct(ball, MarkovParams::make(3, 1.0), seed);
    const auto alt = sample_mc_direct(ball, MarkovParams::make(3, -1.0), seed);
    for (Vertex v = 0; v < static_cast<Vertex>(ball.vertex_count()); ++v) {
      CHECK(same.values[v] == same.values[0]);
      CHECK(alt.values[v] == (ball.depth(v) % 2 == 0 ? alt.values[0] : -alt.values[0]));
    }
  }
}

TEST_CASE("direct chain sampler edge agreement") {
  const TreeBall ball(3, 1);
  const auto params = MarkovParams::make(3, 0.5);
  Rng rng = make_rng(99);
  const int samples = 100'000;
  int agree = 0;
  for (int i = 0; i < samples; ++i) {
    const auto f = sample_mc_direct(ball, params, rng);
    agree += f.values[0] == f.values[1];
  }
  const double p = static_cast<double>(agree) / samples;
  CHECK(within(p, 0.75, std::sqrt(0.75 * 0.25 / samples), 3.0));
}

TEST_CASE("direct chain sampler distance correlation") {
  const TreeBall ball(3, 3);
  const auto params = MarkovParams::make(3, 0.5);
  Rng rng = make_rng(1234);
  const int samples = 100'000;
  const Vertex far = *sphere_vertices(ball, 3).begin();
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < samples; ++i) {
    const auto f = sample_mc_direct(ball, params, rng);
    const double x = f.values[0] * f.values[far];
    sum += x;
    sum_sq += x * x;
  }
  const double mean = sum / samples;
  const double se = std::sqrt((sum_sq / samples - mean * mean) / samples);
  CHECK(within(mean, 0.125, se, 4.0));
}

TEST_CASE("cluster sampler extremes") {
  const TreeBall ball(3, 3);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto labels = sample_uniform_labels(ball, seed);
    const auto one = sample_mc_cluster(ball, MarkovParams::make(3, 1.0), labels);
    for (auto s : one.values)
      CHECK(s == one.values[0]);
    // theta = 0: every vertex is its own cluster and reads its own label.
    const auto iid = sample_mc_cluster(ball, MarkovParams::make(3, 0.0), labels);
    for (std::size_t v = 0; v < ball.vertex_count(); ++v)
      CHECK(iid.values[v] == (labels.vertex_labels_2[v] > 0.5 ? 1 : -1));
  }
}

TEST_CASE("direct and cluster samplers share the law on B_1") {
  const TreeBall ball(3, 1);
  const int samples = 1'000'000;
  for (double theta : {-0.6, 0.4, 0.9}) {
    const auto params = MarkovParams::make(3, theta);
    std::array<double, 16> direct{}, cluster{};
    Rng rng = make_rng(derive_substream(77, static_cast<std::uint64_t>(theta * 10 + 10)));
    for (int i = 0; i < samples; ++i) {
      direct[static_cast<std::size_t>(b1_code(sample_mc_direct(ball, params, rng)))] += 1.0 / samples;
      const auto labels = sample_uniform_labels(ball, rng);
      cluster[static_cast<std::size_t>(b1_code(sample_mc_cluster(ball, params, labels)))] +=
          1.0 / samples;
    }
    const auto exact = b1_law(theta);
    CAPTURE(theta);
    CHECK(total_variation(direct, cluster) < 0.01);
    CHECK(total_variation(direct, exact) < 0.01);
    CHECK(total_variation(cluster, exact) < 0.01);
  }
}

TEST_CASE("perfect matching: root edge marginal") {
  const TreeBall ball(3, 1);
  Rng rng = make_rng(5);
  const int samples = 100'000;
  std::array<int, 3> hits{};
  for (int i = 0; i < samples; ++i) {
    const auto m = sample_perfect_matching(ball, rng);
    int count = 0;
    for (std::size_t e = 0; e < 3; ++e) {
      count += m.in_matching[e];
      hits[e] += m.in_matching[e];
    }
    CHECK(count == 1);
  }
  const double se = std::sqrt((1.0 / 3.0) * (2.0 / 3.0) / samples);
  for (int h : hits)
    CHECK(within(static_cast<double>(h) / samples, 1.0 / 3.0, se, 3.0));
}

TEST_CASE("perfect matching: deeper edge marginal against the choice tree") {
  // Enumerate the sampler's choices on B_2 of the cubic tree: the root picks
  // one of its 3 children, then each depth-1 vertex v holds a child bit. The
  // bit of the root's partner is never read, so weighting all 8 bit patterns
  // equally marginalizes it out.
  const TreeBall ball(3, 2);
  const std::size_t target = TreeBall::edge_of(*ball.children(1).begin());
  double exact = 0.0;
  for (int root_pick = 1; root_pick <= 3; ++root_pick)
    for (int bits = 0; bits < 8; ++bits)
      if (root_pick != 1 && (bits & 1) == 0)
        exact += (1.0 / 3.0) * (1.0 / 8.0);
  CHECK(exact == doctest::Approx(1.0 / 3.0));

  Rng rng = make_rng(8);
  const int samples = 100'000;
  int hits = 0;
  for (int i = 0; i < samples; ++i) {
    const auto m = sample_perfect_matching(ball, rng);
    CHECK(is_interior_perfect_matching(ball, m));
    hits += m.in_matching[target];
  }
  CHECK(within(static_cast<double>(hits) / samples, exact, std::sqrt(exact * (1 - exact) / samples), 4.0));
}

TEST_CASE("perfect matching invariant on every run") {
  for (int d : {3, 4, 5})
    for (std::uint64_t seed = 0; seed < 200; ++seed)
      CHECK(is_interior_perfect_matching(TreeBall(d, 4), sample_perfect_matching(TreeBall(d, 4), seed)));
}

TEST_CASE("matching validator rejects bad configurations") {
  const TreeBall ball(3, 2);
  MatchingConfig empty{std::vector<std::uint8_t>(ball.edge_count(), 0)};
  CHECK_FALSE(is_interior_perfect_matching(ball, empty));
  auto twice = sample_perfect_matching(ball, 1);
  for (std::size_t e = 0; e < 3; ++e)
    twice.in_matching[e] = 1;
  CHECK_FALSE(is_interior_perfect_matching(ball, twice));
}

TEST_CASE("proper coloring: root permutations are uniform") {
  const TreeBall ball(3, 1);
  Rng rng = make_rng(17);
  const int samples = 100'000;
  std::map<std::array<int, 3>, int> counts;
  for (int i = 0; i < samples; ++i) {
    const auto c = sample_proper_coloring(ball, rng);
    ++counts[{c.color[0], c.color[1], c.color[2]}];
  }
  CHECK(counts.size() == 6);
  const double se = std::sqrt((1.0 / 6.0) * (5.0 / 6.0) / samples);
  for (const auto &[perm, count] : counts) {
    CHECK(perm[0] != perm[1]);
    CHECK(perm[1] != perm[2]);
    CHECK(perm[0] != perm[2]);
    CHECK(within(static_cast<double>(count) / samples, 1.0 / 6.0, se, 3.0));
  }
}

TEST_CASE("proper coloring: deeper edge color is uniform") {
  // Brute force over the construction: the root permutation fixes the color
  // c of edge (0,1); vertex 1 permutes the two remaining colors uniformly.
  const TreeBall ball(3, 2);
  const std::size_t target = TreeBall::edge_of(*ball.children(1).begin());
  std::array<double, 4> exact{};
  for (int c = 1; c <= 3; ++c)
    for (int other = 1; other <= 3; ++other)
      if (other != c)
        exact[static_cast<std::size_t>(other)] += (1.0 / 3.0) * 0.5;
  for (int c = 1; c <= 3; ++c)
    CHECK(exact[static_cast<std::size_t>(c)] == doctest::Approx(1.0 / 3.0));

  Rng rng = make_rng(23);
  const int samples = 100'000;
  std::array<int, 4> counts{};
  for (int i = 0; i < samples; ++i)
    ++counts[sample_proper_coloring(ball, rng).color[target]];
  const double se = std::sqrt((1.0 / 3.0) * (2.0 / 3.0) / samples);
  for (int c = 1; c <= 3; ++c)
    CHECK(within(static_cast<double>(counts[static_cast<std::size_t>(c)]) / samples, 1.0 / 3.0, se, 4.0));
}

TEST_CASE("proper coloring invariant on every run") {
  for (int d : {3, 4, 6})
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      const TreeBall ball(d, 3);
      CHECK(is_interior_proper_coloring(ball, sample_proper_coloring(ball, seed)));
    }
  const TreeBall ball(3, 2);
  auto bad = sample_proper_coloring(ball, 3);
  bad.color[1] = bad.color[0];
  CHECK_FALSE(is_interior_proper_coloring(ball, bad));
}

TEST_CASE("matching list invariants on every run") {
  for (int d : {3, 4, 5})
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      const TreeBall ball(d, 3);
      const auto labels = sample_uniform_labels(ball, derive_substream(seed, 0));
      const auto config = sample_matching_list(ball, labels, derive_substream(seed, 1));
      CAPTURE(d);
      CAPTURE(seed);
      REQUIRE(config.matchings.size() == static_cast<std::size_t>(d - 2));
      CHECK(is_valid_matching_list(ball, config));
      // The two matchings of every path carry distinct classes.
      for (std::size_t e = 0; e < ball.edge_count(); ++e) {
        const bool leftover = config.component[e] >= 0;
        bool in_some = false;
        for (const auto &p : config.matchings)
          in_some = in_some || p.in_matching[e];
        CHECK(leftover != in_some);
      }
    }
}

TEST_CASE("matching list pairs classes across deleted edges by the label rule") {
  const TreeBall ball(3, 4);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto labels = sample_uniform_labels(ball, derive_substream(seed, 0));
    const auto config = sample_matching_list(ball, labels, derive_substream(seed, 1));
    auto path_edges = [&](Vertex v) {
      std::vector<std::size_t> out;
      if (v != ball.root() && config.component[TreeBall::edge_of(v)] >= 0)
        out.push_back(TreeBall::edge_of(v));
      for (Vertex c : ball.children(v))
        if (config.component[TreeBall::edge_of(c)] >= 0)
          out.push_back(TreeBall::edge_of(c));
      return out;
    };
    int checked = 0;
    for (Vertex lower = 1; lower < static_cast<Vertex>(ball.vertex_count()); ++lower) {
      if (config.component[TreeBall::edge_of(lower)] >= 0)
        continue; // a path edge, not a deleted one
      const auto near = path_edges(ball.parent(lower));
      const auto far = path_edges(lower);
      if (near.size() != 2 || far.size() != 2)
        continue;
      const double a = labels.edge_labels[near[0]] - labels.edge_labels[near[1]];
      const double b = labels.edge_labels[far[0]] - labels.edge_labels[far[1]];
      const bool same_class = config.q_class[near[0]] == config.q_class[far[0]];
      CHECK(same_class == (a * b > 0));
      ++checked;
    }
    CHECK(checked > 0);
  }
}

TEST_CASE("matching list validator rejects overlaps") {
  const TreeBall ball(4, 2);
  const auto labels = sample_uniform_labels(ball, 1);
  auto config = sample_matching_list(ball, labels, 2);
  REQUIRE(is_valid_matching_list(ball, config));
  config.matchings[1] = config.matchings[0];
  CHECK_FALSE(is_valid_matching_list(ball, config));
}
