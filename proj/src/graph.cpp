#include "fiid/graph.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "fiid/errors.hpp"
#include "fiid/parallel.hpp"
#include "fiid/seeding.hpp"

namespace fiid {

Graph::Graph(std::size_t n, std::span<const Edge> edges) {
  if (n > static_cast<std::size_t>(std::numeric_limits<Vertex>::max()))
    throw std::domain_error("too many vertices");
  std::vector<std::size_t> degree(n, 0);
  for (const Edge &e : edges) {
    if (e.u < 0 || e.v < 0 || static_cast<std::size_t>(e.u) >= n ||
        static_cast<std::size_t>(e.v) >= n)
      throw std::domain_error("edge endpoint out of range");
    if (e.u == e.v)
      throw std::domain_error("self-loop at vertex " + std::to_string(e.u));
    ++degree[e.u];
    ++degree[e.v];
  }
  offsets_.assign(n + 1, 0);
  std::partial_sum(degree.begin(), degree.end(), offsets_.begin() + 1);
  neighbors_.resize(offsets_[n]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const Edge &e : edges) {
    neighbors_[fill[e.u]++] = e.v;
    neighbors_[fill[e.v]++] = e.u;
  }
  for (std::size_t v = 0; v < n; ++v) {
    auto first = neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]);
    auto last = neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]);
    std::sort(first, last);
    if (std::adjacent_find(first, last) != last)
      throw std::domain_error("repeated edge at vertex " + std::to_string(v));
  }
}

int Graph::max_degree() const {
  int best = 0;
  for (std::size_t v = 0; v < vertex_count(); ++v)
    best = std::max(best, degree(static_cast<Vertex>(v)));
  return best;
}

bool Graph::has_edge(Vertex u, Vertex v) const {
  const auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (std::size_t u = 0; u < vertex_count(); ++u)
    for (Vertex v : neighbors(static_cast<Vertex>(u)))
      if (static_cast<Vertex>(u) < v)
        out.push_back({static_cast<Vertex>(u), v});
  return out;
}

Graph random_regular(std::size_t n, int d, std::uint64_t seed, std::uint64_t max_attempts) {
  if (d < 1)
    throw std::domain_error("degree must be positive");
  if ((n * static_cast<std::size_t>(d)) % 2 != 0)
    throw std::domain_error("n*d must be even");
  if (n <= static_cast<std::size_t>(d))
    throw std::domain_error("a simple d-regular graph needs n > d");

  Rng rng = make_rng(seed);
  std::vector<Vertex> points(n * static_cast<std::size_t>(d));
  for (std::size_t i = 0; i < points.size(); ++i)
    points[i] = static_cast<Vertex>(i / static_cast<std::size_t>(d));
  std::vector<Edge> edges(points.size() / 2);
  std::vector<Vertex> seen(n * static_cast<std::size_t>(d));

  const auto stride = static_cast<std::size_t>(d);
  std::vector<int> fill(n);
  // Records `other` in the neighbor row of `self`; false on a repeated edge.
  auto link = [&](Vertex self, Vertex other) {
    Vertex *row = &seen[static_cast<std::size_t>(self) * stride];
    Vertex *row_end = row + fill[self];
    if (std::find(row, row_end, other) != row_end)
      return false;
    *row_end = other;
    ++fill[self];
    return true;
  };

  for (std::uint64_t attempt = 0; attempt < max_attempts; ++attempt) {
    std::shuffle(points.begin(), points.end(), rng);
    std::fill(fill.begin(), fill.end(), 0);
    bool simple = true;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const Vertex a = points[2 * i];
      const Vertex b = points[2 * i + 1];
      if (a == b || !link(a, b) || !link(b, a)) {
        simple = false;
        break;
      }
      edges[i] = {std::min(a, b), std::max(a, b)};
    }
    if (simple)
      return Graph(n, edges);
  }
  throw ResourceError("random_regular: rejection cap of " + std::to_string(max_attempts) +
                          " attempts exceeded",
                      max_attempts);
}

std::optional<int> girth(const Graph &g) {
  const std::size_t n = g.vertex_count();
  int best = std::numeric_limits<int>::max();
  std::vector<int> dist(n, -1);
  std::vector<Vertex> parent(n, kNoParent);
  std::vector<Vertex> queue;
  queue.reserve(n);
  for (std::size_t s = 0; s < n; ++s) {
    queue.clear();
    queue.push_back(static_cast<Vertex>(s));
    dist[s] = 0;
    parent[s] = kNoParent;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const Vertex u = queue[head];
      if (2 * dist[u] + 1 >= best)
        break;
      for (Vertex w : g.neighbors(u)) {
        if (dist[w] < 0) {
          dist[w] = dist[u] + 1;
          parent[w] = u;
          queue.push_back(w);
        } else if (w != parent[u]) {
          best = std::min(best, dist[u] + dist[w] + 1);
        }
      }
    }
    for (Vertex v : queue)
      dist[v] = -1;
  }
  if (best == std::numeric_limits<int>::max())
    return std::nullopt;
  return best;
}

BallScanner::BallScanner(const Graph &g) : g_(&g), dist_(g.vertex_count(), -1) {}

std::span<const Vertex> BallScanner::scan(Vertex x, int r) {
  for (Vertex v : order_)
    dist_[v] = -1;
  order_.clear();
  order_.push_back(x);
  dist_[x] = 0;
  for (std::size_t head = 0; head < order_.size(); ++head) {
    const Vertex u = order_[head];
    if (dist_[u] == r)
      continue;
    for (Vertex w : g_->neighbors(u)) {
      if (dist_[w] < 0) {
        dist_[w] = dist_[u] + 1;
        order_.push_back(w);
      }
    }
  }
  return order_;
}

bool BallScanner::tree_like(Vertex x, int r, int d) {
  const auto ball = scan(x, r);
  std::size_t induced_degree_sum = 0;
  for (Vertex v : ball) {
    const int deg = g_->degree(v);
    if (dist_[v] < r) {
      if (deg != d)
        return false;
      induced_degree_sum += static_cast<std::size_t>(deg);
    } else {
      for (Vertex w : g_->neighbors(v))
        if (dist_[w] >= 0)
          ++induced_degree_sum;
    }
  }
  // Connected by construction, so a tree iff |E| = |V| - 1.
  return induced_degree_sum == 2 * (ball.size() - 1);
}

bool ball_is_tree_like(const Graph &g, Vertex x, int r, int d) {
  if (x < 0 || static_cast<std::size_t>(x) >= g.vertex_count())
    throw std::domain_error("vertex out of range");
  if (r < 0)
    throw std::domain_error("radius must be non-negative");
  BallScanner scanner(g);
  return scanner.tree_like(x, r, d);
}

TreeLikeReport tree_like_report(const Graph &g, int r, int d, unsigned threads) {
  if (r < 0)
    throw std::domain_error("radius must be non-negative");
  TreeLikeReport report;
  report.r = r;
  const std::size_t n = g.vertex_count();
  report.tree_like_mask.assign(n, 0);
  if (threads == 0)
    threads = default_thread_count();
  const std::size_t chunks = std::max<std::size_t>(1, std::min<std::size_t>(threads, n));
  const std::size_t block = n == 0 ? 0 : (n + chunks - 1) / chunks;
  parallel_for(chunks, threads, [&](std::size_t c) {
    BallScanner scanner(g);
    const std::size_t end = std::min(n, (c + 1) * block);
    for (std::size_t v = c * block; v < end; ++v)
      report.tree_like_mask[v] = scanner.tree_like(static_cast<Vertex>(v), r, d) ? 1 : 0;
  });
  const auto count = std::count(report.tree_like_mask.begin(), report.tree_like_mask.end(), 1);
  report.fraction = n == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(n);
  return report;
}

Graph pad_to_regular(const Graph &g, int d, int depth) {
  if (d < 2 || depth < 0)
    throw std::domain_error("pad_to_regular needs d >= 2 and depth >= 0");
  std::vector<Edge> edges = g.edges();
  std::size_t next = g.vertex_count();
  // Grows a (d-1)-ary tree hanging from `anchor`, `levels` deep.
  auto hang = [&](Vertex anchor, int levels) {
    std::vector<Vertex> frontier{anchor};
    for (int level = 0; level < levels; ++level) {
      std::vector<Vertex> grown;
      const int fanout = level == 0 ? 1 : d - 1;
      for (Vertex v : frontier)
        for (int i = 0; i < fanout; ++i) {
          const auto w = static_cast<Vertex>(next++);
          edges.push_back({v, w});
          grown.push_back(w);
        }
      frontier.swap(grown);
    }
  };
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    const int deficit = d - g.degree(static_cast<Vertex>(v));
    for (int i = 0; i < deficit && depth > 0; ++i)
      hang(static_cast<Vertex>(v), depth);
  }
  std::sort(edges.begin(), edges.end());
  return Graph(next, edges);
}

Graph tree_ball_graph(const TreeBall &ball) {
  std::vector<Edge> edges;
  edges.reserve(ball.edge_count());
  for (std::size_t e = 0; e < ball.edge_count(); ++e) {
    const Vertex child = TreeBall::child_of_edge(e);
    edges.push_back({ball.parent(child), child});
  }
  return Graph(ball.vertex_count(), edges);
}

void write_edge_list(std::ostream &out, const Graph &g) {
  out << g.vertex_count() << ' ' << g.edge_count() << '\n';
  for (const Edge &e : g.edges())
    out << e.u << ' ' << e.v << '\n';
}

Graph read_edge_list(std::istream &in) {
  std::string line;
  auto fail = [](const std::string &why) -> Graph {
    throw std::domain_error("edge list: " + why);
  };
  if (!std::getline(in, line))
    return fail("missing header line");
  long long n = -1;
  long long m = -1;
  {
    std::istringstream header(line);
    std::string extra;
    if (!(header >> n >> m) || (header >> extra) || n < 0 || m < 0)
      return fail("header must be two non-negative integers \"n m\"");
  }
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(std::min(m, 1LL << 20)));
  for (long long i = 0; i < m; ++i) {
    if (!std::getline(in, line))
      return fail("expected " + std::to_string(m) + " edge lines, got " + std::to_string(i));
    std::istringstream row(line);
    long long u = -1;
    long long v = -1;
    std::string extra;
    if (!(row >> u >> v) || (row >> extra))
      return fail("malformed edge line " + std::to_string(i + 2));
    if (u < 0 || v >= n || u >= v)
      return fail("edge line " + std::to_string(i + 2) + " must satisfy 0 <= u < v < n");
    Edge e{static_cast<Vertex>(u), static_cast<Vertex>(v)};
    if (!edges.empty() && !(edges.back() < e))
      return fail("edges must be strictly sorted lexicographically");
    edges.push_back(e);
  }
  while (std::getline(in, line))
    if (line.find_first_not_of(" \t\r") != std::string::npos)
      return fail("trailing content after " + std::to_string(m) + " edges");
  return Graph(static_cast<std::size_t>(n), edges);
}

} // namespace fiid
