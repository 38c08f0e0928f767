#include "fiid/partition.hpp"

#include <algorithm>
#include <set>
#include <utility>
#include <stdexcept>
#include <tuple>

#include "fiid/gaussian.hpp"
#include "fiid/parallel.hpp"
#include "fiid/seeding.hpp"

namespace fiid {

const char *to_string(CutStage stage) {
  switch (stage) {
  case CutStage::raw:
    return "raw";
  case CutStage::rebalanced:
    return "rebalanced";
  case CutStage::improved:
    break;
  }
  return "improved";
}

namespace {

void require_side(const Graph &g, std::span<const std::uint8_t> side) {
  if (side.size() != g.vertex_count())
    throw std::domain_error("side must have one entry per vertex");
}

/// Side assignment with per-vertex cross-side degree kept current.
class Partition {
public:
  Partition(const Graph &g, std::vector<std::uint8_t> side) : g_(g), side_(std::move(side)) {
    require_side(g, side_);
    cross_.assign(side_.size(), 0);
    for (Vertex v = 0; v < static_cast<Vertex>(side_.size()); ++v) {
      for (Vertex w : g.neighbors(v))
        cross_[v] += side_[v] != side_[w];
      (side_[v] ? in_s_ : in_t_) += 1;
    }
  }

  std::uint8_t side(Vertex v) const { return side_[v]; }
  int cross(Vertex v) const { return cross_[v]; }
  /// Change of the cut size if v alone switched sides.
  int flip_delta(Vertex v) const { return g_.degree(v) - 2 * cross_[v]; }
  /// |S| - |V \ S|.
  std::int64_t signed_defect() const { return in_s_ - in_t_; }
  std::int64_t defect_after_flip(Vertex v) const {
    const std::int64_t d = signed_defect() + (side_[v] ? -2 : 2);
    return d < 0 ? -d : d;
  }

  template <class OnTouched> void flip(Vertex v, OnTouched &&touched) {
    side_[v] ^= 1;
    (side_[v] ? in_s_ : in_t_) += 1;
    (side_[v] ? in_t_ : in_s_) -= 1;
    cross_[v] = g_.degree(v) - cross_[v];
    for (Vertex w : g_.neighbors(v)) {
      cross_[w] += side_[w] != side_[v] ? 1 : -1;
      touched(w);
    }
  }

  std::vector<std::uint8_t> release() { return std::move(side_); }

private:
  const Graph &g_;
  std::vector<std::uint8_t> side_;
  std::vector<int> cross_;
  std::int64_t in_s_ = 0;
  std::int64_t in_t_ = 0;
};

/// Improvement of the mode's objective from a cut change of `delta`.
int gain_of(int delta, CutMode mode) { return mode == CutMode::min ? -delta : delta; }

} // namespace

std::int64_t cut_size(const Graph &g, std::span<const std::uint8_t> side) {
  require_side(g, side);
  std::int64_t cut = 0;
  for (const Edge &e : g.edges())
    cut += side[e.u] != side[e.v];
  return cut;
}

std::int64_t cut_size_by_boundary_degree(const Graph &g, std::span<const std::uint8_t> side) {
  require_side(g, side);
  std::int64_t total = 0;
  for (Vertex v = 0; v < static_cast<Vertex>(g.vertex_count()); ++v)
    for (Vertex w : g.neighbors(v))
      total += side[v] != side[w];
  return total / 2;
}

std::int64_t balance_defect(std::span<const std::uint8_t> side) {
  const auto in_s = static_cast<std::int64_t>(std::count(side.begin(), side.end(), 1));
  const auto diff = 2 * in_s - static_cast<std::int64_t>(side.size());
  return diff < 0 ? -diff : diff;
}

CutResult make_cut_result(const Graph &g, std::vector<std::uint8_t> side, CutMode mode,
                          CutStage stage) {
  CutResult r;
  r.cut_size = cut_size(g, side);
  r.balance_defect = balance_defect(side);
  r.fraction = g.vertex_count() == 0
                   ? 0.0
                   : static_cast<double>(r.cut_size) / static_cast<double>(g.vertex_count());
  r.side = std::move(side);
  r.mode = mode;
  r.stage = stage;
  return r;
}

std::vector<std::uint8_t> rebalance(const Graph &g, std::vector<std::uint8_t> side, CutMode mode) {
  Partition part(g, std::move(side));
  // Per side: (degree, mode-ranked flip delta, vertex); begin() is the next move.
  using Key = std::tuple<int, int, Vertex>;
  std::set<Key> queue[2];
  auto key = [&](Vertex v) {
    const int delta = part.flip_delta(v);
    return Key{g.degree(v), mode == CutMode::min ? delta : -delta, v};
  };
  for (Vertex v = 0; v < static_cast<Vertex>(g.vertex_count()); ++v)
    queue[part.side(v)].insert(key(v));

  while (part.signed_defect() > 1 || part.signed_defect() < -1) {
    const int larger = part.signed_defect() > 0 ? 1 : 0;
    const Vertex v = std::get<2>(*queue[larger].begin());
    std::vector<Vertex> touched;
    queue[larger].erase(queue[larger].begin());
    for (Vertex w : g.neighbors(v))
      queue[part.side(w)].erase(key(w));
    part.flip(v, [&](Vertex w) { touched.push_back(w); });
    queue[part.side(v)].insert(key(v));
    for (Vertex w : touched)
      queue[part.side(w)].insert(key(w));
  }
  return part.release();
}

namespace {

/// Vertices bucketed by integer gain per side; each bucket is a LIFO list.
class GainBuckets {
public:
  GainBuckets(std::size_t n, int span)
      : span_(span), next_(n, kNoParent), prev_(n, kNoParent), side_(n, 0), gain_(n, 0),
        present_(n, 0) {
    for (auto &h : head_)
      h.assign(static_cast<std::size_t>(2 * span + 1), kNoParent);
  }

  void insert(Vertex v, std::uint8_t s, int gain) {
    Vertex &h = head(s, gain);
    prev_[v] = kNoParent;
    next_[v] = h;
    if (h != kNoParent)
      prev_[h] = v;
    h = v;
    side_[v] = s;
    gain_[v] = gain;
    present_[v] = 1;
  }
  void erase(Vertex v) {
    if (!present_[v])
      return;
    if (prev_[v] != kNoParent)
      next_[prev_[v]] = next_[v];
    else
      head(side_[v], gain_[v]) = next_[v];
    if (next_[v] != kNoParent)
      prev_[next_[v]] = prev_[v];
    present_[v] = 0;
  }
  bool contains(Vertex v) const { return present_[v] != 0; }
  Vertex first(std::uint8_t s, int gain) const {
    return head_[s][static_cast<std::size_t>(gain + span_)];
  }
  Vertex after(Vertex v) const { return next_[v]; }

private:
  Vertex &head(std::uint8_t s, int gain) {
    return head_[s][static_cast<std::size_t>(gain + span_)];
  }

  int span_;
  std::vector<Vertex> head_[2];
  std::vector<Vertex> next_;
  std::vector<Vertex> prev_;
  std::vector<std::uint8_t> side_;
  std::vector<int> gain_;
  std::vector<std::uint8_t> present_;
};

/// Flip/swap hill climbing plus compound moves over one partition.
class LocalSearch {
public:
  LocalSearch(const Graph &g, std::vector<std::uint8_t> side, CutMode mode)
      : g_(g), part_(g, std::move(side)), mode_(mode), span_(std::max(1, g.max_degree())),
        adjacent_correction_(mode == CutMode::min ? -2 : 2),
        drift_(2 + static_cast<std::int64_t>(g.vertex_count() % 2)),
        buckets_(g.vertex_count(), span_) {}

  /// One scan in vertex order applying, for each vertex, its best strictly
  /// improving flip or swap. Returns whether anything moved.
  bool hill_climb_pass();

  /// Tentatively flips the best-gain unlocked vertex until none is left
  /// (balance may drift by one extra vertex), then keeps the best prefix that
  /// ends balanced if it strictly improves. Returns whether it kept anything.
  bool compound_pass();

  /// Walks best-gain flips, forbidding recently moved vertices, until
  /// `patience` steps pass without a new best balanced state; keeps the best
  /// state if it strictly improves. Returns whether it kept anything.
  bool tabu_pass(std::int64_t patience);

  std::vector<std::uint8_t> release() { return part_.release(); }

private:
  int gain(Vertex v) const { return gain_of(part_.flip_delta(v), mode_); }
  void track(Vertex v) { buckets_.insert(v, part_.side(v), gain(v)); }
  void fill_buckets() {
    for (Vertex v = 0; v < static_cast<Vertex>(g_.vertex_count()); ++v) {
      buckets_.erase(v);
      track(v);
    }
  }
  /// Flips v, refreshing bucket entries of v and its tracked neighbors.
  void tracked_flip(Vertex v) {
    const bool v_tracked = buckets_.contains(v);
    buckets_.erase(v);
    part_.flip(v, [&](Vertex w) {
      if (buckets_.contains(w)) {
        buckets_.erase(w);
        track(w);
      }
    });
    if (v_tracked)
      track(v);
  }
  /// Highest-gain tracked vertex of side s, most recently bucketed among ties.
  Vertex top(std::uint8_t s) const {
    for (int gv = span_; gv >= -span_; --gv)
      if (const Vertex v = buckets_.first(s, gv); v != kNoParent)
        return v;
    return kNoParent;
  }
  /// The better of the two sides' top vertices whose flip keeps the drift bound.
  Vertex pick_move() const {
    Vertex pick = kNoParent;
    for (std::uint8_t s : {std::uint8_t{0}, std::uint8_t{1}}) {
      const Vertex v = top(s);
      if (v == kNoParent || part_.defect_after_flip(v) > drift_)
        continue;
      if (pick == kNoParent || gain(v) > gain(pick))
        pick = v;
    }
    return pick;
  }
  bool balanced() const {
    const std::int64_t defect = part_.signed_defect();
    return defect >= -1 && defect <= 1;
  }

  const Graph &g_;
  Partition part_;
  CutMode mode_;
  int span_;
  int adjacent_correction_;
  std::int64_t drift_;
  GainBuckets buckets_;
};

bool LocalSearch::hill_climb_pass() {
  fill_buckets();
  bool moved = false;
  for (Vertex u = 0; u < static_cast<Vertex>(g_.vertex_count()); ++u) {
    const int gu = gain(u);
    int best = 0;
    Vertex partner = kNoParent;
    bool single = false;
    if (gu > 0 && part_.defect_after_flip(u) <= 1) {
      best = gu;
      single = true;
    }
    const std::uint8_t other = part_.side(u) ^ 1;
    // Swapping adjacent u, v keeps their shared edge on the same side of the
    // cut: -2 against the summed single-flip gains for min, +2 for max.
    for (Vertex v : g_.neighbors(u)) {
      if (part_.side(v) != other)
        continue;
      const int total = gu + gain(v) + adjacent_correction_;
      if (total > best) {
        best = total;
        partner = v;
        single = false;
      }
    }
    for (int gv = span_; gv >= -span_ && gu + gv > best; --gv) {
      Vertex v = buckets_.first(other, gv);
      while (v != kNoParent && g_.has_edge(u, v))
        v = buckets_.after(v);
      if (v != kNoParent) {
        best = gu + gv;
        partner = v;
        single = false;
        break;
      }
    }
    if (best <= 0)
      continue;
    tracked_flip(u);
    if (!single)
      tracked_flip(partner);
    moved = true;
  }
  return moved;
}

bool LocalSearch::compound_pass() {
  fill_buckets();
  std::vector<Vertex> moves;
  std::int64_t total = 0;
  std::int64_t best_total = 0;
  std::size_t best_length = 0;
  for (Vertex v = pick_move(); v != kNoParent; v = pick_move()) {
    total += gain(v);
    buckets_.erase(v); // locked for the rest of the pass
    tracked_flip(v);
    moves.push_back(v);
    if (total > best_total && balanced()) {
      best_total = total;
      best_length = moves.size();
    }
  }
  for (std::size_t i = moves.size(); i > best_length; --i)
    part_.flip(moves[i - 1], [](Vertex) {});
  return best_length > 0;
}

bool LocalSearch::tabu_pass(std::int64_t patience) {
  const std::size_t n = g_.vertex_count();
  fill_buckets();
  // Tenure varies deterministically with the step to avoid short cycles.
  const std::int64_t base_tenure = std::max<std::int64_t>(4, static_cast<std::int64_t>(n) / 200);
  std::vector<std::pair<std::int64_t, Vertex>> released; // (release step, vertex), FIFO by step
  std::size_t released_head = 0;
  std::vector<Vertex> moves;
  std::int64_t total = 0;
  std::int64_t best_total = 0;
  std::size_t best_length = 0;
  std::int64_t since_best = 0;
  for (std::int64_t step = 0; since_best < patience; ++step, ++since_best) {
    while (released_head < released.size() && released[released_head].first <= step) {
      track(released[released_head].second);
      ++released_head;
    }
    const Vertex v = pick_move();
    if (v == kNoParent)
      break;
    total += gain(v);
    buckets_.erase(v);
    tracked_flip(v);
    const std::int64_t tenure =
        base_tenure + static_cast<std::int64_t>(mix64(static_cast<std::uint64_t>(step)) %
                                                static_cast<std::uint64_t>(base_tenure));
    // Keep the release list sorted: later releases never precede earlier ones
    // by more than one tenure span, so insert from the back.
    released.emplace_back(step + tenure, v);
    for (std::size_t i = released.size() - 1;
         i > released_head && released[i - 1].first > released[i].first; --i)
      std::swap(released[i - 1], released[i]);
    moves.push_back(v);
    if (total > best_total && balanced()) {
      best_total = total;
      best_length = moves.size();
      since_best = 0;
    }
  }
  for (std::size_t i = moves.size(); i > best_length; --i)
    part_.flip(moves[i - 1], [](Vertex) {});
  return best_length > 0;
}

} // namespace

std::vector<std::uint8_t> local_improve(const Graph &g, std::vector<std::uint8_t> side,
                                        CutMode mode, int max_passes) {
  if (balance_defect(side) > 1)
    throw std::domain_error("local_improve needs a bisection (defect <= 1)");
  LocalSearch search(g, std::move(side), mode);
  const auto patience = std::max<std::int64_t>(1000, static_cast<std::int64_t>(g.vertex_count()));
  for (int pass = 0; pass < max_passes; ++pass) {
    const bool climbed = search.hill_climb_pass();
    const bool compounded = search.compound_pass();
    if (!climbed && !compounded && !search.tabu_pass(patience))
      break;
  }
  return search.release();
}

BisectionRun bisection_heuristic(const Graph &g, int d, int n_radius, CutMode mode,
                                 std::uint64_t seed, int max_passes, unsigned threads) {
  const auto spec = BlockFactorSpec::make(
      d, n_radius, mode == CutMode::min ? WeightSign::positive : WeightSign::alternating);
  BisectionRun run;
  run.label_seed = derive_substream(seed, 0);
  run.tie_seed = derive_substream(seed, 1);
  const GaussField field = emulate_on_graph(g, spec, run.label_seed, threads);
  const SpinField spins = sign_field(field, run.tie_seed);

  std::vector<std::uint8_t> side(spins.values.size());
  for (std::size_t v = 0; v < side.size(); ++v)
    side[v] = spins.values[v] > 0 ? 1 : 0;

  run.raw = make_cut_result(g, side, mode, CutStage::raw);
  run.rebalanced = make_cut_result(g, rebalance(g, side, mode), mode, CutStage::rebalanced);
  run.improved = make_cut_result(g, local_improve(g, run.rebalanced.side, mode, max_passes), mode,
                                 CutStage::improved);

  const auto &mask = field.defined_mask;
  const std::size_t n = g.vertex_count();
  const auto defined = std::count(mask.begin(), mask.end(), 1);
  std::size_t both = 0;
  const auto edges = g.edges();
  for (const Edge &e : edges)
    both += mask[e.u] && mask[e.v];
  run.tree_like_fraction = n == 0 ? 0.0 : static_cast<double>(defined) / static_cast<double>(n);
  run.tree_like_edge_fraction =
      edges.empty() ? 0.0 : static_cast<double>(both) / static_cast<double>(edges.size());
  run.edge_flip_probability = sign_flip_probability(spec.adjacent_correlation());
  // An edge with an undefined endpoint sees an independent fair sign.
  run.predicted_raw_fraction =
      n == 0 ? 0.0
             : (static_cast<double>(both) * run.edge_flip_probability +
                static_cast<double>(edges.size() - both) * 0.5) /
                   static_cast<double>(n);
  run.asymptotic_bound = bisection_bound(d, mode);
  return run;
}

double edge_cut_bound(int d, int n_radius) {
  return sign_flip_probability(block_factor_correlation(d, n_radius));
}

EdgeCutSample edge_cut_experiment(const Graph &g, int d, int n_radius, std::size_t replicas,
                                  std::uint64_t seed, unsigned threads) {
  if (replicas < 1)
    throw std::domain_error("edge_cut_experiment needs at least one replica");
  const auto spec = BlockFactorSpec::make(d, n_radius, WeightSign::alternating);
  const Graph padded = pad_to_regular(g, d, spec.support_radius());
  const auto edges = g.edges();
  const Eigen::VectorXd weights = spec.scaled_weights();

  // The padded graph's local structure is shared by every replica.
  const TreeLikeReport local = tree_like_report(padded, spec.support_radius(), d, threads);

  auto draw = [&](std::size_t r) {
    const std::uint64_t replica_seed = derive_substream(seed, r);
    Rng rng = make_rng(derive_substream(replica_seed, 0));
    const Eigen::VectorXd z = standard_normals(padded.vertex_count(), rng);
    const auto spheres = nonbacktracking_sphere_sums(padded, z, spec.support_radius());
    GaussField field;
    field.values = Eigen::VectorXd::Zero(z.size());
    for (int k = 0; k <= spec.support_radius(); ++k)
      field.values += weights(k) * spheres[k];
    field.defined_mask = local.tree_like_mask;
    for (Eigen::Index v = 0; v < z.size(); ++v)
      if (!field.defined_mask[v])
        field.values(v) = 0.0;
    const SpinField spins = sign_field(field, derive_substream(replica_seed, 1));
    std::vector<std::uint8_t> cut(edges.size());
    for (std::size_t i = 0; i < edges.size(); ++i)
      cut[i] = spins.values[edges[i].u] != spins.values[edges[i].v];
    return cut;
  };

  EdgeCutSample sample;
  sample.replicas = replicas;
  sample.in_cut = draw(0);
  if (threads == 0)
    threads = default_thread_count();
  const std::size_t chunks = std::min<std::size_t>(threads, replicas);
  const std::size_t block = (replicas + chunks - 1) / chunks;
  std::vector<std::vector<std::uint64_t>> counts(chunks,
                                                 std::vector<std::uint64_t>(edges.size(), 0));
  parallel_for(chunks, threads, [&](std::size_t c) {
    for (std::size_t r = c * block; r < std::min(replicas, (c + 1) * block); ++r) {
      const auto cut = r == 0 ? sample.in_cut : draw(r);
      for (std::size_t i = 0; i < cut.size(); ++i)
        counts[c][i] += cut[i];
    }
  });

  sample.per_edge_frequency.assign(edges.size(), 0.0);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    std::uint64_t total = 0;
    for (const auto &chunk : counts)
      total += chunk[i];
    sample.per_edge_frequency[i] = static_cast<double>(total) / static_cast<double>(replicas);
  }
  if (!edges.empty()) {
    sample.min_frequency =
        *std::min_element(sample.per_edge_frequency.begin(), sample.per_edge_frequency.end());
    double sum = 0;
    for (double f : sample.per_edge_frequency)
      sum += f;
    sample.mean_frequency = sum / static_cast<double>(edges.size());
  }
  sample.theoretical_bound = edge_cut_bound(d, n_radius);
  sample.girth = girth(g);
  sample.girth_sufficient = !sample.girth || *sample.girth >= 2 * n_radius + 1;
  return sample;
}

} // namespace fiid
