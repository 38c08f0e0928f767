#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fiid/core_math.hpp"
#include "fiid/graph.hpp"

namespace fiid {

enum class CutStage { raw, rebalanced, improved };

const char *to_string(CutStage stage);

/// A vertex two-coloring and its cut. side[v] = 1 means v is in S.
struct CutResult {
  std::vector<std::uint8_t> side;
  std::int64_t cut_size = 0;
  double fraction = 0.0; // cut_size / |V|
  std::int64_t balance_defect = 0;
  CutMode mode = CutMode::min;
  CutStage stage = CutStage::raw;
};

/// Number of edges joining S to its complement, by edge scan.
std::int64_t cut_size(const Graph &g, std::span<const std::uint8_t> side);

/// Same count as half the sum over vertices of their cross-side degree.
std::int64_t cut_size_by_boundary_degree(const Graph &g, std::span<const std::uint8_t> side);

/// ||S| - |V \ S||.
std::int64_t balance_defect(std::span<const std::uint8_t> side);

CutResult make_cut_result(const Graph &g, std::vector<std::uint8_t> side, CutMode mode,
                          CutStage stage);

/// Moves vertices off the larger side until the defect is at most 1. Each move
/// takes a smallest-degree vertex of the larger side; among those, the one
/// whose flip is best for the mode (smallest cut increase for min, largest for
/// max), then the smallest index.
std::vector<std::uint8_t> rebalance(const Graph &g, std::vector<std::uint8_t> side, CutMode mode);

/// Balanced local search. A pass first scans vertices in index order and,
/// for each, applies the best strictly improving move among flipping it (when
/// the defect stays <= 1) and swapping it with a vertex of the other side.
/// It then tries compound moves: a sequence of tentative single flips
/// (Fiduccia-Mattheyses style, and failing that a tabu walk) committed only
/// up to the best balanced state, and only if that state strictly improves
/// the cut. Stops after a pass with no move or after `max_passes` passes.
/// Requires a defect <= 1 on input; the output is never worse than the input
/// and keeps defect <= 1.
std::vector<std::uint8_t> local_improve(const Graph &g, std::vector<std::uint8_t> side,
                                        CutMode mode, int max_passes);

struct BisectionRun {
  CutResult raw;
  CutResult rebalanced;
  CutResult improved;
  double tree_like_fraction = 0.0;      // vertices with a tree-like support ball
  double tree_like_edge_fraction = 0.0; // edges with both endpoints tree-like
  double edge_flip_probability = 0.0;   // arccos(adjacent corr)/pi on the tree
  double predicted_raw_fraction = 0.0;  // raw cut/|V| adjusted for undefined vertices
  double asymptotic_bound = 0.0;        // (d/2pi) arccos(+-rho_d)
  std::uint64_t label_seed = 0;
  std::uint64_t tie_seed = 0;
};

/// Emulates the Gaussian block factor of radius `n_radius` (positive weights
/// for min, alternating for max), splits by sign, rebalances, then improves.
BisectionRun bisection_heuristic(const Graph &g, int d, int n_radius, CutMode mode,
                                 std::uint64_t seed, int max_passes, unsigned threads = 1);

struct EdgeCutSample {
  std::vector<std::uint8_t> in_cut;       // first replica, per edge of g.edges()
  std::vector<double> per_edge_frequency; // over all replicas
  double min_frequency = 0.0;
  double mean_frequency = 0.0;
  double theoretical_bound = 0.0;
  std::optional<int> girth;
  bool girth_sufficient = false; // girth >= 2 n_radius + 1
  std::size_t replicas = 0;
};

/// Per-edge cut frequencies of sign(F) for the alternating block factor of
/// radius `n_radius`. Vertices of degree < d are padded with pendant trees
/// before emulation so every edge of a graph with maximum degree d and girth
/// >= 2 n_radius + 1 sees the tree law.
EdgeCutSample edge_cut_experiment(const Graph &g, int d, int n_radius, std::size_t replicas,
                                  std::uint64_t seed, unsigned threads = 1);

/// sign_flip_probability(block_factor_correlation(d, n_radius)).
double edge_cut_bound(int d, int n_radius);

} // namespace fiid
