#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "ssk/constellation.hpp"

namespace ssk {

/// Threshold graph over one weight class: nodes are all weight-n_t_active
/// symbols, edges join pairs at Hamming distance >= threshold.
struct DistanceGraph {
  int n_t = 0;
  int n_t_active = 0;
  int threshold = 0;
  std::vector<BinarySymbol> nodes;
  std::vector<std::vector<std::uint64_t>> adjacency;  // bitset rows

  static DistanceGraph build(int n_t, int n_t_active, int threshold);
  bool adjacent(std::size_t i, std::size_t j) const {
    return (adjacency[i][j >> 6] >> (j & 63)) & 1u;
  }
};

struct Lemma1Report {
  int n_t = 0;
  int n_t_active = 0;
  std::map<int, std::uint64_t> distance_histogram;
  bool all_even = true;
};

/// Exhaustively verifies that all pairwise distances inside the weight class
/// are positive and even, reporting the distance histogram.
Lemma1Report check_lemma1(int n_t, int n_t_active);

struct SearchOptions {
  std::size_t node_budget = 500;  // largest C(N_T, n_t) accepted
  bool use_ceilings = true;       // prune with proven upper bounds
};

struct MaxSetResult {
  int size = 0;
  std::vector<BinarySymbol> witness;
  std::uint64_t nodes_explored = 0;
  std::uint64_t ceiling = 0;  // the proven upper bound used (node count if disabled)
};

/// Exact maximum cardinality of a subset of the weight class with all
/// pairwise distances >= threshold (threshold even, >= 4), by
/// branch-and-bound maximum-clique search on the threshold graph with greedy
/// coloring bounds. When use_ceilings is set, proven combinatorial upper
/// bounds additionally cap the search; they never change the returned value,
/// only the work needed to certify it. Throws BudgetExceededError when the
/// class is larger than the node budget.
MaxSetResult max_set_with_min_distance(int n_t, int n_t_active, int threshold,
                                       const SearchOptions& options = {});

struct Theorem1Report {
  int n_t = 0;
  int rate_bits = 0;
  int n_t_active = 0;
  std::uint64_t alphabet_size = 0;  // 2^m
  int max_d4_set = 0;
  bool certified = false;  // max_d4_set < 2^m forces d_min = 2
};

/// Certifies that every valid fixed-weight alphabet at (N_T, m) has minimum
/// distance exactly 2: no 2^m-subset of the weight class can avoid a
/// distance-2 pair.
Theorem1Report check_theorem1(int n_t, int rate_bits, const SearchOptions& options = {});

struct CorollaryReport {
  int n_t = 0;
  int n_t_active = 0;
  std::uint64_t bound4 = 0;
  int exact4 = 0;
  std::uint64_t bound6 = 0;
  int exact6 = 0;
  bool holds = true;
  double tightness4 = 0.0;  // exact / bound
  double tightness6 = 0.0;
};

/// Exact search values against the closed-form ceilings for thresholds 4
/// and 6.
CorollaryReport check_corollaries(int n_t, int n_t_active, const SearchOptions& options = {});

/// floor(C(N_T,n_t) / (N_T - n_t + 1)) for threshold 4,
/// floor(C(N_T,n_t) / (N_T n_t - n_t^2 + 1)) for threshold 6.
std::uint64_t corollary_bound(int n_t, int n_t_active, int threshold);

}  // namespace ssk
