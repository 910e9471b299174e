#include "ssk/gssk_props.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <mutex>
#include <numeric>

#include "ssk/random.hpp"

namespace ssk {

namespace {

using Words = std::vector<std::uint64_t>;

int popcount_words(const std::uint64_t* w, int words) {
  int c = 0;
  for (int i = 0; i < words; ++i) c += std::popcount(w[i]);
  return c;
}

// Branch-and-bound maximum clique with greedy-coloring bounds and MCS-style
// recoloring, on bit-parallel candidate sets. An optional admissible ceiling
// (a proven upper bound) terminates the search as soon as the incumbent
// provably reaches the optimum; it never changes the returned value.
class MaxCliqueSolver {
 public:
  MaxCliqueSolver(const DistanceGraph& graph, std::uint64_t ceiling)
      : g_(graph),
        n_(static_cast<int>(graph.nodes.size())),
        words_((n_ + 63) / 64),
        ceiling_(ceiling) {
    // Renumber by nonincreasing degree; coloring quality depends on it.
    std::vector<int> degree(n_, 0);
    for (int v = 0; v < n_; ++v) degree[v] = popcount_words(g_.adjacency[v].data(), words_);
    order_.resize(n_);
    std::iota(order_.begin(), order_.end(), 0);
    std::sort(order_.begin(), order_.end(), [&](int a, int b) {
      if (degree[a] != degree[b]) return degree[a] > degree[b];
      return a < b;
    });
    std::vector<int> pos(n_);
    for (int i = 0; i < n_; ++i) pos[order_[i]] = i;
    adj_.assign(n_, Words(words_, 0));
    for (int v = 0; v < n_; ++v)
      for (int u = 0; u < n_; ++u)
        if (u != v && g_.adjacent(order_[v], order_[u]))
          adj_[v][pos[order_[u]] >> 6] |= std::uint64_t{1} << (pos[order_[u]] & 63);
  }

  int size() const { return n_; }
  bool adjacent(int v, int u) const { return (adj_[v][u >> 6] >> (u & 63)) & 1u; }

  MaxSetResult run(int initial_best, const std::vector<int>& initial_witness) {
    best_ = initial_best;
    best_set_ = initial_witness;  // renumbered ids
    done_ = best_ >= static_cast<int>(ceiling_);
    if (!done_) {
      cur_.clear();
      const std::size_t depths = static_cast<std::size_t>(n_) + 2;
      seq_pool_.assign(depths * n_, 0);
      col_pool_.assign(depths * n_, 0);
      set_pool_.assign(depths * 2 * words_, 0);
      class_pool_.assign((static_cast<std::size_t>(n_) + 2) * words_, 0);
      std::uint64_t* all = set_pool_.data();
      for (int v = 0; v < n_; ++v) all[v >> 6] |= std::uint64_t{1} << (v & 63);
      expand(all, 0);
    }
    MaxSetResult res;
    res.size = best_;
    res.nodes_explored = explored_;
    res.ceiling = ceiling_;
    for (int v : best_set_) res.witness.push_back(g_.nodes[order_[v]]);
    return res;
  }

  /// Greedy clique following the given vertex order (renumbered ids).
  std::vector<int> greedy_clique(const std::vector<int>& scan) const {
    std::vector<int> set;
    Words allowed(words_, ~std::uint64_t{0});
    for (int v : scan)
      if ((allowed[v >> 6] >> (v & 63)) & 1u) {
        set.push_back(v);
        for (int w = 0; w < words_; ++w) allowed[w] &= adj_[v][w];
      }
    return set;
  }

  /// (1,2)-swap plateau search: replace one member by an outside vertex
  /// conflicting only with it, growing the clique whenever a vertex
  /// compatible with everything appears. Pushes greedy incumbents toward the
  /// packing optimum cheaply.
  std::vector<int> plateau_improve(std::vector<int> set, RandomStream& rng,
                                   int iterations) const {
    Words member(words_, 0);
    for (int v : set) member[v >> 6] |= std::uint64_t{1} << (v & 63);
    std::vector<int> missed(n_, 0);  // members not adjacent to v
    auto recount = [&]() {
      for (int v = 0; v < n_; ++v) {
        if ((member[v >> 6] >> (v & 63)) & 1u) {
          missed[v] = -1;
          continue;
        }
        int miss = 0;
        for (int w = 0; w < words_; ++w) miss += std::popcount(member[w] & ~adj_[v][w]);
        missed[v] = miss;
      }
    };
    recount();
    for (int it = 0; it < iterations; ++it) {
      bool grew = false;
      for (int v = 0; v < n_ && !grew; ++v)
        if (missed[v] == 0) {
          set.push_back(v);
          member[v >> 6] |= std::uint64_t{1} << (v & 63);
          recount();
          grew = true;
        }
      if (grew) continue;
      int candidate = -1;
      int seen = 0;
      for (int v = 0; v < n_; ++v)
        if (missed[v] == 1 && static_cast<int>(rng.below(++seen)) == 0) candidate = v;
      if (candidate < 0) break;
      int out = -1;
      for (int u : set)
        if (!adjacent(candidate, u)) {
          out = u;
          break;
        }
      set.erase(std::find(set.begin(), set.end(), out));
      member[out >> 6] &= ~(std::uint64_t{1} << (out & 63));
      set.push_back(candidate);
      member[candidate >> 6] |= std::uint64_t{1} << (candidate & 63);
      recount();
    }
    return set;
  }

 private:
  void expand(const std::uint64_t* p, int depth) {
    ++explored_;
    int count = popcount_words(p, words_);
    if (count == 0) return;

    int* seq = seq_pool_.data() + static_cast<std::size_t>(depth) * n_;
    int* col = col_pool_.data() + static_cast<std::size_t>(depth) * n_;
    std::uint64_t* pruned = set_pool_.data() + (static_cast<std::size_t>(depth) * 2 + 1) * words_;
    std::uint64_t* child = set_pool_.data() + (static_cast<std::size_t>(depth) + 1) * 2 * words_;

    // Greedy coloring into independent classes; a clique meets each class at
    // most once, so the class index bounds the residual growth. A vertex
    // landing at or above the useful threshold is re-colored downward when a
    // single conflicting neighbor can move to another class.
    const int k_min = best_ - static_cast<int>(cur_.size());
    {
      std::uint64_t* uncolored = pruned;  // scratch until branching starts
      for (int w = 0; w < words_; ++w) uncolored[w] = p[w];
      std::uint64_t* classes = class_pool_.data();
      int color = 0;
      int filled = 0;
      while (true) {
        int v = -1;
        for (int w = 0; w < words_; ++w)
          if (uncolored[w]) {
            v = w * 64 + std::countr_zero(uncolored[w]);
            break;
          }
        if (v < 0) break;
        int c = 1;
        for (; c <= color; ++c) {
          const std::uint64_t* cls = classes + static_cast<std::size_t>(c) * words_;
          bool clash = false;
          for (int w = 0; w < words_; ++w)
            if (cls[w] & adj_[v][w]) {
              clash = true;
              break;
            }
          if (!clash) break;
        }
        if (c > color) {
          ++color;
          std::uint64_t* cls = classes + static_cast<std::size_t>(color) * words_;
          for (int w = 0; w < words_; ++w) cls[w] = 0;
        }
        int assigned = c;
        if (assigned >= k_min && k_min >= 2) assigned = try_recolor(classes, v, k_min, assigned);
        classes[static_cast<std::size_t>(assigned) * words_ + (v >> 6)] |=
            std::uint64_t{1} << (v & 63);
        uncolored[v >> 6] &= ~(std::uint64_t{1} << (v & 63));
        ++filled;
      }
      filled = 0;
      for (int c = 1; c <= color; ++c) {
        const std::uint64_t* cls = classes + static_cast<std::size_t>(c) * words_;
        for (int w = 0; w < words_; ++w) {
          std::uint64_t bits = cls[w];
          while (bits) {
            const int v = w * 64 + std::countr_zero(bits);
            bits &= bits - 1;
            seq[filled] = v;
            col[filled] = c;
            ++filled;
          }
        }
      }
      count = filled;
    }

    for (int w = 0; w < words_; ++w) pruned[w] = p[w];
    for (int i = count - 1; i >= 0; --i) {
      if (done_) return;
      const int v = seq[i];
      if (static_cast<int>(cur_.size()) + col[i] <= best_) return;
      const std::uint64_t* nb = adj_[v].data();
      std::uint64_t any = 0;
      for (int w = 0; w < words_; ++w) {
        child[w] = pruned[w] & nb[w];
        any |= child[w];
      }
      cur_.push_back(v);
      if (any == 0) {
        if (static_cast<int>(cur_.size()) > best_) {
          best_ = static_cast<int>(cur_.size());
          best_set_ = cur_;
          if (best_ >= static_cast<int>(ceiling_)) done_ = true;
        }
      } else {
        expand(child, depth + 1);
      }
      cur_.pop_back();
      pruned[v >> 6] &= ~(std::uint64_t{1} << (v & 63));
    }
  }

  // Find a class c1 < k_min where v has exactly one neighbor u and a second
  // class u can move to; v then joins c1 and never needs branching.
  int try_recolor(std::uint64_t* classes, int v, int k_min, int fallback) {
    for (int c1 = 1; c1 < k_min; ++c1) {
      std::uint64_t* cls1 = classes + static_cast<std::size_t>(c1) * words_;
      int u = -1;
      int hits = 0;
      for (int w = 0; w < words_ && hits < 2; ++w) {
        std::uint64_t x = cls1[w] & adj_[v][w];
        while (x && hits < 2) {
          u = w * 64 + std::countr_zero(x);
          x &= x - 1;
          ++hits;
        }
      }
      if (hits != 1) continue;
      for (int c2 = c1 + 1; c2 < k_min; ++c2) {
        std::uint64_t* cls2 = classes + static_cast<std::size_t>(c2) * words_;
        bool clash = false;
        for (int w = 0; w < words_; ++w)
          if (cls2[w] & adj_[u][w]) {
            clash = true;
            break;
          }
        if (!clash) {
          cls1[u >> 6] &= ~(std::uint64_t{1} << (u & 63));
          cls2[u >> 6] |= std::uint64_t{1} << (u & 63);
          return c1;
        }
      }
    }
    return fallback;
  }

  const DistanceGraph& g_;
  int n_;
  int words_;
  std::uint64_t ceiling_;
  std::vector<int> order_;
  std::vector<Words> adj_;
  std::vector<int> cur_, best_set_;
  std::vector<int> seq_pool_, col_pool_;
  std::vector<std::uint64_t> set_pool_, class_pool_;
  int best_ = 0;
  std::uint64_t explored_ = 0;
  bool done_ = false;
};

struct MemoKey {
  int n, w, t;
  bool ceilings;
  auto operator<=>(const MemoKey&) const = default;
};

std::mutex memo_mutex;
std::map<MemoKey, int> exact_memo;  // sizes only; witnesses are recomputed

int exact_max_impl(int n_t, int n_t_active, int threshold, const SearchOptions& options,
                   MaxSetResult* out);

// Upper bound on the maximum set size: the edge-counting bounds for
// thresholds 4 and 6, plus the packing recursion
// A(n,t,w) <= floor(n A(n-1,t,w-1) / w) evaluated with the exact subinstance
// value (always within budget when the parent is). Distances in a weight
// class are invariant under complementing, so w normalizes to min(w, n - w).
std::uint64_t ceiling_bound(int n, int w, int threshold, const SearchOptions& options) {
  w = std::min(w, n - w);
  if (w <= 0) return 1;
  if (2 * w < threshold) return 1;
  std::uint64_t best = binomial(n, w);
  if (threshold == 4 || threshold == 6) best = std::min(best, corollary_bound(n, w, threshold));
  const std::uint64_t sub =
      static_cast<std::uint64_t>(exact_max_impl(n - 1, w - 1, threshold, options, nullptr));
  best = std::min(best, static_cast<std::uint64_t>(n) * sub / static_cast<std::uint64_t>(w));
  return std::max<std::uint64_t>(1, best);
}

int exact_max_impl(int n_t, int n_t_active, int threshold, const SearchOptions& options,
                   MaxSetResult* out) {
  const int w_norm = std::min(n_t_active, n_t - n_t_active);

  if (w_norm <= 0 || 2 * w_norm < threshold) {
    if (out) {
      out->size = 1;
      out->witness = {enumerate_weight_class(n_t, n_t_active).front()};
      out->ceiling = 1;
    }
    return 1;
  }

  const MemoKey key{n_t, w_norm, threshold, options.use_ceilings};
  if (out == nullptr) {
    std::lock_guard<std::mutex> lock(memo_mutex);
    if (auto it = exact_memo.find(key); it != exact_memo.end()) return it->second;
  }

  const DistanceGraph graph = DistanceGraph::build(n_t, n_t_active, threshold);
  const std::uint64_t ceiling = options.use_ceilings
                                    ? ceiling_bound(n_t, n_t_active, threshold, options)
                                    : graph.nodes.size();

  MaxCliqueSolver solver(graph, ceiling);

  // Incumbent: greedy over the canonical scan, randomized restarts, plateau
  // swaps. Reaching the ceiling certifies optimality with no branching.
  std::vector<int> scan(solver.size());
  std::iota(scan.begin(), scan.end(), 0);
  std::vector<int> incumbent = solver.greedy_clique(scan);
  RandomStream rng(RandomStream::mix((static_cast<std::uint64_t>(n_t) << 32) ^
                                     (static_cast<std::uint64_t>(n_t_active) << 16) ^
                                     static_cast<std::uint64_t>(threshold)));
  for (int restart = 0; restart < 60 && incumbent.size() < ceiling; ++restart) {
    for (std::size_t i = scan.size(); i > 1; --i)
      std::swap(scan[i - 1], scan[rng.below(i)]);
    auto cand = solver.greedy_clique(scan);
    cand = solver.plateau_improve(std::move(cand), rng, 400);
    if (cand.size() > incumbent.size()) incumbent = cand;
  }

  MaxSetResult res = solver.run(static_cast<int>(incumbent.size()), incumbent);
  const int size = res.size;
  {
    std::lock_guard<std::mutex> lock(memo_mutex);
    exact_memo.emplace(key, size);
  }
  if (out) *out = std::move(res);
  return size;
}

}  // namespace

DistanceGraph DistanceGraph::build(int n_t, int n_t_active, int threshold) {
  DistanceGraph g;
  g.n_t = n_t;
  g.n_t_active = n_t_active;
  g.threshold = threshold;
  g.nodes = enumerate_weight_class(n_t, n_t_active);
  const std::size_t n = g.nodes.size();
  const std::size_t words = (n + 63) / 64;
  g.adjacency.assign(n, std::vector<std::uint64_t>(words, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (hamming_distance(g.nodes[i], g.nodes[j]) >= threshold) {
        g.adjacency[i][j >> 6] |= std::uint64_t{1} << (j & 63);
        g.adjacency[j][i >> 6] |= std::uint64_t{1} << (i & 63);
      }
  return g;
}

Lemma1Report check_lemma1(int n_t, int n_t_active) {
  Lemma1Report report;
  report.n_t = n_t;
  report.n_t_active = n_t_active;
  const auto symbols = enumerate_weight_class(n_t, n_t_active);
  for (std::size_t i = 0; i < symbols.size(); ++i)
    for (std::size_t j = i + 1; j < symbols.size(); ++j) {
      const int d = hamming_distance(symbols[i], symbols[j]);
      ++report.distance_histogram[d];
      if (d <= 0 || d % 2 != 0) {
        report.all_even = false;
        throw Error("even-distance property violated at pair " + symbols[i].to_string() +
                    ", " + symbols[j].to_string());
      }
    }
  return report;
}

std::uint64_t corollary_bound(int n_t, int n_t_active, int threshold) {
  const std::uint64_t c = binomial(n_t, n_t_active);
  if (threshold == 4) return c / static_cast<std::uint64_t>(n_t - n_t_active + 1);
  if (threshold == 6)
    return c / static_cast<std::uint64_t>(n_t * n_t_active - n_t_active * n_t_active + 1);
  throw Error("corollary_bound defined for thresholds 4 and 6 only");
}

MaxSetResult max_set_with_min_distance(int n_t, int n_t_active, int threshold,
                                       const SearchOptions& options) {
  if (threshold < 4 || threshold % 2 != 0)
    throw Error("max_set_with_min_distance: threshold must be even and >= 4");
  if (n_t_active < 1 || n_t_active > n_t)
    throw Error("max_set_with_min_distance: n_t_active out of range");
  const std::uint64_t count = binomial(n_t, n_t_active);
  if (count > options.node_budget)
    throw BudgetExceededError("class size " + std::to_string(count) + " exceeds budget " +
                              std::to_string(options.node_budget));
  MaxSetResult res;
  exact_max_impl(n_t, n_t_active, threshold, options, &res);
  return res;
}

Theorem1Report check_theorem1(int n_t, int rate_bits, const SearchOptions& options) {
  Theorem1Report report;
  report.n_t = n_t;
  report.rate_bits = rate_bits;
  report.n_t_active = choose_gssk_nt(n_t, rate_bits);
  report.alphabet_size = std::uint64_t{1} << rate_bits;
  report.max_d4_set = max_set_with_min_distance(n_t, report.n_t_active, 4, options).size;
  // Distances in the class are even and positive; if no 2^m symbols can be
  // pairwise >= 4 apart, every valid alphabet contains a distance-2 pair.
  report.certified =
      static_cast<std::uint64_t>(report.max_d4_set) < report.alphabet_size;
  return report;
}

CorollaryReport check_corollaries(int n_t, int n_t_active, const SearchOptions& options) {
  CorollaryReport report;
  report.n_t = n_t;
  report.n_t_active = n_t_active;
  report.bound4 = corollary_bound(n_t, n_t_active, 4);
  report.bound6 = corollary_bound(n_t, n_t_active, 6);
  report.exact4 = max_set_with_min_distance(n_t, n_t_active, 4, options).size;
  report.exact6 = max_set_with_min_distance(n_t, n_t_active, 6, options).size;
  report.holds = static_cast<std::uint64_t>(report.exact4) <= report.bound4 &&
                 static_cast<std::uint64_t>(report.exact6) <= report.bound6;
  report.tightness4 = static_cast<double>(report.exact4) / static_cast<double>(report.bound4);
  report.tightness6 = static_cast<double>(report.exact6) / static_cast<double>(report.bound6);
  return report;
}

}  // namespace ssk
