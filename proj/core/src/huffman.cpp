#include "ssk/huffman.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <queue>

namespace ssk {

namespace {

struct Node {
  double prob;
  std::size_t first_leaf;  // earliest alphabet position in the subtree
  std::int32_t left = -1, right = -1;
  std::int32_t leaf = -1;  // alphabet index when this is a leaf
};

struct NodeOrder {
  const std::vector<Node>* nodes;
  bool operator()(std::int32_t a, std::int32_t b) const {
    const Node& na = (*nodes)[a];
    const Node& nb = (*nodes)[b];
    if (na.prob != nb.prob) return na.prob > nb.prob;  // min-heap on probability
    return na.first_leaf > nb.first_leaf;
  }
};

void collect_depths(const std::vector<Node>& nodes, std::int32_t at, int depth,
                    std::vector<int>& out) {
  const Node& n = nodes[at];
  if (n.leaf >= 0) {
    out[n.leaf] = std::max(depth, 1);  // a 1-symbol tree still needs one bit
    return;
  }
  collect_depths(nodes, n.left, depth + 1, out);
  collect_depths(nodes, n.right, depth + 1, out);
}

}  // namespace

PrefixCodebook PrefixCodebook::build(const Alphabet& alphabet) {
  if (alphabet.size() < 2)
    throw DegenerateAlphabetError("codebook needs at least two symbols with positive prior");
  for (double p : alphabet.priors)
    if (!(p > 0.0)) throw Error("codebook priors must be positive");

  std::vector<Node> nodes;
  nodes.reserve(2 * alphabet.size());
  std::priority_queue<std::int32_t, std::vector<std::int32_t>, NodeOrder> heap{
      NodeOrder{&nodes}};
  for (std::size_t i = 0; i < alphabet.size(); ++i) {
    nodes.push_back({alphabet.priors[i], i, -1, -1, static_cast<std::int32_t>(i)});
    heap.push(static_cast<std::int32_t>(i));
  }
  while (heap.size() > 1) {
    const std::int32_t a = heap.top();
    heap.pop();
    const std::int32_t b = heap.top();
    heap.pop();
    nodes.push_back({nodes[a].prob + nodes[b].prob,
                     std::min(nodes[a].first_leaf, nodes[b].first_leaf), a, b, -1});
    heap.push(static_cast<std::int32_t>(nodes.size() - 1));
  }

  std::vector<int> lengths(alphabet.size());
  collect_depths(nodes, heap.top(), 0, lengths);

  // Reassign the length multiset by (prior descending, alphabet position):
  // within equal priors the earlier symbol gets the shorter code, and a
  // larger prior never gets a longer code.
  {
    std::vector<std::size_t> by_prior(alphabet.size());
    std::iota(by_prior.begin(), by_prior.end(), 0);
    std::sort(by_prior.begin(), by_prior.end(), [&](std::size_t a, std::size_t b) {
      if (alphabet.priors[a] != alphabet.priors[b])
        return alphabet.priors[a] > alphabet.priors[b];
      return a < b;
    });
    std::vector<int> sorted_lengths = lengths;
    std::sort(sorted_lengths.begin(), sorted_lengths.end());
    std::vector<int> reassigned(alphabet.size());
    for (std::size_t k = 0; k < by_prior.size(); ++k)
      reassigned[by_prior[k]] = sorted_lengths[k];
    lengths = std::move(reassigned);
  }

  // Canonical assignment: by (length, alphabet position), counting upward.
  std::vector<std::size_t> order(alphabet.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (lengths[a] != lengths[b]) return lengths[a] < lengths[b];
    return a < b;
  });

  PrefixCodebook cb;
  cb.n_t_ = alphabet.n_t;
  cb.entries_.resize(alphabet.size());
  std::uint64_t code = 0;
  int prev_len = lengths[order[0]];
  for (std::size_t k = 0; k < order.size(); ++k) {
    const std::size_t idx = order[k];
    const int len = lengths[idx];
    if (k > 0) {
      code += 1;
      code <<= (len - prev_len);
    }
    prev_len = len;
    BitString bits(len, '0');
    for (int b = 0; b < len; ++b)
      if ((code >> (len - 1 - b)) & 1u) bits[b] = '1';
    cb.entries_[idx] = {alphabet.symbols[idx], std::move(bits), std::ldexp(1.0, -len)};
  }
  cb.finalize();
  return cb;
}

PrefixCodebook PrefixCodebook::from_bitmap(const Alphabet& alphabet) {
  if (alphabet.bitmap.size() != alphabet.size() || alphabet.size() < 2)
    throw DegenerateAlphabetError("from_bitmap needs an alphabet with a bit mapping");
  PrefixCodebook cb;
  cb.n_t_ = alphabet.n_t;
  cb.entries_.reserve(alphabet.size());
  for (std::size_t i = 0; i < alphabet.size(); ++i) {
    const int len = static_cast<int>(alphabet.bitmap[i].size());
    cb.entries_.push_back({alphabet.symbols[i], alphabet.bitmap[i], std::ldexp(1.0, -len)});
  }
  cb.finalize();
  return cb;
}

void PrefixCodebook::finalize() {
  max_len_ = 0;
  min_len_ = 1 << 20;
  trie_.assign(1, {-1, -1});
  unsigned __int128 kraft = 0;  // scaled by 2^127
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const BitString& code = entries_[i].code;
    const int len = static_cast<int>(code.size());
    if (len < 1 || len > 120) throw Error("codeword length out of supported range");
    max_len_ = std::max(max_len_, len);
    min_len_ = std::min(min_len_, len);
    kraft += (unsigned __int128)1 << (127 - len);

    std::int32_t at = 0;
    for (int b = 0; b < len; ++b) {
      const int bit = code[b] == '1';
      if (b + 1 == len) {
        if (trie_[at][bit] != -1) throw Error("codebook is not prefix-free");
        trie_[at][bit] = -(static_cast<std::int32_t>(i) + 2);  // leaf; -1 means empty
      } else {
        std::int32_t next = trie_[at][bit];
        if (next == -1) {
          next = static_cast<std::int32_t>(trie_.size());
          trie_[at][bit] = next;
          trie_.push_back({-1, -1});
        } else if (next < 0) {
          throw Error("codebook is not prefix-free");
        }
        at = next;
      }
    }
  }
  if (kraft != (unsigned __int128)1 << 127)
    throw Error("codebook violates Kraft equality; prefix code is not complete");
}

AchievedStats PrefixCodebook::achieved_stats() const {
  AchievedStats s{0.0, 0.0};
  for (const auto& e : entries_) {
    s.rate_bits += e.achieved_prob * static_cast<double>(e.code.size());
    s.avg_power += e.achieved_prob * e.symbol.weight();
  }
  return s;
}

Alphabet PrefixCodebook::achieved_alphabet() const {
  Alphabet a;
  a.n_t = n_t_;
  a.symbols.reserve(size());
  a.priors.reserve(size());
  a.bitmap.reserve(size());
  for (const auto& e : entries_) {
    a.symbols.push_back(e.symbol);
    a.priors.push_back(e.achieved_prob);
    a.bitmap.push_back(e.code);
  }
  a.min_distance_exhaustive();
  return a;
}

std::pair<std::vector<std::size_t>, std::size_t> PrefixCodebook::decode(
    const BitString& bits) const {
  std::vector<std::size_t> symbols;
  std::size_t consumed = 0;
  std::int32_t at = 0;
  for (std::size_t pos = 0; pos < bits.size(); ++pos) {
    const std::int32_t next = trie_[at][bits[pos] == '1'];
    if (next <= -2) {
      symbols.push_back(static_cast<std::size_t>(-next - 2));
      consumed = pos + 1;
      at = 0;
    } else {
      at = next;
    }
  }
  return {std::move(symbols), consumed};
}

BitString PrefixCodebook::encode(std::span<const std::size_t> symbol_indices) const {
  BitString out;
  for (std::size_t idx : symbol_indices) {
    if (idx >= entries_.size()) throw UnknownSymbolError("symbol index outside codebook");
    out += entries_[idx].code;
  }
  return out;
}

std::size_t PrefixCodebook::index_of(const BinarySymbol& symbol) const {
  for (std::size_t i = 0; i < entries_.size(); ++i)
    if (entries_[i].symbol == symbol) return i;
  throw UnknownSymbolError("symbol " + symbol.to_string() + " not in codebook");
}

}  // namespace ssk
