#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ssk/constellation.hpp"
#include "ssk/errors.hpp"

namespace ssk {

/// Bit sequences are plain '0'/'1' strings throughout the mapping layer.
using BitString = std::string;

struct CodebookEntry {
  BinarySymbol symbol;
  BitString code;
  double achieved_prob;  // 2^-len, the transmit frequency under i.i.d. bits
};

struct AchievedStats {
  double rate_bits;  // expected code length = entropy of the dyadic priors
  double avg_power;  // expected symbol weight under the dyadic priors
};

/// Complete prefix code over a modulation alphabet. Lengths come from a
/// Huffman construction with deterministic tie-breaking (smaller subtree
/// probability first, then earliest alphabet position); code strings are
/// assigned canonically (sorted by length, then alphabet position, counting
/// upward), so equal-prior rebuilds are reproducible.
class PrefixCodebook {
 public:
  /// Builds from the alphabet's theoretical priors. Requires >= 2 symbols,
  /// all priors positive.
  static PrefixCodebook build(const Alphabet& alphabet);

  /// Wraps an existing prefix-free complete mapping (e.g. the fixed-length
  /// natural-binary bitmap of equiprobable alphabets).
  static PrefixCodebook from_bitmap(const Alphabet& alphabet);

  const std::vector<CodebookEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  int max_len() const { return max_len_; }
  int min_len() const { return min_len_; }
  int antenna_count() const { return n_t_; }

  AchievedStats achieved_stats() const;

  /// The alphabet as the detector should see it: symbols in codebook order
  /// with priors 2^-len (the true transmit frequencies) and the code strings
  /// as bitmap.
  Alphabet achieved_alphabet() const;

  /// Greedy prefix decode. Returns the decoded symbol indices and the number
  /// of bits consumed; a trailing fragment that is not a complete codeword is
  /// left unconsumed.
  std::pair<std::vector<std::size_t>, std::size_t> decode(const BitString& bits) const;

  /// Concatenates the code strings of the given entries.
  BitString encode(std::span<const std::size_t> symbol_indices) const;

  /// Index of a symbol in the codebook; throws UnknownSymbolError.
  std::size_t index_of(const BinarySymbol& symbol) const;

 private:
  void finalize();  // builds the decode trie, checks prefix-freeness and Kraft equality

  std::vector<CodebookEntry> entries_;
  int n_t_ = 0;
  int max_len_ = 0;
  int min_len_ = 0;
  // Decode trie: node 0 is the root; child -1 is empty, -(i+2) is leaf i.
  std::vector<std::array<std::int32_t, 2>> trie_;
};

}  // namespace ssk
