#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ssk/errors.hpp"

namespace ssk {

/// Number of k-subsets of an n-set. Throws on overflow of uint64.
std::uint64_t binomial(int n, int k);

/// Antenna-activation pattern: a fixed-length 0/1 vector. Bit j of the mask
/// corresponds to antenna j+1 (the paper's x_{j+1}), so to_string() prints
/// x_1 first. The number of 1s (active antennas) is cached.
class BinarySymbol {
 public:
  BinarySymbol() = default;
  BinarySymbol(std::uint64_t mask, int length);

  /// Parses "00011"-style strings, x_1 leftmost.
  static BinarySymbol from_string(const std::string& bits);

  int length() const { return length_; }
  int weight() const { return weight_; }
  std::uint64_t mask() const { return mask_; }
  bool bit(int pos) const { return (mask_ >> pos) & 1u; }

  std::string to_string() const;
  /// Paper-style rendering, e.g. "[0,0,0,1,1]".
  std::string to_bracketed() const;

  friend bool operator==(const BinarySymbol& a, const BinarySymbol& b) = default;

 private:
  std::uint64_t mask_ = 0;
  std::uint8_t length_ = 0;
  std::uint8_t weight_ = 0;
};

/// Hamming distance between equal-length symbols.
int hamming_distance(const BinarySymbol& a, const BinarySymbol& b);

/// Exhaustive pairwise minimum Hamming distance. Throws
/// DegenerateAlphabetError if fewer than two symbols are given.
int min_distance(std::span<const BinarySymbol> symbols);

/// All C(n_t, weight) length-n_t symbols of the given weight, in canonical
/// order: reverse colexicographic on the support set, equivalently
/// descending numeric mask. This reproduces the row order of the reference
/// alphabets.
std::vector<BinarySymbol> enumerate_weight_class(int n_t, int weight);

/// Ordered modulation alphabet with per-symbol priors and an optional
/// bit-string mapping.
struct Alphabet {
  int n_t = 0;
  std::vector<BinarySymbol> symbols;
  std::vector<double> priors;
  std::vector<std::string> bitmap;  // empty when no mapping is attached
  std::optional<int> d_min;         // cached by builders

  std::size_t size() const { return symbols.size(); }
  /// Mean number of active antennas under the priors.
  double average_power() const;
  /// Recomputes and caches the exhaustive minimum distance.
  int min_distance_exhaustive();
  /// Checks priors sum, symbol distinctness, cached d_min, and (when a
  /// bitmap is present) prefix-freeness. Throws Error on violation.
  void validate() const;
};

/// Per-weight partition of a code: classes[i] lists the codewords with
/// exactly i ones. The all-zero word is never a member.
struct CodePartition {
  int n_t = 0;
  int n_t_max = 0;  // largest weight present
  std::map<int, std::vector<BinarySymbol>> classes;

  std::map<int, std::size_t> class_sizes() const;
  std::size_t total_size() const;
  /// Members in ascending weight, canonical order within each class.
  std::vector<BinarySymbol> flatten() const;
  int min_distance_exhaustive() const;
  void validate() const;
};

/// The unique n_t with C(N_T, n_t - 1) < 2^m <= C(N_T, n_t) and
/// n_t <= N_T / 2. Throws RateInfeasibleError when none exists.
int choose_gssk_nt(int n_t, int rate_bits);

/// Fixed-weight alphabet: the first 2^m weight-n_t symbols in canonical
/// order, equiprobable, with fixed-length natural-binary bit mapping.
Alphabet build_gssk(int n_t, int rate_bits);

/// Odd-weight alphabet with d_min = 2: weight classes filled in ascending
/// weight, canonical order within a class, until 2^m symbols are selected.
Alphabet build_hssk_dmin2(int n_t, int rate_bits);

/// Code partition with the requested minimum distance. d_min = 2 returns the
/// full odd-weight partition. d_min >= 3 validates an external codeword list
/// (all-zero word dropped) or, when none is given, builds a greedy lexicode
/// scanning ascending weight / canonical order.
CodePartition build_code_dmin(int n_t, int d_min,
                              const std::vector<BinarySymbol>* external = nullptr);

/// Text table with columns bits_string, weight, prior, codeword.
std::string to_table(const Alphabet& alphabet);

}  // namespace ssk
