#include "ssk/constellation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>

namespace ssk {

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  unsigned __int128 r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    if (r > std::numeric_limits<std::uint64_t>::max())
      throw Error("binomial overflow: C(" + std::to_string(n) + "," + std::to_string(k) + ")");
  }
  return static_cast<std::uint64_t>(r);
}

BinarySymbol::BinarySymbol(std::uint64_t mask, int length)
    : mask_(mask),
      length_(static_cast<std::uint8_t>(length)),
      weight_(static_cast<std::uint8_t>(std::popcount(mask))) {
  if (length < 1 || length > 64) throw Error("symbol length must be in 1..64");
  if (length < 64 && (mask >> length) != 0) throw Error("symbol mask exceeds length");
}

BinarySymbol BinarySymbol::from_string(const std::string& bits) {
  std::uint64_t mask = 0;
  for (std::size_t j = 0; j < bits.size(); ++j) {
    if (bits[j] == '1')
      mask |= std::uint64_t{1} << j;
    else if (bits[j] != '0')
      throw Error("symbol string must contain only 0/1");
  }
  return BinarySymbol(mask, static_cast<int>(bits.size()));
}

std::string BinarySymbol::to_string() const {
  std::string s(length_, '0');
  for (int j = 0; j < length_; ++j)
    if (bit(j)) s[j] = '1';
  return s;
}

std::string BinarySymbol::to_bracketed() const {
  std::string s = "[";
  for (int j = 0; j < length_; ++j) {
    if (j) s += ',';
    s += bit(j) ? '1' : '0';
  }
  s += ']';
  return s;
}

int hamming_distance(const BinarySymbol& a, const BinarySymbol& b) {
  if (a.length() != b.length())
    throw DimensionMismatchError("hamming_distance: symbol lengths differ");
  return std::popcount(a.mask() ^ b.mask());
}

int min_distance(std::span<const BinarySymbol> symbols) {
  if (symbols.size() < 2)
    throw DegenerateAlphabetError("min_distance needs at least two symbols");
  int best = std::numeric_limits<int>::max();
  for (std::size_t i = 0; i < symbols.size(); ++i)
    for (std::size_t j = i + 1; j < symbols.size(); ++j)
      best = std::min(best, hamming_distance(symbols[i], symbols[j]));
  return best;
}

std::vector<BinarySymbol> enumerate_weight_class(int n_t, int weight) {
  if (n_t < 1 || n_t > 64) throw Error("n_t must be in 1..64");
  if (weight < 0 || weight > n_t) throw Error("weight must be in 0..n_t");
  if (weight == 0) return {BinarySymbol(0, n_t)};

  // Gosper's hack walks weight-k masks in ascending numeric order, which is
  // ascending colex on supports; canonical order is the reverse.
  std::vector<BinarySymbol> out;
  out.reserve(binomial(n_t, weight));
  std::uint64_t v = (std::uint64_t{1} << weight) - 1;
  const std::uint64_t limit =
      (n_t == 64) ? ~std::uint64_t{0} : (std::uint64_t{1} << n_t) - 1;
  while (true) {
    out.emplace_back(v, n_t);
    if (weight == n_t) break;
    std::uint64_t c = v & -v;
    std::uint64_t r = v + c;
    if (r > limit || r < v) break;
    v = (((r ^ v) >> 2) / c) | r;
    if (v > limit) break;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

double Alphabet::average_power() const {
  double p = 0.0;
  for (std::size_t i = 0; i < symbols.size(); ++i) p += priors[i] * symbols[i].weight();
  return p;
}

int Alphabet::min_distance_exhaustive() {
  d_min = ssk::min_distance(symbols);
  return *d_min;
}

namespace {

bool is_prefix_free(const std::vector<std::string>& codes) {
  for (std::size_t i = 0; i < codes.size(); ++i)
    for (std::size_t j = 0; j < codes.size(); ++j) {
      if (i == j) continue;
      if (codes[i].size() <= codes[j].size() &&
          codes[j].compare(0, codes[i].size(), codes[i]) == 0)
        return false;
    }
  return true;
}

std::string natural_binary(std::uint64_t value, int width) {
  std::string s(width, '0');
  for (int b = 0; b < width; ++b)
    if ((value >> (width - 1 - b)) & 1u) s[b] = '1';
  return s;
}

}  // namespace

void Alphabet::validate() const {
  if (symbols.size() != priors.size()) throw Error("alphabet priors/symbols size mismatch");
  if (!bitmap.empty() && bitmap.size() != symbols.size())
    throw Error("alphabet bitmap size mismatch");
  double sum = 0.0;
  for (double p : priors) {
    if (p < 0.0) throw Error("alphabet prior negative");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw Error("alphabet priors do not sum to 1");
  std::set<std::uint64_t> seen;
  for (const auto& s : symbols) {
    if (s.length() != n_t) throw DimensionMismatchError("alphabet symbol length != n_t");
    if (!seen.insert(s.mask()).second) throw Error("alphabet contains duplicate symbols");
  }
  if (d_min && symbols.size() >= 2 && *d_min != ssk::min_distance(symbols))
    throw Error("alphabet cached d_min is stale");
  if (!bitmap.empty() && !is_prefix_free(bitmap)) throw Error("alphabet bitmap is not prefix-free");
}

std::map<int, std::size_t> CodePartition::class_sizes() const {
  std::map<int, std::size_t> sizes;
  for (const auto& [w, members] : classes) sizes[w] = members.size();
  return sizes;
}

std::size_t CodePartition::total_size() const {
  std::size_t n = 0;
  for (const auto& [w, members] : classes) n += members.size();
  return n;
}

std::vector<BinarySymbol> CodePartition::flatten() const {
  std::vector<BinarySymbol> out;
  out.reserve(total_size());
  for (const auto& [w, members] : classes)
    out.insert(out.end(), members.begin(), members.end());
  return out;
}

int CodePartition::min_distance_exhaustive() const {
  auto all = flatten();
  return ssk::min_distance(all);
}

void CodePartition::validate() const {
  std::set<std::uint64_t> seen;
  for (const auto& [w, members] : classes) {
    if (w < 1 || w > n_t_max) throw Error("partition class weight out of range");
    if (members.empty()) throw Error("partition class empty");
    for (const auto& s : members) {
      if (s.length() != n_t) throw DimensionMismatchError("partition symbol length != n_t");
      if (s.weight() != w) throw Error("partition member weight != class weight");
      if (!seen.insert(s.mask()).second) throw Error("partition contains duplicates");
    }
  }
}

int choose_gssk_nt(int n_t, int rate_bits) {
  if (rate_bits < 1 || rate_bits > 62) throw RateInfeasibleError("rate must be in 1..62 bits");
  const std::uint64_t needed = std::uint64_t{1} << rate_bits;
  for (int cand = 1; 2 * cand <= n_t; ++cand) {
    if (binomial(n_t, cand - 1) < needed && needed <= binomial(n_t, cand)) return cand;
  }
  throw RateInfeasibleError("no n_t <= N_T/2 supports 2^" + std::to_string(rate_bits) +
                            " symbols with N_T = " + std::to_string(n_t));
}

Alphabet build_gssk(int n_t, int rate_bits) {
  const int nt_active = choose_gssk_nt(n_t, rate_bits);
  const std::uint64_t count = std::uint64_t{1} << rate_bits;
  auto klass = enumerate_weight_class(n_t, nt_active);

  Alphabet a;
  a.n_t = n_t;
  a.symbols.assign(klass.begin(), klass.begin() + static_cast<std::ptrdiff_t>(count));
  a.priors.assign(count, std::ldexp(1.0, -rate_bits));
  a.bitmap.reserve(count);
  for (std::uint64_t r = 0; r < count; ++r) a.bitmap.push_back(natural_binary(r, rate_bits));
  a.min_distance_exhaustive();
  return a;
}

Alphabet build_hssk_dmin2(int n_t, int rate_bits) {
  if (rate_bits < 1 || rate_bits > 62) throw RateInfeasibleError("rate must be in 1..62 bits");
  const std::uint64_t count = std::uint64_t{1} << rate_bits;
  std::uint64_t capacity = 0;
  for (int w = 1; w <= n_t; w += 2) capacity += binomial(n_t, w);
  if (count > capacity)
    throw RateInfeasibleError("odd-weight capacity " + std::to_string(capacity) +
                              " < 2^" + std::to_string(rate_bits));

  Alphabet a;
  a.n_t = n_t;
  a.symbols.reserve(count);
  for (int w = 1; w <= n_t && a.symbols.size() < count; w += 2) {
    auto klass = enumerate_weight_class(n_t, w);
    const std::size_t take = std::min(klass.size(), count - a.symbols.size());
    a.symbols.insert(a.symbols.end(), klass.begin(), klass.begin() + static_cast<std::ptrdiff_t>(take));
  }
  a.priors.assign(count, std::ldexp(1.0, -rate_bits));
  a.bitmap.reserve(count);
  for (std::uint64_t r = 0; r < count; ++r) a.bitmap.push_back(natural_binary(r, rate_bits));
  a.min_distance_exhaustive();
  return a;
}

CodePartition build_code_dmin(int n_t, int d_min, const std::vector<BinarySymbol>* external) {
  if (d_min < 2) throw Error("build_code_dmin requires d_min >= 2");

  CodePartition part;
  part.n_t = n_t;

  if (d_min == 2 && external == nullptr) {
    for (int w = 1; w <= n_t; w += 2) part.classes[w] = enumerate_weight_class(n_t, w);
    part.n_t_max = (n_t % 2 == 1) ? n_t : n_t - 1;
    return part;
  }

  std::vector<BinarySymbol> kept;
  if (external != nullptr) {
    for (const auto& s : *external) {
      if (s.length() != n_t)
        throw InvalidCodeError("external codeword length != N_T");
      if (s.weight() == 0) continue;  // all-zero word reserved for idle
      kept.push_back(s);
    }
    for (std::size_t i = 0; i < kept.size(); ++i)
      for (std::size_t j = i + 1; j < kept.size(); ++j) {
        if (kept[i] == kept[j]) throw InvalidCodeError("external code has duplicate words");
        if (hamming_distance(kept[i], kept[j]) < d_min)
          throw InvalidCodeError("external code violates d_min = " + std::to_string(d_min));
      }
  } else {
    // Greedy lexicode: scan ascending weight, canonical order within each
    // class, keeping words at distance >= d_min from everything kept.
    for (int w = 1; w <= n_t; ++w) {
      for (const auto& cand : enumerate_weight_class(n_t, w)) {
        bool ok = true;
        for (const auto& s : kept)
          if (hamming_distance(cand, s) < d_min) {
            ok = false;
            break;
          }
        if (ok) kept.push_back(cand);
      }
    }
  }

  for (const auto& s : kept) part.classes[s.weight()].push_back(s);
  part.n_t_max = part.classes.empty() ? 0 : part.classes.rbegin()->first;
  part.validate();
  return part;
}

std::string to_table(const Alphabet& alphabet) {
  std::ostringstream os;
  os << "bits_string weight prior codeword\n";
  for (std::size_t i = 0; i < alphabet.size(); ++i) {
    os << alphabet.symbols[i].to_string() << ' ' << alphabet.symbols[i].weight() << ' '
       << std::setprecision(12) << alphabet.priors[i] << ' '
       << (alphabet.bitmap.empty() ? "-" : alphabet.bitmap[i]) << '\n';
  }
  return os.str();
}

}  // namespace ssk
