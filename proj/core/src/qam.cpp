#include "ssk/qam.hpp"

#include <cmath>

namespace ssk {

namespace {

// Gray-decode: label -> position index along the PAM axis.
std::uint32_t gray_to_binary(std::uint32_t g) {
  for (std::uint32_t shift = 1; shift < 32; shift <<= 1) g ^= g >> shift;
  return g;
}

double pam_level(std::uint32_t label, int bits) {
  const std::uint32_t pos = gray_to_binary(label);
  const int levels = 1 << bits;
  return 2.0 * static_cast<double>(pos) - (levels - 1);
}

}  // namespace

QamConstellation QamConstellation::make(int bits_per_symbol) {
  if (bits_per_symbol < 1 || bits_per_symbol > 16)
    throw Error("QAM supports 1..16 bits per symbol");
  const int i_bits = (bits_per_symbol + 1) / 2;
  const int q_bits = bits_per_symbol - i_bits;

  QamConstellation c;
  c.bits_per_symbol = bits_per_symbol;
  const std::size_t count = std::size_t{1} << bits_per_symbol;
  c.points.resize(count);
  double energy = 0.0;
  for (std::size_t b = 0; b < count; ++b) {
    const std::uint32_t i_label = static_cast<std::uint32_t>(b >> q_bits);
    const std::uint32_t q_label = static_cast<std::uint32_t>(b & ((1u << q_bits) - 1));
    const double i = pam_level(i_label, i_bits);
    const double q = q_bits > 0 ? pam_level(q_label, q_bits) : 0.0;
    c.points[b] = {i, q};
    energy += i * i + q * q;
  }
  const double scale = std::sqrt(static_cast<double>(count) / energy);
  for (auto& p : c.points) p *= scale;
  return c;
}

}  // namespace ssk
