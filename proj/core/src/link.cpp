#include "ssk/link.hpp"

#include <cmath>
#include <limits>

namespace ssk {

void LinkConfig::validate() const {
  if (n_t < 1 || n_r < 1) throw Error("link: antenna counts must be >= 1");
  if (!(es > 0.0) || !(n0 > 0.0)) throw Error("link: Es and N0 must be positive");
  if (!(sigma_h2 > 0.0)) throw Error("link: sigma_H^2 must be positive");
}

ChannelRealization ChannelRealization::draw(const LinkConfig& config, RandomStream& rng) {
  ChannelRealization ch;
  ch.h.resize(config.n_r, config.n_t);
  const double var_part = config.sigma_h2 / 2.0;
  for (int c = 0; c < config.n_t; ++c)
    for (int r = 0; r < config.n_r; ++r) ch.h(r, c) = rng.cgaussian(var_part);
  return ch;
}

Eigen::VectorXcd noiseless_rx(const LinkConfig& config, const ChannelRealization& channel,
                              const BinarySymbol& symbol) {
  if (symbol.length() != config.n_t)
    throw DimensionMismatchError("transmit: symbol length != N_T");
  if (channel.h.rows() != config.n_r || channel.h.cols() != config.n_t)
    throw DimensionMismatchError("transmit: channel dimensions mismatch");
  Eigen::VectorXcd y = Eigen::VectorXcd::Zero(config.n_r);
  for (int c = 0; c < config.n_t; ++c)
    if (symbol.bit(c)) y += channel.h.col(c);
  return y * std::sqrt(config.es);
}

Eigen::VectorXcd transmit(const LinkConfig& config, const ChannelRealization& channel,
                          const BinarySymbol& symbol, RandomStream& rng) {
  Eigen::VectorXcd y = noiseless_rx(config, channel, symbol);
  const double var_part = config.n0 / 4.0;  // complex per-entry variance N0/2
  for (int r = 0; r < config.n_r; ++r) y(r) += rng.cgaussian(var_part);
  return y;
}

std::size_t detect_map(const LinkConfig& config, const ChannelRealization& channel,
                       const Eigen::VectorXcd& y, const Alphabet& alphabet,
                       DetectorMetric metric) {
  if (alphabet.size() == 0) throw DegenerateAlphabetError("detect_map: empty alphabet");
  const double scale = metric == DetectorMetric::map_scaled ? 2.0 / config.n0 : 1.0;
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_idx = 0;
  for (std::size_t i = 0; i < alphabet.size(); ++i) {
    const double dist2 = (y - noiseless_rx(config, channel, alphabet.symbols[i])).squaredNorm();
    const double metric_value = scale * dist2 - std::log(alphabet.priors[i]);
    if (metric_value < best) {  // strict: ties keep the earlier symbol
      best = metric_value;
      best_idx = i;
    }
  }
  return best_idx;
}

double eb_from_es(double es, double avg_power, double rate_bits) {
  if (!(rate_bits > 0.0)) throw Error("eb_from_es: rate must be positive");
  return es * avg_power / rate_bits;
}

double es_from_eb(double eb, double avg_power, double rate_bits) {
  if (!(avg_power > 0.0)) throw Error("es_from_eb: avg_power must be positive");
  return eb * rate_bits / avg_power;
}

double n0_for_ebn0(double ebn0_linear, double es, double avg_power, double rate_bits) {
  if (!(ebn0_linear > 0.0)) throw Error("n0_for_ebn0: Eb/N0 must be positive");
  return eb_from_es(es, avg_power, rate_bits) / ebn0_linear;
}

}  // namespace ssk
