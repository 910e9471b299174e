#pragma once

#include <Eigen/Dense>

#include "ssk/constellation.hpp"
#include "ssk/random.hpp"

namespace ssk {

/// One simulated link: antenna counts, per-antenna transmit power Es, noise
/// level N0 (complex per-entry variance N0/2), and channel gain variance.
struct LinkConfig {
  int n_t = 1;
  int n_r = 1;
  double es = 1.0;
  double n0 = 1.0;
  double sigma_h2 = 1.0;

  void validate() const;
};

/// Flat-fading channel draw: i.i.d. circularly symmetric complex Gaussian
/// entries, zero mean, variance sigma_h2 (each real/imag part sigma_h2 / 2).
struct ChannelRealization {
  Eigen::MatrixXcd h;  // n_r x n_t

  static ChannelRealization draw(const LinkConfig& config, RandomStream& rng);
};

/// y = H sqrt(Es) x + v, noise per-entry complex variance N0/2 (real and
/// imaginary parts N0/4 each).
Eigen::VectorXcd transmit(const LinkConfig& config, const ChannelRealization& channel,
                          const BinarySymbol& symbol, RandomStream& rng);

/// Noiseless receive point H sqrt(Es) x (the sum of the active columns).
Eigen::VectorXcd noiseless_rx(const LinkConfig& config, const ChannelRealization& channel,
                              const BinarySymbol& symbol);

enum class DetectorMetric {
  /// (2/N0) ||y - H sqrt(Es) x||^2 - log P(x): the metric the log-posterior
  /// derivation yields. Default.
  map_scaled,
  /// ||y - H sqrt(Es) x||^2 - log P(x): compatibility form without the noise
  /// scaling; differs from map_scaled under unequal priors.
  eq_printed,
};

/// MAP detection over the alphabet. Ties break toward the earlier alphabet
/// position.
std::size_t detect_map(const LinkConfig& config, const ChannelRealization& channel,
                       const Eigen::VectorXcd& y, const Alphabet& alphabet,
                       DetectorMetric metric = DetectorMetric::map_scaled);

/// Eb = Es * E[x^H x] / m for m bits per channel use.
double eb_from_es(double es, double avg_power, double rate_bits);

/// Inverse of eb_from_es: the Es giving the requested Eb.
double es_from_eb(double eb, double avg_power, double rate_bits);

/// N0 giving the requested Eb/N0 (linear) at Es = es.
double n0_for_ebn0(double ebn0_linear, double es, double avg_power, double rate_bits);

}  // namespace ssk
