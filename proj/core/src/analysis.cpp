#include "ssk/analysis.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace ssk {

namespace {

using Quad = boost::math::quadrature::gauss_kronrod<double, 15>;

// Gamma(shape k, scale theta) density.
double gamma_pdf(double x, int k, double theta) {
  if (x <= 0.0) return 0.0;
  return std::exp((k - 1) * std::log(x) - x / theta - std::lgamma(k) - k * std::log(theta));
}

// Upper integration limit leaving Gamma tail mass below 1e-14.
double gamma_upper_limit(int shape, double scale) {
  return scale * boost::math::gamma_q_inv(static_cast<double>(shape), 1e-14);
}

}  // namespace

void PepInputs::validate() const {
  if (d < 1) throw Error("pep: Hamming distance must be >= 1");
  if (!(snr > 0.0)) throw Error("pep: snr must be positive");
  if (n_t < 1 || n_r < 1) throw Error("pep: antenna counts must be >= 1");
}

double PepInputs::sigma_z2() const {
  return snr * d / (nt_norm ? 2.0 * n_t : 2.0);
}

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double pep_exact(const PepInputs& in, double abs_tol) {
  in.validate();
  const double sz2 = in.sigma_z2();
  const double theta = 2.0 * sz2;  // Z ~ Gamma(N_R, 2 sigma_z^2)
  const int k = in.n_r;
  const double l_over_n0 = in.prior_log_ratio * in.snr;  // L / N0 with Es = 1
  const double upper = gamma_upper_limit(k, theta);

  auto integrand = [&](double x) {
    const double arg = std::sqrt(x) + l_over_n0 / std::sqrt(x);
    return q_function(arg) * gamma_pdf(x, k, theta);
  };
  double error = 0.0, l1 = 0.0;
  const double value = Quad::integrate(integrand, 0.0, upper, 15, 1e-12, &error, &l1);
  if (error > abs_tol)
    throw NonConvergenceError("pep_exact quadrature reached " + std::to_string(error) +
                                  " > requested " + std::to_string(abs_tol),
                              error);
  return value;
}

double pep_chernoff(const PepInputs& in) {
  in.validate();
  if (in.prior_log_ratio < 0.0)
    throw std::domain_error("pep_chernoff requires a nonnegative prior log-ratio");
  const double l_over_n0 = in.prior_log_ratio * in.snr;
  return 0.5 * std::exp(-l_over_n0) * std::pow(in.sigma_z2() + 1.0, -in.n_r);
}

SerEstimate symbol_error_estimate(const Alphabet& alphabet, double snr, int n_t, int n_r,
                                  bool use_bound, bool nt_norm) {
  const std::size_t n = alphabet.size();
  if (n < 2) throw DegenerateAlphabetError("symbol_error_estimate needs >= 2 symbols");
  for (double p : alphabet.priors)
    if (!(p > 0.0)) throw Error("symbol_error_estimate: priors must be positive");

  // PEP depends on the pair only through (d, L); cache over those.
  struct Key {
    int d;
    double l;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      return std::hash<int>()(k.d) ^ (std::hash<double>()(k.l) << 1);
    }
  };
  std::unordered_map<Key, double, KeyHash> cache;

  auto pep = [&](int d, double l) {
    const Key key{d, l};
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    PepInputs in{d, l, snr, n_t, n_r, nt_norm};
    double v;
    if (!use_bound)
      v = pep_exact(in);
    else if (l >= 0.0)
      v = pep_chernoff(in);
    else {  // same closed form, capped; not a proven bound for L < 0
      const double log_v = std::log(0.5) - l * snr - n_r * std::log1p(in.sigma_z2());
      v = log_v >= 0.0 ? 1.0 : std::exp(log_v);
    }
    cache.emplace(key, v);
    return v;
  };

  SerEstimate est{0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const int d = hamming_distance(alphabet.symbols[i], alphabet.symbols[j]);
      const double l = std::log(alphabet.priors[i] / alphabet.priors[j]);
      const double p = pep(d, l);
      est.weighted += alphabet.priors[i] * alphabet.priors[j] / (1.0 - alphabet.priors[i]) * p;
      est.union_bound += alphabet.priors[i] * p;
    }
  }
  return est;
}

double gamma_pdf_mass(int shape, double scale) {
  const double upper = gamma_upper_limit(shape, scale);
  auto f = [&](double x) { return gamma_pdf(x, shape, scale); };
  double error = 0.0;
  return Quad::integrate(f, 0.0, upper, 15, 1e-12, &error);
}

}  // namespace ssk
