#pragma once

#include "ssk/constellation.hpp"
#include "ssk/errors.hpp"

namespace ssk {

/// Inputs for one pairwise error probability. Convention Es = 1, N0 = 1/snr,
/// so the prior log-ratio term L/N0 becomes L * snr. With nt_norm set (the
/// default) the fading variance carries the printed 1/N_T factor,
/// sigma_z^2 = snr * d / (2 N_T); clearing it uses snr * d / 2, which is what
/// the unnormalized signal model produces, for cross-checks against Monte
/// Carlo.
struct PepInputs {
  int d = 1;                    // Hamming distance of the pair
  double prior_log_ratio = 0.0; // L = log(P(x_i)/P(x_j)), natural log
  double snr = 1.0;             // Es/N0
  int n_t = 1;
  int n_r = 1;
  bool nt_norm = true;

  void validate() const;
  double sigma_z2() const;
};

/// Q(x) = 0.5 erfc(x / sqrt 2).
double q_function(double x);

/// Exact PEP by adaptive quadrature of E_Z[Q(sqrt Z + L snr / sqrt Z)] where
/// Z is Gamma(shape N_R, scale 2 sigma_z^2). Absolute tolerance abs_tol;
/// throws NonConvergenceError with the achieved error estimate otherwise.
double pep_exact(const PepInputs& in, double abs_tol = 1e-10);

/// Chernoff-style closed form 0.5 exp(-L snr) (snr d / (2 N_T) + 1)^-N_R.
/// Requires L >= 0 (throws std::domain_error otherwise).
double pep_chernoff(const PepInputs& in);

struct SerEstimate {
  double weighted;     // sum_{i != j} P(x_i) P(x_j)/(1 - P(x_i)) PEP(i -> j)
  double union_bound;  // sum_i P(x_i) sum_{j != i} PEP(i -> j)
};

/// Averaged pairwise error estimate over the alphabet at the given Es/N0,
/// using the exact PEP or the Chernoff form. In bound mode, pairs with
/// negative prior log-ratio use the same closed form capped at 1.
SerEstimate symbol_error_estimate(const Alphabet& alphabet, double snr, int n_t, int n_r,
                                  bool use_bound, bool nt_norm = true);

/// Quadrature of the Gamma(shape, scale) density over (0, inf); used as a
/// self-check that the integration scheme resolves the f_Z mass to 1e-10.
double gamma_pdf_mass(int shape, double scale);

}  // namespace ssk
