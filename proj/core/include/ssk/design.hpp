#pragma once

#include <map>
#include <span>
#include <vector>

#include "ssk/constellation.hpp"
#include "ssk/errors.hpp"

namespace ssk {

/// Entropy-constrained minimum-power design instance: per-weight class sizes
/// of the admissible code, the RF-chain limit M, and the target rate m in
/// bits per channel use. Classes with weight above M are not admissible and
/// must not appear in class_sizes.
struct DesignProblem {
  std::map<int, std::size_t> class_sizes;  // weight -> |class|, weights in 1..max_rf
  int max_rf = 0;                          // M
  double target_rate = 0.0;                // m

  /// Keeps only classes with weight <= max_rf from the partition.
  static DesignProblem from_partition(const CodePartition& partition, int max_rf,
                                      double target_rate);
  void validate() const;
  int min_weight() const;
  std::uint64_t total_symbols() const;
};

/// Optimal tilted solution. priors maps weight i to the per-symbol prior
/// P_i*. beta_zero_limit marks the symbolic beta -> 0+ solution, where all
/// mass sits on the least power-consuming class.
struct DesignSolution {
  double beta = 1.0;
  bool beta_zero_limit = false;
  std::map<int, double> priors;
  double rate = 0.0;
  double avg_power = 0.0;
  bool constraint_active = true;
};

/// P_i = beta^i / sum_j |C_j| beta^j over admissible classes.
std::map<int, double> priors_for_beta(const DesignProblem& problem, double beta);

/// Entropy in bits of the tilted distribution, sum_i |C_i| (-P_i log2 P_i).
double rate_of_beta(const DesignProblem& problem, double beta);

/// Expected number of active antennas, sum_i i |C_i| P_i.
double power_of_beta(const DesignProblem& problem, double beta);

/// Closed-form KKT solution. Returns the beta -> 0+ limit when the rate
/// constraint is inactive there; otherwise bisects rate_of_beta(beta) = m on
/// (0, 1] to |rate - m| <= 1e-9. Throws RateInfeasibleError when m exceeds
/// log2 of the admissible symbol count.
DesignSolution solve(const DesignProblem& problem);

struct LocusPoint {
  double beta;
  double rate;
  double power;
};

/// Parametric (rate, power) curve over the supplied beta grid.
std::vector<LocusPoint> optimum_locus(const DesignProblem& problem,
                                      std::span<const double> beta_grid);

}  // namespace ssk
