#include "ssk/design.hpp"

#include <algorithm>
#include <cmath>

namespace ssk {

namespace {

constexpr double kBisectionTolBits = 1e-9;

// Class masses q_i = |C_i| beta^i / sum_j |C_j| beta^j, computed with
// exponents shifted by the smallest weight so tiny beta cannot underflow.
struct TiltedMasses {
  std::vector<int> weights;
  std::vector<double> mass;      // q_i, sums to 1
  std::vector<double> per_symbol;  // P_i = q_i / |C_i|
};

TiltedMasses tilted_masses(const DesignProblem& problem, double beta) {
  if (!(beta > 0.0) || beta > 1.0) throw Error("beta must be in (0, 1]");
  const int shift = problem.min_weight();
  TiltedMasses t;
  double denom = 0.0;
  for (const auto& [w, n] : problem.class_sizes) {
    const double term = static_cast<double>(n) * std::pow(beta, w - shift);
    t.weights.push_back(w);
    t.mass.push_back(term);
    denom += term;
  }
  t.per_symbol.resize(t.mass.size());
  for (std::size_t k = 0; k < t.mass.size(); ++k) {
    t.mass[k] /= denom;
    const auto n = problem.class_sizes.at(t.weights[k]);
    t.per_symbol[k] = t.mass[k] / static_cast<double>(n);
  }
  return t;
}

}  // namespace

DesignProblem DesignProblem::from_partition(const CodePartition& partition, int max_rf,
                                            double target_rate) {
  DesignProblem p;
  p.max_rf = max_rf;
  p.target_rate = target_rate;
  for (const auto& [w, members] : partition.classes)
    if (w <= max_rf) p.class_sizes[w] = members.size();
  p.validate();
  return p;
}

void DesignProblem::validate() const {
  if (max_rf < 1) throw Error("design problem: max_rf must be >= 1");
  if (class_sizes.empty()) throw Error("design problem: no admissible classes");
  for (const auto& [w, n] : class_sizes) {
    if (w < 1 || w > max_rf) throw Error("design problem: class weight outside 1..M");
    if (n == 0) throw Error("design problem: empty class");
  }
  if (target_rate < 0.0) throw Error("design problem: negative target rate");
}

int DesignProblem::min_weight() const { return class_sizes.begin()->first; }

std::uint64_t DesignProblem::total_symbols() const {
  std::uint64_t n = 0;
  for (const auto& [w, c] : class_sizes) n += c;
  return n;
}

std::map<int, double> priors_for_beta(const DesignProblem& problem, double beta) {
  const auto t = tilted_masses(problem, beta);
  std::map<int, double> priors;
  for (std::size_t k = 0; k < t.weights.size(); ++k) priors[t.weights[k]] = t.per_symbol[k];
  return priors;
}

double rate_of_beta(const DesignProblem& problem, double beta) {
  const auto t = tilted_masses(problem, beta);
  double bits = 0.0;
  for (std::size_t k = 0; k < t.weights.size(); ++k) {
    if (t.per_symbol[k] > 0.0) bits -= t.mass[k] * std::log2(t.per_symbol[k]);
  }
  return bits;
}

double power_of_beta(const DesignProblem& problem, double beta) {
  const auto t = tilted_masses(problem, beta);
  double power = 0.0;
  for (std::size_t k = 0; k < t.weights.size(); ++k) power += t.weights[k] * t.mass[k];
  return power;
}

DesignSolution solve(const DesignProblem& problem) {
  problem.validate();
  const double m = problem.target_rate;
  const int i_min = problem.min_weight();
  const double n_min = static_cast<double>(problem.class_sizes.at(i_min));
  const double rate_floor = std::log2(n_min);

  if (m <= rate_floor) {
    // Rate constraint inactive at the beta -> 0+ limit: all mass on the
    // least power-consuming class.
    DesignSolution s;
    s.beta = 0.0;
    s.beta_zero_limit = true;
    for (const auto& [w, n] : problem.class_sizes) s.priors[w] = 0.0;
    s.priors[i_min] = 1.0 / n_min;
    s.rate = rate_floor;
    s.avg_power = i_min;
    s.constraint_active = false;
    return s;
  }

  const double rate_cap = rate_of_beta(problem, 1.0);
  if (m > rate_cap + kBisectionTolBits)
    throw RateInfeasibleError("target rate " + std::to_string(m) + " exceeds capacity " +
                              std::to_string(rate_cap) + " bits");
  if (m >= rate_cap - kBisectionTolBits) {
    // Capacity-achieving target: beta = 1 exactly, uniform priors.
    DesignSolution s;
    s.beta = 1.0;
    s.priors = priors_for_beta(problem, 1.0);
    s.rate = rate_cap;
    s.avg_power = power_of_beta(problem, 1.0);
    s.constraint_active = true;
    return s;
  }

  // The closed form only pins the prior shape; the rate constraint is met by
  // bisection, which relies on rate_of_beta being nondecreasing. Checked
  // numerically here rather than assumed.
  {
    const int grid = 1000;
    double prev = rate_floor;
    for (int k = 1; k <= grid; ++k) {
      const double r = rate_of_beta(problem, static_cast<double>(k) / grid);
      if (r < prev - 1e-9)
        throw Error("rate_of_beta not monotone on grid; bisection precondition violated");
      prev = r;
    }
  }

  double lo = 0.0, hi = 1.0;  // rate(lo+) < m <= rate(hi)
  double beta = 1.0, rate = rate_cap;
  for (int iter = 0; iter < 400; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= 0.0 || mid == lo || mid == hi) break;
    const double r = rate_of_beta(problem, mid);
    if (std::abs(r - m) <= kBisectionTolBits) {
      beta = mid;
      rate = r;
      break;
    }
    if (r < m)
      lo = mid;
    else {
      hi = mid;
      beta = mid;
      rate = r;
    }
  }

  DesignSolution s;
  s.beta = beta;
  s.beta_zero_limit = false;
  s.priors = priors_for_beta(problem, beta);
  s.rate = rate;
  s.avg_power = power_of_beta(problem, beta);
  s.constraint_active = true;
  return s;
}

std::vector<LocusPoint> optimum_locus(const DesignProblem& problem,
                                      std::span<const double> beta_grid) {
  std::vector<LocusPoint> curve;
  curve.reserve(beta_grid.size());
  for (double beta : beta_grid)
    curve.push_back({beta, rate_of_beta(problem, beta), power_of_beta(problem, beta)});
  return curve;
}

}  // namespace ssk
