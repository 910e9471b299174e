#pragma once

#include <span>
#include <string>
#include <vector>

#include "ssk/design.hpp"
#include "ssk/framing.hpp"
#include "ssk/huffman.hpp"
#include "ssk/link.hpp"

namespace ssk {

enum class Scheme { ssk, gssk, hssk, ee_hssk, qam };

std::string scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);

enum class FadingMode { per_symbol, per_frame };

/// One simulation campaign. For SSK-family schemes n_t/n_r are the antenna
/// counts; for the QAM baseline n_t is the number of independent streams
/// (1 or 2) and rate is split evenly across them.
struct SimSpec {
  Scheme scheme = Scheme::gssk;
  int n_t = 1;
  int n_r = 1;
  double rate = 1.0;  // m, bits per channel use
  int d_min = 2;
  int max_rf = 0;  // 0 means N_T
  std::vector<double> ebn0_db;
  int frame_bits = 100;
  std::uint64_t min_frame_errors = 300;
  std::uint64_t max_frames = 200000;
  std::uint64_t seed = 1;
  ArqMode arq = ArqMode::off;
  FadingMode fading = FadingMode::per_symbol;
  DetectorMetric metric = DetectorMetric::map_scaled;
  int threads = 0;  // 0 = hardware concurrency

  void validate() const;
};

struct SimPoint {
  double ebn0_db = 0.0;
  std::uint64_t symbols = 0;
  std::uint64_t symbol_errors = 0;
  std::uint64_t frames = 0;
  std::uint64_t frame_errors = 0;          // under the selected ARQ mode
  std::uint64_t frame_errors_no_arq = 0;   // single-shot tally of the same frames
  std::uint64_t frame_errors_arq_paper = 0;
  double ser = 0.0, ser_ci = 0.0;  // 95% binomial half-widths
  double fer = 0.0, fer_ci = 0.0;
  bool reliable = true;  // min_frame_errors reached before the frame cap
};

struct SimResult {
  SimSpec spec;
  std::string scheme_label;
  double achieved_rate = 0.0;
  double achieved_power = 0.0;
  std::vector<SimPoint> points;
  bool all_reliable = true;
};

/// The constructed modulation layer of one SSK-family scheme: alphabet with
/// design priors, the bit mapping, and the alphabet as the detector sees it
/// (priors set to the achieved 2^-len transmit frequencies).
struct SchemeRealization {
  std::string label;
  Alphabet design_alphabet;
  PrefixCodebook codebook;
  Alphabet detector_alphabet;
  double achieved_rate = 0.0;
  double achieved_power = 0.0;
};

SchemeRealization build_scheme(Scheme scheme, int n_t, double rate, int d_min, int max_rf);

/// Seeded frame-based link simulation. Frames are simulated independently
/// with per-frame derived random streams, so results are bit-identical for
/// any thread count; the stop rule (min_frame_errors or max_frames) is
/// evaluated at fixed batch boundaries. Frame synchronization is genie-aided
/// and the idle delimiter is not error-prone, matching the frame-error
/// accounting of the reference experiments.
SimResult run_link_sim(const SimSpec& spec);

/// Gray-mapped QAM reference over the same channel model with joint ML
/// detection (run_link_sim dispatches here for Scheme::qam).
SimResult qam_baseline(const SimSpec& spec);

struct SweepScheme {
  Scheme scheme = Scheme::gssk;
  int max_rf = 0;  // 0 means N_T
};

struct SweepRow {
  std::string scheme;
  double target_rate = 0.0;
  double rate_bits = 0.0;          // achieved transmission rate
  double avg_power = 0.0;          // achieved average symbol power
  double theoretical_power = 0.0;  // optimum at the achieved rate
};

/// Achieved (rate, power) points for each scheme over the rate grid, with
/// the theoretical optimum power at the achieved rate. Infeasible rates are
/// skipped. The optimum is computed for the d_min-matched class structure
/// under the row's RF-chain limit.
std::vector<SweepRow> run_power_rate_sweep(int n_t, int d_min, std::span<const double> rates,
                                           std::span<const SweepScheme> schemes);

/// CSV emitters matching the documented schemas.
std::string simulate_csv(const SimResult& result);
std::string sweep_csv(std::span<const SweepRow> rows);

}  // namespace ssk
