// sskmod: design, inspect, analyze, and simulate energy-efficient
// SSK-family modulation alphabets.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "ssk/analysis.hpp"
#include "ssk/constellation.hpp"
#include "ssk/design.hpp"
#include "ssk/gssk_props.hpp"
#include "ssk/huffman.hpp"
#include "ssk/montecarlo.hpp"

namespace {

constexpr int kExitInfeasible = 2;
constexpr int kExitUnreliable = 3;

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw ssk::Error("cannot open output file " + path);
  out << text;
}

ssk::DesignProblem make_problem(int nt, int dmin, int max_rf, double rate) {
  const ssk::CodePartition part = ssk::build_code_dmin(nt, dmin);
  return ssk::DesignProblem::from_partition(part, max_rf > 0 ? max_rf : nt, rate);
}

void print_solution(const ssk::DesignProblem& problem, const ssk::DesignSolution& sol) {
  std::cout << std::setprecision(10);
  std::cout << "beta              " << (sol.beta_zero_limit ? "0+" : std::to_string(sol.beta))
            << "\n";
  std::cout << "constraint_active " << (sol.constraint_active ? "yes" : "no") << "\n";
  std::cout << "rate_bits         " << sol.rate << "\n";
  std::cout << "avg_power         " << sol.avg_power << "\n";
  std::cout << "weight  class_size  prior\n";
  for (const auto& [w, n] : problem.class_sizes)
    std::cout << std::setw(6) << w << std::setw(12) << n << "  " << sol.priors.at(w) << "\n";
}

std::string locus_csv(const ssk::DesignProblem& problem, int points) {
  std::vector<double> grid;
  grid.reserve(points);
  for (int k = 1; k <= points; ++k) grid.push_back(static_cast<double>(k) / points);
  std::ostringstream os;
  os << "beta,rate_bits,avg_power\n" << std::setprecision(10);
  for (const auto& pt : ssk::optimum_locus(problem, grid))
    os << pt.beta << ',' << pt.rate << ',' << pt.power << '\n';
  return os.str();
}

std::uint64_t effective_seed(std::uint64_t flag_seed) {
  if (const char* env = std::getenv("SSK_SEED")) return std::strtoull(env, nullptr, 10);
  return flag_seed;
}

struct SimFlags {
  std::string scheme = "gssk";
  int nt = 7, nr = 7;
  double rate = 4.0;
  int dmin = 2;
  int max_rf = 0;
  std::vector<double> ebn0;
  int frame_bits = 100;
  std::uint64_t min_frame_errors = 300;
  std::uint64_t max_frames = 200000;
  std::uint64_t seed = 1;
  std::string arq = "off";
  std::string fading = "per-symbol";
  std::string metric = "map";
  int threads = 0;
};

ssk::SimSpec to_spec(const SimFlags& f) {
  ssk::SimSpec spec;
  spec.scheme = ssk::scheme_from_name(f.scheme);
  spec.n_t = f.nt;
  spec.n_r = f.nr;
  spec.rate = f.rate;
  spec.d_min = f.dmin;
  spec.max_rf = f.max_rf;
  spec.ebn0_db = f.ebn0;
  spec.frame_bits = f.frame_bits;
  spec.min_frame_errors = f.min_frame_errors;
  spec.max_frames = f.max_frames;
  spec.seed = effective_seed(f.seed);
  if (f.arq == "off")
    spec.arq = ssk::ArqMode::off;
  else if (f.arq == "paper")
    spec.arq = ssk::ArqMode::paper;
  else if (f.arq == "real")
    spec.arq = ssk::ArqMode::real;
  else
    throw ssk::Error("unknown arq mode '" + f.arq + "'");
  spec.fading = f.fading == "per-frame" ? ssk::FadingMode::per_frame
                                        : ssk::FadingMode::per_symbol;
  spec.metric = f.metric == "eq5" ? ssk::DetectorMetric::eq_printed
                                  : ssk::DetectorMetric::map_scaled;
  spec.threads = f.threads;
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-efficient SSK-family modulation designer and link simulator"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Plain-text key=value config file; flags win");
  app.allow_config_extras(true);

  // ---- design ----
  auto* design = app.add_subcommand("design", "Solve the minimum-power prior design");
  int d_nt = 5, d_dmin = 2, d_maxrf = 0;
  double d_rate = 4.0;
  std::string d_locus;
  int d_locus_points = 200;
  design->add_option("--nt", d_nt, "Transmit antennas");
  design->add_option("--dmin", d_dmin, "Minimum Hamming distance of the code");
  design->add_option("--max-rf", d_maxrf, "RF-chain limit M (default N_T)");
  design->add_option("--rate", d_rate, "Target rate m in bits per channel use");
  design->add_option("--locus", d_locus, "Write the beta-swept locus CSV to this file");
  design->add_option("--locus-points", d_locus_points, "Grid size for --locus");

  // ---- table ----
  auto* table = app.add_subcommand("table", "Print the alphabet and bit mapping");
  int t_nt = 5, t_dmin = 2, t_maxrf = 0;
  double t_rate = 3.0;
  std::string t_scheme = "ee-hssk";
  table->add_option("--nt", t_nt, "Transmit antennas");
  table->add_option("--dmin", t_dmin, "Minimum Hamming distance");
  table->add_option("--max-rf", t_maxrf, "RF-chain limit M (default N_T)");
  table->add_option("--rate", t_rate, "Target rate in bits per channel use");
  table->add_option("--scheme", t_scheme, "ssk|gssk|hssk|ee-hssk");

  // ---- pep ----
  auto* pep = app.add_subcommand("pep", "One pairwise error probability");
  int p_d = 2, p_nt = 5, p_nr = 5;
  double p_l = 0.0, p_snr_db = 10.0;
  bool p_bound = false, p_exact = false, p_no_nt_norm = false;
  pep->add_option("--d", p_d, "Hamming distance of the pair");
  pep->add_option("--L", p_l, "Prior log-ratio log(P_i/P_j)");
  pep->add_option("--snr-db", p_snr_db, "Es/N0 in dB");
  pep->add_option("--nt", p_nt, "Transmit antennas");
  pep->add_option("--nr", p_nr, "Receive antennas");
  pep->add_flag("--exact", p_exact, "Exact quadrature (default)");
  pep->add_flag("--bound", p_bound, "Chernoff-style closed form");
  pep->add_flag("--no-nt-norm", p_no_nt_norm, "Drop the 1/N_T fading-variance factor");

  // ---- ser-estimate ----
  auto* serest = app.add_subcommand("ser-estimate", "Analytical symbol-error estimate sweep");
  SimFlags e_flags;
  double e_snr_min = 0.0, e_snr_max = 20.0, e_snr_step = 2.0;
  bool e_bound = false, e_no_nt_norm = false;
  std::string e_out;
  serest->add_option("--scheme", e_flags.scheme, "ssk|gssk|hssk|ee-hssk");
  serest->add_option("--nt", e_flags.nt, "Transmit antennas");
  serest->add_option("--nr", e_flags.nr, "Receive antennas");
  serest->add_option("--rate", e_flags.rate, "Rate in bits per channel use");
  serest->add_option("--dmin", e_flags.dmin, "Minimum Hamming distance");
  serest->add_option("--max-rf", e_flags.max_rf, "RF-chain limit (ee-hssk)");
  serest->add_option("--snr-min", e_snr_min, "Es/N0 sweep start, dB");
  serest->add_option("--snr-max", e_snr_max, "Es/N0 sweep end, dB");
  serest->add_option("--snr-step", e_snr_step, "Es/N0 sweep step, dB");
  serest->add_flag("--bound", e_bound, "Use the Chernoff form instead of quadrature");
  serest->add_flag("--no-nt-norm", e_no_nt_norm, "Drop the 1/N_T fading-variance factor");
  serest->add_option("--out", e_out, "Output CSV path (default stdout)");

  // ---- simulate ----
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo link simulation");
  SimFlags s_flags;
  std::string s_out;
  simulate->add_option("--scheme", s_flags.scheme, "ssk|gssk|hssk|ee-hssk|qam");
  simulate->add_option("--nt", s_flags.nt, "Transmit antennas (streams for qam)");
  simulate->add_option("--nr", s_flags.nr, "Receive antennas");
  simulate->add_option("--rate", s_flags.rate, "Rate in bits per channel use");
  simulate->add_option("--dmin", s_flags.dmin, "Minimum Hamming distance");
  simulate->add_option("--max-rf", s_flags.max_rf, "RF-chain limit (ee-hssk)");
  simulate->add_option("--ebn0", s_flags.ebn0, "Eb/N0 grid points in dB")->expected(-1);
  simulate->add_option("--frame-bits", s_flags.frame_bits, "Frame size in bits");
  simulate->add_option("--min-frame-errors", s_flags.min_frame_errors, "Stop rule: frame errors");
  simulate->add_option("--max-frames", s_flags.max_frames, "Stop rule: frame budget");
  simulate->add_option("--seed", s_flags.seed, "RNG seed (SSK_SEED env overrides)");
  simulate->add_option("--arq", s_flags.arq, "off|paper|real");
  simulate->add_option("--fading", s_flags.fading, "per-symbol|per-frame");
  simulate->add_option("--metric", s_flags.metric, "map|eq5 detector metric");
  simulate->add_option("--threads", s_flags.threads, "Worker threads (0 = auto)");
  simulate->add_option("--out", s_out, "Output CSV path (default stdout)");

  // ---- sweep-power-rate ----
  auto* sweep = app.add_subcommand("sweep-power-rate", "Achieved power vs rate curves");
  int w_nt = 7, w_dmin = 2;
  std::vector<double> w_rates;
  std::vector<std::string> w_schemes;
  std::string w_out;
  sweep->add_option("--nt", w_nt, "Transmit antennas");
  sweep->add_option("--dmin", w_dmin, "Minimum Hamming distance");
  sweep->add_option("--rates", w_rates, "Rate grid in bits per channel use")->expected(-1);
  sweep->add_option("--schemes", w_schemes,
                    "Entries like gssk, hssk, ee-hssk, ee-hssk:3 (RF limit after colon)")
      ->expected(-1);
  sweep->add_option("--out", w_out, "Output CSV path (default stdout)");

  // ---- verify ----
  auto* verify = app.add_subcommand("verify", "Certify the combinatorial distance properties");
  int v_nt = 5, v_ntx = 0, v_rate = 0;
  std::size_t v_budget = 500;
  std::string v_csv;
  verify->add_option("--nt", v_nt, "Transmit antennas");
  verify->add_option("--ntx", v_ntx, "Active-antenna count (default: all <= N_T/2)");
  verify->add_option("--rate", v_rate, "Also certify d_min = 2 for this rate");
  verify->add_option("--budget", v_budget, "Node budget for exact search");
  verify->add_option("--csv", v_csv, "Write bounds-vs-exact CSV to this file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (design->parsed()) {
      const auto problem = make_problem(d_nt, d_dmin, d_maxrf, d_rate);
      print_solution(problem, ssk::solve(problem));
      if (!d_locus.empty()) write_output(d_locus, locus_csv(problem, d_locus_points));
    } else if (table->parsed()) {
      const auto real = ssk::build_scheme(ssk::scheme_from_name(t_scheme), t_nt, t_rate,
                                          t_dmin, t_maxrf);
      std::cout << "# " << real.label << ", achieved rate " << std::setprecision(10)
                << real.achieved_rate << " bits/symbol, achieved power "
                << real.achieved_power << "\n";
      std::cout << "source_bits  symbol\n";
      for (const auto& entry : real.codebook.entries())
        std::cout << std::setw(-1) << entry.code << std::string(entry.code.size() < 12 ? 13 - entry.code.size() : 2, ' ')
                  << entry.symbol.to_bracketed() << "\n";
      std::cout << "\n" << ssk::to_table(real.codebook.achieved_alphabet());
    } else if (pep->parsed()) {
      if (p_bound && p_exact) throw ssk::Error("choose one of --exact / --bound");
      ssk::PepInputs in{p_d, p_l, std::pow(10.0, p_snr_db / 10.0), p_nt, p_nr, !p_no_nt_norm};
      const double value = p_bound ? ssk::pep_chernoff(in) : ssk::pep_exact(in);
      std::cout << std::setprecision(12) << value << "\n";
    } else if (serest->parsed()) {
      const auto real = ssk::build_scheme(ssk::scheme_from_name(e_flags.scheme), e_flags.nt,
                                          e_flags.rate, e_flags.dmin, e_flags.max_rf);
      std::ostringstream os;
      os << "snr_db,estimate,union_bound\n" << std::setprecision(10);
      for (double db = e_snr_min; db <= e_snr_max + 1e-9; db += e_snr_step) {
        const auto est = ssk::symbol_error_estimate(real.detector_alphabet,
                                                    std::pow(10.0, db / 10.0), e_flags.nt,
                                                    e_flags.nr, e_bound, !e_no_nt_norm);
        os << db << ',' << est.weighted << ',' << est.union_bound << '\n';
      }
      write_output(e_out, os.str());
    } else if (simulate->parsed()) {
      if (s_flags.ebn0.empty()) s_flags.ebn0 = {0, 2, 4, 6, 8, 10};
      const ssk::SimResult result = ssk::run_link_sim(to_spec(s_flags));
      write_output(s_out, ssk::simulate_csv(result));
      if (!result.all_reliable) {
        std::cerr << "warning: some points hit the frame budget before "
                  << result.spec.min_frame_errors << " frame errors\n";
        return kExitUnreliable;
      }
    } else if (sweep->parsed()) {
      if (w_rates.empty())
        for (int m = 1; m <= w_nt; ++m) w_rates.push_back(m);
      if (w_schemes.empty()) w_schemes = {"gssk", "hssk", "ee-hssk:3", "ee-hssk"};
      std::vector<ssk::SweepScheme> schemes;
      for (const auto& s : w_schemes) {
        const auto colon = s.find(':');
        ssk::SweepScheme entry;
        entry.scheme = ssk::scheme_from_name(s.substr(0, colon));
        entry.max_rf = colon == std::string::npos ? 0 : std::stoi(s.substr(colon + 1));
        schemes.push_back(entry);
      }
      const auto rows = ssk::run_power_rate_sweep(w_nt, w_dmin, w_rates, schemes);
      write_output(w_out, ssk::sweep_csv(rows));
    } else if (verify->parsed()) {
      ssk::SearchOptions opts;
      opts.node_budget = v_budget;
      std::ostringstream csv;
      csv << "n_t,n_t_active,threshold,bound,exact,tight\n";
      std::vector<int> ntx_list;
      if (v_ntx > 0)
        ntx_list.push_back(v_ntx);
      else
        for (int k = 1; 2 * k <= v_nt; ++k) ntx_list.push_back(k);
      bool all_ok = true;
      for (int ntx : ntx_list) {
        const auto lemma = ssk::check_lemma1(v_nt, ntx);
        std::cout << "lemma1 nt=" << v_nt << " ntx=" << ntx
                  << (lemma.all_even ? " OK" : " VIOLATED") << "  distances:";
        for (const auto& [d, c] : lemma.distance_histogram) std::cout << ' ' << d << "x" << c;
        std::cout << "\n";
        all_ok = all_ok && lemma.all_even;
        const auto cor = ssk::check_corollaries(v_nt, ntx, opts);
        std::cout << "corollaries nt=" << v_nt << " ntx=" << ntx << " bound4=" << cor.bound4
                  << " exact4=" << cor.exact4 << " bound6=" << cor.bound6
                  << " exact6=" << cor.exact6 << (cor.holds ? " OK" : " VIOLATED") << "\n";
        all_ok = all_ok && cor.holds;
        csv << v_nt << ',' << ntx << ",4," << cor.bound4 << ',' << cor.exact4 << ','
            << cor.tightness4 << '\n';
        csv << v_nt << ',' << ntx << ",6," << cor.bound6 << ',' << cor.exact6 << ','
            << cor.tightness6 << '\n';
      }
      if (v_rate > 0) {
        const auto th = ssk::check_theorem1(v_nt, v_rate, opts);
        std::cout << "theorem1 nt=" << v_nt << " m=" << v_rate << " ntx=" << th.n_t_active
                  << " max_d4_set=" << th.max_d4_set << " alphabet=" << th.alphabet_size
                  << (th.certified ? " CERTIFIED d_min=2" : " NOT CERTIFIED") << "\n";
        all_ok = all_ok && th.certified;
      }
      if (!v_csv.empty()) write_output(v_csv, csv.str());
      if (!all_ok) return 1;
    }
  } catch (const ssk::RateInfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
