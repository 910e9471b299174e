#include "ssk/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <thread>

#include "ssk/qam.hpp"

namespace ssk {

namespace {

constexpr std::uint64_t kBatchFrames = 512;  // stop rule evaluated at batch edges

double binomial_halfwidth(double p, std::uint64_t n) {
  if (n == 0) return 0.0;
  return 1.96 * std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(n));
}

void redraw_channel(Eigen::MatrixXcd& h, const LinkConfig& cfg, RandomStream& rng) {
  const double var_part = cfg.sigma_h2 / 2.0;
  for (int c = 0; c < cfg.n_t; ++c)
    for (int r = 0; r < cfg.n_r; ++r) h(r, c) = rng.cgaussian(var_part);
}

// MAP detector over a fixed table of noiseless receive points, rebuilt per
// channel draw. Noise is applied directly to the transmitted entry's point
// so the hot loop allocates nothing.
class TableDetector {
 public:
  TableDetector(const Alphabet& alphabet, const LinkConfig& cfg, DetectorMetric metric)
      : alphabet_(&alphabet),
        cfg_(&cfg),
        scale_(metric == DetectorMetric::map_scaled ? 2.0 / cfg.n0 : 1.0),
        sqrt_es_(std::sqrt(cfg.es)),
        n_r_(cfg.n_r),
        pts_(alphabet.size() * cfg.n_r),
        y_(cfg.n_r) {
    log_priors_.resize(alphabet.size());
    for (std::size_t i = 0; i < alphabet.size(); ++i)
      log_priors_[i] = std::log(alphabet.priors[i]);
  }

  void load(const Eigen::MatrixXcd& h) {
    for (std::size_t i = 0; i < alphabet_->size(); ++i) {
      std::complex<double>* dst = &pts_[i * n_r_];
      for (int r = 0; r < n_r_; ++r) dst[r] = 0.0;
      const BinarySymbol& s = alphabet_->symbols[i];
      for (int c = 0; c < cfg_->n_t; ++c)
        if (s.bit(c))
          for (int r = 0; r < n_r_; ++r) dst[r] += h(r, c);
      for (int r = 0; r < n_r_; ++r) dst[r] *= sqrt_es_;
    }
  }

  /// Transmits entry tx over the loaded channel with fresh noise, returns
  /// the MAP decision.
  std::size_t transmit_and_detect(std::size_t tx, RandomStream& rng) {
    const double var_part = cfg_->n0 / 4.0;  // complex per-entry variance N0/2
    const std::complex<double>* src = &pts_[tx * n_r_];
    for (int r = 0; r < n_r_; ++r) y_[r] = src[r] + rng.cgaussian(var_part);
    return detect();
  }

 private:
  std::size_t detect() const {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_idx = 0;
    for (std::size_t i = 0; i < alphabet_->size(); ++i) {
      const std::complex<double>* p = &pts_[i * n_r_];
      double dist2 = 0.0;
      for (int r = 0; r < n_r_; ++r) {
        const double re = y_[r].real() - p[r].real();
        const double im = y_[r].imag() - p[r].imag();
        dist2 += re * re + im * im;
      }
      const double metric = scale_ * dist2 - log_priors_[i];
      if (metric < best) {
        best = metric;
        best_idx = i;
      }
    }
    return best_idx;
  }

  const Alphabet* alphabet_;
  const LinkConfig* cfg_;
  double scale_;
  double sqrt_es_;
  int n_r_;
  std::vector<std::complex<double>> pts_;
  std::vector<std::complex<double>> y_;
  std::vector<double> log_priors_;
};

struct Tallies {
  std::uint64_t symbols = 0;
  std::uint64_t symbol_errors = 0;
  std::uint64_t frames = 0;
  std::uint64_t fe_off = 0;
  std::uint64_t fe_paper = 0;
  std::uint64_t fe_selected = 0;

  void add(const Tallies& o) {
    symbols += o.symbols;
    symbol_errors += o.symbol_errors;
    frames += o.frames;
    fe_off += o.fe_off;
    fe_paper += o.fe_paper;
    fe_selected += o.fe_selected;
  }
};

// Batched frame loop: frames carry independent derived streams, workers split
// a batch arbitrarily, and tallies merge by summation, so the outcome is
// independent of the thread count.
template <typename MakeContext, typename FrameFn>
Tallies simulate_point(const SimSpec& spec, MakeContext make_context, FrameFn frame_fn) {
  const unsigned threads =
      spec.threads > 0 ? static_cast<unsigned>(spec.threads)
                       : std::max(1u, std::thread::hardware_concurrency());
  Tallies total;
  std::uint64_t next = 0;
  while (next < spec.max_frames) {
    const std::uint64_t end = std::min<std::uint64_t>(spec.max_frames, next + kBatchFrames);
    std::vector<Tallies> parts(threads);
    auto worker = [&](unsigned t) {
      auto ctx = make_context();
      for (std::uint64_t f = next + t; f < end; f += threads) {
        Tallies one = frame_fn(ctx, f);
        parts[t].add(one);
      }
    };
    if (threads == 1) {
      worker(0);
    } else {
      std::vector<std::thread> pool;
      pool.reserve(threads);
      for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
      for (auto& th : pool) th.join();
    }
    for (const auto& p : parts) total.add(p);
    next = end;
    if (total.fe_selected >= spec.min_frame_errors) break;
  }
  return total;
}

SimPoint finish_point(const SimSpec& spec, double ebn0_db, const Tallies& t) {
  SimPoint pt;
  pt.ebn0_db = ebn0_db;
  pt.symbols = t.symbols;
  pt.symbol_errors = t.symbol_errors;
  pt.frames = t.frames;
  pt.frame_errors = t.fe_selected;
  pt.frame_errors_no_arq = t.fe_off;
  pt.frame_errors_arq_paper = t.fe_paper;
  pt.ser = t.symbols ? static_cast<double>(t.symbol_errors) / t.symbols : 0.0;
  pt.fer = t.frames ? static_cast<double>(t.fe_selected) / t.frames : 0.0;
  pt.ser_ci = binomial_halfwidth(pt.ser, t.symbols);
  pt.fer_ci = binomial_halfwidth(pt.fer, t.frames);
  pt.reliable = t.fe_selected >= spec.min_frame_errors;
  return pt;
}

Alphabet fixed_length_alphabet(int n_t, std::vector<BinarySymbol> symbols, int rate_bits) {
  Alphabet a;
  a.n_t = n_t;
  a.symbols = std::move(symbols);
  a.priors.assign(a.symbols.size(), std::ldexp(1.0, -rate_bits));
  a.bitmap.reserve(a.symbols.size());
  for (std::uint64_t r = 0; r < a.symbols.size(); ++r) {
    std::string bits(rate_bits, '0');
    for (int b = 0; b < rate_bits; ++b)
      if ((r >> (rate_bits - 1 - b)) & 1u) bits[b] = '1';
    a.bitmap.push_back(std::move(bits));
  }
  a.min_distance_exhaustive();
  return a;
}

int integer_rate(double rate, const char* scheme) {
  const double r = std::round(rate);
  if (std::abs(rate - r) > 1e-9 || r < 1.0)
    throw Error(std::string(scheme) + " needs an integer rate, got " + std::to_string(rate));
  return static_cast<int>(r);
}

}  // namespace

std::string scheme_name(Scheme s) {
  switch (s) {
    case Scheme::ssk: return "ssk";
    case Scheme::gssk: return "gssk";
    case Scheme::hssk: return "hssk";
    case Scheme::ee_hssk: return "ee-hssk";
    case Scheme::qam: return "qam";
  }
  return "?";
}

Scheme scheme_from_name(const std::string& name) {
  if (name == "ssk") return Scheme::ssk;
  if (name == "gssk") return Scheme::gssk;
  if (name == "hssk") return Scheme::hssk;
  if (name == "ee-hssk" || name == "eehssk") return Scheme::ee_hssk;
  if (name == "qam") return Scheme::qam;
  throw Error("unknown scheme '" + name + "'");
}

void SimSpec::validate() const {
  if (ebn0_db.empty()) throw Error("sim spec: Eb/N0 grid is empty");
  if (min_frame_errors == 0 || max_frames == 0) throw Error("sim spec: stop rule must be positive");
  if (frame_bits < 1) throw Error("sim spec: frame size must be positive");
  if (n_t < 1 || n_r < 1) throw Error("sim spec: antenna counts must be >= 1");
  if (!(rate > 0.0)) throw Error("sim spec: rate must be positive");
  if (scheme == Scheme::qam) {
    if (n_t != 1 && n_t != 2) throw Error("qam baseline supports 1 or 2 streams");
    const int m = integer_rate(rate, "qam");
    if (m % n_t != 0) throw Error("qam baseline: rate must split evenly across streams");
  }
}

SchemeRealization build_scheme(Scheme scheme, int n_t, double rate, int d_min, int max_rf) {
  SchemeRealization real;
  const int m_limit = max_rf > 0 ? max_rf : n_t;

  switch (scheme) {
    case Scheme::ssk: {
      const int m = integer_rate(rate, "ssk");
      const std::uint64_t count = std::uint64_t{1} << m;
      if (count > static_cast<std::uint64_t>(n_t))
        throw RateInfeasibleError("ssk needs 2^m <= N_T");
      auto klass = enumerate_weight_class(n_t, 1);
      klass.resize(count);
      real.design_alphabet = fixed_length_alphabet(n_t, std::move(klass), m);
      real.label = "ssk";
      break;
    }
    case Scheme::gssk: {
      const int m = integer_rate(rate, "gssk");
      real.design_alphabet = build_gssk(n_t, m);
      real.label = "gssk";
      break;
    }
    case Scheme::hssk: {
      const int m = integer_rate(rate, "hssk");
      if (d_min == 2) {
        real.design_alphabet = build_hssk_dmin2(n_t, m);
      } else {
        const CodePartition part = build_code_dmin(n_t, d_min);
        auto all = part.flatten();
        const std::uint64_t count = std::uint64_t{1} << m;
        if (count > all.size())
          throw RateInfeasibleError("hssk d_min=" + std::to_string(d_min) + " code has only " +
                                    std::to_string(all.size()) + " words");
        all.resize(count);
        real.design_alphabet = fixed_length_alphabet(n_t, std::move(all), m);
      }
      real.label = d_min == 2 ? "hssk" : "hssk(dmin=" + std::to_string(d_min) + ")";
      break;
    }
    case Scheme::ee_hssk: {
      const CodePartition part = build_code_dmin(n_t, d_min);
      const DesignProblem problem = DesignProblem::from_partition(part, m_limit, rate);
      const DesignSolution sol = solve(problem);
      Alphabet a;
      a.n_t = n_t;
      for (const auto& [w, members] : part.classes) {
        if (w > m_limit) continue;
        const double p = sol.priors.at(w);
        if (!(p > 0.0)) continue;
        for (const auto& s : members) {
          a.symbols.push_back(s);
          a.priors.push_back(p);
        }
      }
      a.min_distance_exhaustive();
      real.design_alphabet = std::move(a);
      real.label = "ee-hssk(M=" + std::to_string(m_limit) + ")";
      break;
    }
    case Scheme::qam:
      throw Error("build_scheme: the QAM baseline has no SSK-family alphabet");
  }

  real.design_alphabet.validate();
  real.codebook = scheme == Scheme::ee_hssk
                      ? PrefixCodebook::build(real.design_alphabet)
                      : PrefixCodebook::from_bitmap(real.design_alphabet);
  real.detector_alphabet = real.codebook.achieved_alphabet();
  const AchievedStats stats = real.codebook.achieved_stats();
  real.achieved_rate = stats.rate_bits;
  real.achieved_power = stats.avg_power;
  return real;
}

SimResult run_link_sim(const SimSpec& spec) {
  spec.validate();
  if (spec.scheme == Scheme::qam) return qam_baseline(spec);

  const SchemeRealization real =
      build_scheme(spec.scheme, spec.n_t, spec.rate, spec.d_min, spec.max_rf);

  SimResult result;
  result.spec = spec;
  result.scheme_label = real.label;
  result.achieved_rate = real.achieved_rate;
  result.achieved_power = real.achieved_power;

  FramePlan plan{spec.frame_bits, &real.codebook};
  plan.validate();
  const int l_max = plan.l_max();

  for (std::size_t p = 0; p < spec.ebn0_db.size(); ++p) {
    LinkConfig cfg;
    cfg.n_t = spec.n_t;
    cfg.n_r = spec.n_r;
    cfg.es = 1.0;
    cfg.n0 = n0_for_ebn0(std::pow(10.0, spec.ebn0_db[p] / 10.0), cfg.es, real.achieved_power,
                         real.achieved_rate);
    cfg.validate();

    struct Context {
      TableDetector det;
      Eigen::MatrixXcd h;
    };
    auto make_context = [&]() {
      return Context{TableDetector(real.detector_alphabet, cfg, spec.metric),
                     Eigen::MatrixXcd(cfg.n_r, cfg.n_t)};
    };

    auto frame_fn = [&](Context& ctx, std::uint64_t f) {
      RandomStream rng = RandomStream::derive(spec.seed, p, f);
      const BitString frame = rng.random_bits(spec.frame_bits);
      const BitString lookahead = rng.random_bits(l_max);
      const FrameEncoding enc = frame_to_symbols(plan, frame, lookahead);

      auto pass = [&](std::vector<std::size_t>& detected) {
        detected.resize(enc.symbols.size());
        if (spec.fading == FadingMode::per_frame) {
          redraw_channel(ctx.h, cfg, rng);
          ctx.det.load(ctx.h);
        }
        for (std::size_t i = 0; i < enc.symbols.size(); ++i) {
          if (spec.fading == FadingMode::per_symbol) {
            redraw_channel(ctx.h, cfg, rng);
            ctx.det.load(ctx.h);
          }
          detected[i] = ctx.det.transmit_and_detect(enc.symbols[i], rng);
        }
      };

      std::vector<std::size_t> detected;
      pass(detected);

      Tallies t;
      t.frames = 1;
      t.symbols = enc.symbols.size();
      for (std::size_t i = 0; i < enc.symbols.size(); ++i)
        if (detected[i] != enc.symbols[i]) ++t.symbol_errors;

      const FrameVerdict off = symbols_to_frame(plan, detected, frame);
      t.fe_off = off.frame_error;
      t.fe_paper = off.ed_flag ? 0 : off.frame_error;
      if (spec.arq == ArqMode::off) {
        t.fe_selected = t.fe_off;
      } else if (spec.arq == ArqMode::paper) {
        t.fe_selected = t.fe_paper;
      } else {
        if (off.ed_flag) {
          std::vector<std::size_t> again;
          pass(again);
          t.fe_selected = symbols_to_frame(plan, again, frame).frame_error;
        } else {
          t.fe_selected = off.frame_error;
        }
      }
      return t;
    };

    const Tallies t = simulate_point(spec, make_context, frame_fn);
    result.points.push_back(finish_point(spec, spec.ebn0_db[p], t));
    result.all_reliable = result.all_reliable && result.points.back().reliable;
  }
  return result;
}

SimResult qam_baseline(const SimSpec& spec) {
  spec.validate();
  if (spec.scheme != Scheme::qam) throw Error("qam_baseline expects scheme = qam");
  const int m = integer_rate(spec.rate, "qam");
  const int streams = spec.n_t;
  const int bits_per_stream = m / streams;
  const QamConstellation pam = QamConstellation::make(bits_per_stream);
  const std::size_t combos = std::size_t{1} << m;

  // Product constellation: combo index = natural binary of the m-bit group,
  // stream 0 taking the most significant bits.
  std::vector<std::complex<double>> sym(combos * streams);
  for (std::size_t b = 0; b < combos; ++b)
    for (int s = 0; s < streams; ++s) {
      const std::size_t label =
          (b >> (static_cast<std::size_t>(streams - 1 - s) * bits_per_stream)) &
          ((std::size_t{1} << bits_per_stream) - 1);
      sym[b * streams + s] = pam.points[label];
    }

  SimResult result;
  result.spec = spec;
  result.scheme_label = std::to_string(std::size_t{1} << bits_per_stream) + "-qam(" +
                        std::to_string(streams) + "x" + std::to_string(spec.n_r) + ")";
  result.achieved_rate = m;
  result.achieved_power = streams;  // unit average energy per active stream

  const int f_bits = spec.frame_bits;
  const int n_sym = (f_bits + m - 1) / m;
  const int borrowed = n_sym * m - f_bits;

  for (std::size_t p = 0; p < spec.ebn0_db.size(); ++p) {
    LinkConfig cfg;
    cfg.n_t = streams;
    cfg.n_r = spec.n_r;
    cfg.es = 1.0;
    cfg.n0 = n0_for_ebn0(std::pow(10.0, spec.ebn0_db[p] / 10.0), cfg.es,
                         result.achieved_power, result.achieved_rate);
    cfg.validate();
    const double sqrt_es = std::sqrt(cfg.es);

    struct Context {
      Eigen::MatrixXcd h;
      std::vector<std::complex<double>> pts;  // combos x n_r
      std::vector<std::complex<double>> y;
    };
    auto make_context = [&]() {
      return Context{Eigen::MatrixXcd(cfg.n_r, streams),
                     std::vector<std::complex<double>>(combos * cfg.n_r),
                     std::vector<std::complex<double>>(cfg.n_r)};
    };
    auto load_points = [&](Context& ctx) {
      for (std::size_t i = 0; i < combos; ++i)
        for (int r = 0; r < cfg.n_r; ++r) {
          std::complex<double> acc = 0.0;
          for (int s = 0; s < streams; ++s) acc += ctx.h(r, s) * sym[i * streams + s];
          ctx.pts[i * cfg.n_r + r] = sqrt_es * acc;
        }
    };

    auto frame_fn = [&](Context& ctx, std::uint64_t f) {
      RandomStream rng = RandomStream::derive(spec.seed, p, f);
      const BitString frame = rng.random_bits(f_bits);
      const BitString extra = rng.random_bits(borrowed);
      const BitString all = frame + extra;

      Tallies t;
      t.frames = 1;
      t.symbols = static_cast<std::uint64_t>(n_sym);

      BitString recovered;
      recovered.reserve(all.size());
      const bool block = spec.fading == FadingMode::per_frame;
      if (block) {
        redraw_channel(ctx.h, cfg, rng);
        load_points(ctx);
      }
      for (int g = 0; g < n_sym; ++g) {
        std::size_t tx = 0;
        for (int b = 0; b < m; ++b) tx = (tx << 1) | (all[g * m + b] == '1');
        if (!block) {
          redraw_channel(ctx.h, cfg, rng);
          load_points(ctx);
        }
        const double var_part = cfg.n0 / 4.0;
        for (int r = 0; r < cfg.n_r; ++r)
          ctx.y[r] = ctx.pts[tx * cfg.n_r + r] + rng.cgaussian(var_part);
        // ML over the product constellation (equiprobable groups).
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_idx = 0;
        for (std::size_t i = 0; i < combos; ++i) {
          double dist2 = 0.0;
          for (int r = 0; r < cfg.n_r; ++r) {
            const double re = ctx.y[r].real() - ctx.pts[i * cfg.n_r + r].real();
            const double im = ctx.y[r].imag() - ctx.pts[i * cfg.n_r + r].imag();
            dist2 += re * re + im * im;
          }
          if (dist2 < best) {
            best = dist2;
            best_idx = i;
          }
        }
        if (best_idx != tx) ++t.symbol_errors;
        for (int b = m - 1; b >= 0; --b) recovered.push_back(((best_idx >> b) & 1u) ? '1' : '0');
      }

      bool frame_error = false;
      for (int b = 0; b < f_bits; ++b)
        if (recovered[b] != frame[b]) {
          frame_error = true;
          break;
        }
      // Fixed-length mapping: the recovered length never leaves the ED
      // window, so ARQ has nothing to act on.
      t.fe_off = t.fe_paper = t.fe_selected = frame_error;
      return t;
    };

    const Tallies t = simulate_point(spec, make_context, frame_fn);
    result.points.push_back(finish_point(spec, spec.ebn0_db[p], t));
    result.all_reliable = result.all_reliable && result.points.back().reliable;
  }
  return result;
}

namespace {

double theoretical_power_at(int n_t, int d_min, int max_rf, double achieved_rate) {
  const CodePartition part = build_code_dmin(n_t, d_min);
  const DesignProblem problem =
      DesignProblem::from_partition(part, max_rf > 0 ? max_rf : n_t, achieved_rate);
  return solve(problem).avg_power;
}

}  // namespace

std::vector<SweepRow> run_power_rate_sweep(int n_t, int d_min, std::span<const double> rates,
                                           std::span<const SweepScheme> schemes) {
  std::vector<SweepRow> rows;
  for (const SweepScheme& s : schemes) {
    for (double m : rates) {
      SweepRow row;
      row.target_rate = m;
      try {
        const SchemeRealization real = build_scheme(s.scheme, n_t, m, d_min, s.max_rf);
        row.scheme = real.label;
        row.rate_bits = real.achieved_rate;
        row.avg_power = real.achieved_power;
        const int opt_rf = s.scheme == Scheme::ee_hssk && s.max_rf > 0 ? s.max_rf : 0;
        row.theoretical_power = theoretical_power_at(n_t, d_min, opt_rf, real.achieved_rate);
      } catch (const RateInfeasibleError&) {
        continue;  // infeasible rate for this scheme
      }
      rows.push_back(row);
    }
  }
  return rows;
}

std::string simulate_csv(const SimResult& result) {
  std::ostringstream os;
  os << "# scheme=" << result.scheme_label << " nt=" << result.spec.n_t
     << " nr=" << result.spec.n_r << " rate=" << result.spec.rate
     << " dmin=" << result.spec.d_min << " achieved_rate=" << result.achieved_rate
     << " achieved_power=" << result.achieved_power << " seed=" << result.spec.seed
     << " frame_bits=" << result.spec.frame_bits << "\n";
  os << "ebn0_db,ser,ser_ci,fer,fer_ci,symbols,frames\n";
  os << std::setprecision(10);
  for (const SimPoint& p : result.points) {
    os << p.ebn0_db << ',' << p.ser << ',' << p.ser_ci << ',' << p.fer << ',' << p.fer_ci
       << ',' << p.symbols << ',' << p.frames << '\n';
  }
  return os.str();
}

std::string sweep_csv(std::span<const SweepRow> rows) {
  std::ostringstream os;
  os << "scheme,rate_bits,avg_power,theoretical_power\n";
  os << std::setprecision(10);
  for (const SweepRow& r : rows)
    os << r.scheme << ',' << r.rate_bits << ',' << r.avg_power << ',' << r.theoretical_power
       << '\n';
  return os.str();
}

}  // namespace ssk
