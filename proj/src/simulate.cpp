#include "fbawgn/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include "fbawgn/gauss.hpp"
#include "fbawgn/parallel.hpp"
#include "fbawgn/shell.hpp"

namespace fbawgn::sim {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLn2Pi = 1.8378770664093454835606594728112;
constexpr char kBinaryMagic[8] = {'F', 'B', 'A', 'W', 'G', 'N', 'B', '1'};
constexpr std::size_t kMaxCodebookDoubles = 200'000'000;

double norm_sq(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

// ln B(1/2, (n-1)/2), the zero-drift shell normalizer.
double log_beta_half(int n) {
  return gauss::log_beta(0.5, 0.5 * (n - 1));
}

struct MeanStd {
  double mean = 0.0;
  double stderr_est = 0.0;
};

MeanStd reduce_blocks(const std::vector<double>& sums,
                      const std::vector<double>& sumsqs, std::uint64_t n) {
  double s = 0.0, s2 = 0.0;
  for (std::size_t b = 0; b < sums.size(); ++b) {
    s += sums[b];
    s2 += sumsqs[b];
  }
  MeanStd out;
  out.mean = s / static_cast<double>(n);
  if (n > 1) {
    const double var =
        std::max(0.0, (s2 - s * s / static_cast<double>(n)) /
                          static_cast<double>(n - 1));
    out.stderr_est = std::sqrt(var / static_cast<double>(n));
  }
  return out;
}

// One channel realization, reduced to the sufficient pair: the first noise
// coordinate and the squared norm of the remaining n-1 coordinates.
struct ChannelDraw {
  double z1;
  double rest_sq;  // ~ chi^2_{n-1}
};

ChannelDraw draw_channel(int n, CounterRng& rng) {
  ChannelDraw d;
  d.z1 = rng.normal();
  d.rest_sq = rng.chi_square(static_cast<double>(n - 1));
  return d;
}

double cosine_with_true_codeword(int n, double p, const ChannelDraw& d) {
  const double axis = std::sqrt(static_cast<double>(n) * p) + d.z1;
  const double y_norm = std::sqrt(axis * axis + d.rest_sq);
  return std::clamp(axis / y_norm, -1.0, 1.0);
}

std::vector<double> pairwise_logp_table(int n, double p, std::uint64_t trials,
                                        std::uint64_t seed, unsigned workers) {
  std::vector<double> logp(trials);
  parallel_blocks(trials, kMcBlockSize, workers,
                  [&](std::size_t lo, std::size_t hi, std::size_t) {
                    for (std::size_t t = lo; t < hi; ++t) {
                      CounterRng rng(seed, t);
                      const ChannelDraw d = draw_channel(n, rng);
                      logp[t] =
                          pairwise_tail_log(n, cosine_with_true_codeword(n, p, d));
                    }
                  });
  return logp;
}

MeanStd eps_from_logp(double m_log, const std::vector<double>& logp) {
  const std::size_t n = logp.size();
  const std::size_t n_blocks = (n + kMcBlockSize - 1) / kMcBlockSize;
  std::vector<double> sums(n_blocks, 0.0), sumsqs(n_blocks, 0.0);
  for (std::size_t b = 0; b < n_blocks; ++b) {
    const std::size_t lo = b * kMcBlockSize;
    const std::size_t hi = std::min(n, lo + kMcBlockSize);
    double s = 0.0, s2 = 0.0;
    for (std::size_t t = lo; t < hi; ++t) {
      const double lv = m_log + logp[t];
      const double v = lv >= 0.0 ? 1.0 : std::exp(lv);
      s += v;
      s2 += v * v;
    }
    sums[b] = s;
    sumsqs[b] = s2;
  }
  return reduce_blocks(sums, sumsqs, n);
}

}  // namespace

SphereCodebook::SphereCodebook(int n, int m, double p, std::uint64_t seed,
                               std::vector<double> words)
    : n_(n), m_(m), p_(p), seed_(seed), words_(std::move(words)) {
  if (n_ < 1 || m_ < 1)
    throw std::invalid_argument("SphereCodebook: n and m must be >= 1");
  if (!(p_ > 0.0))
    throw std::invalid_argument("SphereCodebook: p must be > 0");
  if (words_.size() != static_cast<std::size_t>(n_) * m_)
    throw std::invalid_argument("SphereCodebook: word buffer size mismatch");
  const double target = static_cast<double>(n_) * p_;
  for (int i = 0; i < m_; ++i) {
    const double nsq = norm_sq(codeword(i));
    if (std::abs(nsq - target) > 1e-9 * target)
      throw std::invalid_argument(
          "SphereCodebook: codeword " + std::to_string(i) +
          " violates the exact-power constraint");
  }
}

std::vector<double> sample_sphere_point(int n, double radius,
                                        CounterRng& rng) {
  if (n < 1) throw std::invalid_argument("sample_sphere_point: n >= 1");
  if (!(radius > 0.0))
    throw std::invalid_argument("sample_sphere_point: radius > 0");
  std::vector<double> x(n);
  for (;;) {
    double nsq = 0.0;
    for (int i = 0; i < n; ++i) {
      x[i] = rng.normal();
      nsq += x[i] * x[i];
    }
    if (nsq > 0.0) {
      const double scale = radius / std::sqrt(nsq);
      for (double& xi : x) xi *= scale;
      return x;
    }
  }
}

SphereCodebook generate_codebook(int n, int m, double p, std::uint64_t seed) {
  if (n < 1 || m < 1)
    throw std::invalid_argument("generate_codebook: n and m must be >= 1");
  const std::size_t total = static_cast<std::size_t>(n) * m;
  if (total > kMaxCodebookDoubles)
    throw std::length_error("generate_codebook: n*m exceeds the configured limit");
  const double radius = std::sqrt(static_cast<double>(n) * p);
  std::vector<double> words(total);
  for (int i = 0; i < m; ++i) {
    CounterRng rng(seed, static_cast<std::uint64_t>(i));
    const std::vector<double> x = sample_sphere_point(n, radius, rng);
    std::copy(x.begin(), x.end(),
              words.begin() + static_cast<std::size_t>(i) * n);
  }
  return SphereCodebook(n, m, p, seed, std::move(words));
}

void save_codebook_binary(const SphereCodebook& book,
                          const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  const std::uint64_t n = book.n(), m = book.m(), seed = book.seed();
  const double p = book.p();
  out.write(kBinaryMagic, sizeof(kBinaryMagic));
  out.write(reinterpret_cast<const char*>(&n), sizeof(n));
  out.write(reinterpret_cast<const char*>(&m), sizeof(m));
  out.write(reinterpret_cast<const char*>(&p), sizeof(p));
  out.write(reinterpret_cast<const char*>(&seed), sizeof(seed));
  for (int i = 0; i < book.m(); ++i) {
    const auto w = book.codeword(i);
    out.write(reinterpret_cast<const char*>(w.data()),
              static_cast<std::streamsize>(w.size() * sizeof(double)));
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

void save_codebook_csv(const SphereCodebook& book, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  char buf[64];
  out << "# fbawgn-codebook v1\n";
  out << "n,m,p,seed\n";
  std::snprintf(buf, sizeof(buf), "%.17g", book.p());
  out << book.n() << ',' << book.m() << ',' << buf << ',' << book.seed()
      << '\n';
  for (int i = 0; i < book.m(); ++i) {
    const auto w = book.codeword(i);
    for (std::size_t j = 0; j < w.size(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", w[j]);
      out << (j ? "," : "") << buf;
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

SphereCodebook load_codebook(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  char magic[8] = {};
  in.read(magic, sizeof(magic));
  if (in && std::memcmp(magic, kBinaryMagic, sizeof(magic)) == 0) {
    std::uint64_t n = 0, m = 0, seed = 0;
    double p = 0.0;
    in.read(reinterpret_cast<char*>(&n), sizeof(n));
    in.read(reinterpret_cast<char*>(&m), sizeof(m));
    in.read(reinterpret_cast<char*>(&p), sizeof(p));
    in.read(reinterpret_cast<char*>(&seed), sizeof(seed));
    if (!in || n == 0 || m == 0 || n * m > kMaxCodebookDoubles)
      throw std::runtime_error("corrupt codebook header: " + path);
    std::vector<double> words(n * m);
    in.read(reinterpret_cast<char*>(words.data()),
            static_cast<std::streamsize>(words.size() * sizeof(double)));
    if (!in) throw std::runtime_error("truncated codebook: " + path);
    return SphereCodebook(static_cast<int>(n), static_cast<int>(m), p, seed,
                          std::move(words));
  }

  in.clear();
  in.seekg(0);
  std::string line;
  if (!std::getline(in, line) || line.rfind("# fbawgn-codebook", 0) != 0)
    throw std::runtime_error("unrecognized codebook format: " + path);
  if (!std::getline(in, line))  // column names
    throw std::runtime_error("truncated codebook: " + path);
  if (!std::getline(in, line))
    throw std::runtime_error("truncated codebook: " + path);
  std::uint64_t n = 0, m = 0, seed = 0;
  double p = 0.0;
  {
    std::istringstream hdr(line);
    char comma;
    if (!(hdr >> n >> comma >> m >> comma >> p >> comma >> seed))
      throw std::runtime_error("corrupt codebook header: " + path);
  }
  if (n == 0 || m == 0 || n * m > kMaxCodebookDoubles)
    throw std::runtime_error("corrupt codebook header: " + path);
  std::vector<double> words;
  words.reserve(n * m);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) words.push_back(std::stod(cell));
  }
  return SphereCodebook(static_cast<int>(n), static_cast<int>(m), p, seed,
                        std::move(words));
}

int decode_max_inner(const SphereCodebook& book, std::span<const double> y) {
  if (y.size() != static_cast<std::size_t>(book.n()))
    throw std::invalid_argument("decode_max_inner: dimension mismatch");
  int best = 0;
  double best_inner = -kInf;
  for (int i = 0; i < book.m(); ++i) {
    const auto w = book.codeword(i);
    double inner = 0.0;
    for (std::size_t j = 0; j < y.size(); ++j) inner += w[j] * y[j];
    if (inner > best_inner) {
      best_inner = inner;
      best = i;
    }
  }
  return best;
}

double pairwise_tail_exact(int n, double c) {
  if (n < 2) throw std::invalid_argument("pairwise_tail_exact: n >= 2");
  if (c <= -1.0) return 1.0;
  if (c >= 1.0) return 0.0;
  if (c >= 0.0)
    return 0.5 *
           gauss::reg_inc_beta((1.0 - c) * (1.0 + c), 0.5 * (n - 1), 0.5);
  return 1.0 - pairwise_tail_exact(n, -c);
}

double pairwise_tail_log(int n, double c) {
  if (n < 2) throw std::invalid_argument("pairwise_tail_log: n >= 2");
  if (c <= -1.0) return 0.0;
  if (c >= 1.0) return -kInf;
  if (c >= 0.0)
    return -0.69314718055994530941723212145818 +
           gauss::reg_inc_beta_log((1.0 - c) * (1.0 + c), 0.5 * (n - 1), 0.5);
  return std::log1p(-std::exp(pairwise_tail_log(n, -c)));
}

double log_induced_output_density(int n, double p, double s) {
  return -0.5 * n * kLn2Pi - 0.5 * n * (s + p) +
         shell::shell_normalizer_log(n, p, s) - log_beta_half(n);
}

double decoding_metric(int n, double p, double inner, double s) {
  return inner - shell::shell_normalizer_log(n, p, s) + log_beta_half(n);
}

double g_exact(int n, double p, double s, double t) {
  if (!(p > 0.0)) throw std::invalid_argument("g_exact: p > 0");
  const double threshold =
      t + shell::shell_normalizer_log(n, p, s) - log_beta_half(n);
  const double c = threshold / (static_cast<double>(n) * std::sqrt(p * s));
  return pairwise_tail_exact(n, c);
}

RcuEstimate rcu_error_estimate(int n, double m_log, double p,
                               std::uint64_t trials, std::uint64_t seed,
                               unsigned workers) {
  if (n < 2) throw std::invalid_argument("rcu_error_estimate: n >= 2");
  if (trials < 1) throw std::invalid_argument("rcu_error_estimate: trials >= 1");
  if (!(p > 0.0)) throw std::invalid_argument("rcu_error_estimate: p > 0");

  const std::size_t n_blocks = (trials + kMcBlockSize - 1) / kMcBlockSize;
  std::vector<double> sums(n_blocks, 0.0), sumsqs(n_blocks, 0.0);
  parallel_blocks(trials, kMcBlockSize, workers,
                  [&](std::size_t lo, std::size_t hi, std::size_t b) {
                    double s = 0.0, s2 = 0.0;
                    for (std::size_t t = lo; t < hi; ++t) {
                      CounterRng rng(seed, t);
                      const ChannelDraw d = draw_channel(n, rng);
                      const double lp = pairwise_tail_log(
                          n, cosine_with_true_codeword(n, p, d));
                      const double lv = m_log + lp;
                      const double v = lv >= 0.0 ? 1.0 : std::exp(lv);
                      s += v;
                      s2 += v * v;
                    }
                    sums[b] = s;
                    sumsqs[b] = s2;
                  });
  const MeanStd ms = reduce_blocks(sums, sumsqs, trials);

  RcuEstimate est;
  est.n = n;
  est.m_log = m_log;
  est.eps_hat = ms.mean;
  est.stderr_est = ms.stderr_est;
  est.trials = trials;
  est.seed = seed;
  return est;
}

BoundResult rcu_max_rate(int n, double eps, double p, std::uint64_t trials,
                         double tol, std::uint64_t seed, unsigned workers) {
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("rcu_max_rate: eps must be in (0,1)");
  if (!(tol > 0.0)) throw std::invalid_argument("rcu_max_rate: tol > 0");
  if (trials < 2) throw std::invalid_argument("rcu_max_rate: trials >= 2");
  if (trials > 50'000'000)
    throw std::invalid_argument("rcu_max_rate: trials exceed the cache limit");

  // All candidate rates are scored against one common set of channel
  // realizations, so the acceptance test eps_hat + 2 stderr <= eps is
  // pathwise monotone in m_log and bisection is exact.
  const std::vector<double> logp =
      pairwise_logp_table(n, p, trials, seed, workers);
  auto accepts = [&](double m_log, MeanStd* out = nullptr) {
    const MeanStd ms = eps_from_logp(m_log, logp);
    if (out) *out = ms;
    return ms.mean + 2.0 * ms.stderr_est <= eps;
  };

  if (!accepts(0.0))
    throw BracketError(
        "rcu_max_rate: target eps unreachable even at a single codeword");

  const SnrPoint snr(p);
  const double nC = static_cast<double>(n) * gauss::capacity(snr);
  const double disp = std::sqrt(static_cast<double>(n) * gauss::dispersion(snr)) *
                      gauss::std_normal_cdf_inv(eps);
  double lo = 0.0;
  double hi = std::max(1.0, nC + disp + std::log(static_cast<double>(n)) + 8.0);
  for (int guard = 0; accepts(hi); ++guard) {
    lo = hi;
    hi += 8.0;
    if (guard > 200)
      throw BracketError("rcu_max_rate: failed to bracket the target rate");
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (accepts(mid))
      lo = mid;
    else
      hi = mid;
  }

  MeanStd at_rate;
  accepts(lo, &at_rate);

  BoundResult out;
  out.total_nats = lo;
  out.capacity_term = nC;
  out.dispersion_term = disp;
  out.third_order_term = lo - nC - disp;  // measured residual beyond the NA
  out.extras = {{"eps_hat", at_rate.mean}, {"tol_nats", tol}};
  out.mc_stderr = at_rate.stderr_est;
  out.provenance = McProvenance{seed, trials};
  return out;
}

TypicalSetSpec::TypicalSetSpec(int n, double p, double delta)
    : n(n), p(p), delta(delta) {
  if (n < 2) throw std::invalid_argument("TypicalSetSpec: n >= 2");
  if (!(p > 0.0)) throw std::invalid_argument("TypicalSetSpec: p > 0");
  if (!(delta > 0.0)) throw std::invalid_argument("TypicalSetSpec: delta > 0");
}

TypicalSetSpec TypicalSetSpec::with_default_delta(int n, double p) {
  return TypicalSetSpec(n, p, std::pow(static_cast<double>(n), -1.0 / 3.0));
}

TypicalSetEstimate typical_set_prob(const TypicalSetSpec& spec,
                                    std::uint64_t trials, std::uint64_t seed,
                                    unsigned workers) {
  if (trials < 1) throw std::invalid_argument("typical_set_prob: trials >= 1");
  const double lo_edge = spec.p + 1.0 - spec.delta;
  const double hi_edge = spec.p + 1.0 + spec.delta;
  const double root_np = std::sqrt(static_cast<double>(spec.n) * spec.p);

  const std::size_t n_blocks = (trials + kMcBlockSize - 1) / kMcBlockSize;
  std::vector<double> sums(n_blocks, 0.0), sumsqs(n_blocks, 0.0);
  parallel_blocks(trials, kMcBlockSize, workers,
                  [&](std::size_t lo, std::size_t hi, std::size_t b) {
                    double s = 0.0;
                    for (std::size_t t = lo; t < hi; ++t) {
                      CounterRng rng(seed, t);
                      const ChannelDraw d = draw_channel(spec.n, rng);
                      const double axis = root_np + d.z1;
                      const double val =
                          (axis * axis + d.rest_sq) / static_cast<double>(spec.n);
                      if (val < lo_edge || val > hi_edge) s += 1.0;
                    }
                    sums[b] = s;
                    sumsqs[b] = s;  // indicator: v^2 == v
                  });
  const MeanStd ms = reduce_blocks(sums, sumsqs, trials);

  TypicalSetEstimate est;
  est.prob_complement = ms.mean;
  est.stderr_est = ms.stderr_est;
  est.trials = trials;
  est.seed = seed;
  return est;
}

double output_density_ratio_bound(int n, double p, double delta,
                                  int grid_points) {
  if (grid_points < 2)
    throw std::invalid_argument("output_density_ratio_bound: grid_points >= 2");
  if (!(p > 0.0))
    throw std::invalid_argument("output_density_ratio_bound: p > 0");
  const double s_lo = p + 1.0 - delta;
  const double s_hi = p + 1.0 + delta;
  if (!(s_lo > 0.0))
    throw std::invalid_argument(
        "output_density_ratio_bound: window extends below s = 0");

  const double lbh = log_beta_half(n);
  double best = -kInf;
  for (int i = 0; i < grid_points; ++i) {
    const double s =
        s_lo + (s_hi - s_lo) * static_cast<double>(i) / (grid_points - 1);
    const double log_ratio = -0.5 * n * (s + p) +
                             shell::shell_normalizer_log(n, p, s) - lbh +
                             0.5 * n * std::log1p(p) +
                             0.5 * n * s / (1.0 + p);
    best = std::max(best, log_ratio);
  }
  return 1.01 * std::exp(best);
}

BoundResult achievable_log_m(int n, double eps, double p,
                             const AchievableOptions& opt) {
  if (n < 3) throw std::invalid_argument("achievable_log_m: n >= 3");
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("achievable_log_m: eps must be in (0,1)");

  const SnrPoint snr(p);
  const double v = gauss::dispersion(snr);
  const double b_const =
      6.0 * gauss::third_abs_moment(snr) / (v * std::sqrt(v));
  const double g_const = shell::metric_tail_g(p);
  const double delta = std::pow(static_cast<double>(n), -1.0 / 3.0);
  const double j_const = output_density_ratio_bound(n, p, delta, opt.grid_points);
  const TypicalSetEstimate xi = typical_set_prob(
      TypicalSetSpec(n, p, delta), opt.trials, opt.seed, opt.workers);

  const double root_n = std::sqrt(static_cast<double>(n));
  const double eps_eff =
      opt.epsilon_backoff
          ? eps - (b_const + g_const) / root_n - xi.prob_complement
          : eps;
  if (opt.epsilon_backoff && !(eps_eff > 0.0 && eps_eff < 1.0))
    throw VacuousBoundError(
        "achievable_log_m: bound vacuous at n = " + std::to_string(n) +
            " (effective eps = " + std::to_string(eps_eff) + ")",
        eps_eff);

  BoundResult out;
  out.capacity_term = static_cast<double>(n) * gauss::capacity(snr);
  out.dispersion_term =
      std::sqrt(static_cast<double>(n) * v) * gauss::std_normal_cdf_inv(eps_eff);
  out.third_order_term = 0.5 * std::log(static_cast<double>(n));
  out.constant_term = -std::log(g_const * j_const);
  out.total_nats = out.capacity_term + out.dispersion_term +
                   out.third_order_term + out.constant_term;
  out.extras = {{"B", b_const},
                {"G", g_const},
                {"J", j_const},
                {"xi_n", xi.prob_complement},
                {"xi_stderr", xi.stderr_est},
                {"eps_effective", eps_eff}};
  if (opt.epsilon_backoff) {
    const double sensitivity =
        std::sqrt(static_cast<double>(n) * v) /
        gauss::std_normal_pdf(gauss::std_normal_cdf_inv(eps_eff));
    out.mc_stderr = sensitivity * xi.stderr_est;
  } else {
    out.mc_stderr = 0.0;
  }
  out.provenance = McProvenance{opt.seed, opt.trials};
  return out;
}

}  // namespace fbawgn::sim
