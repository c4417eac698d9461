#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fbawgn/rng.hpp"
#include "fbawgn/types.hpp"

namespace fbawgn::sim {

// A random codebook on the power sphere: m codewords of length n, each with
// squared norm exactly n*p. Deterministic given the seed; codeword i is
// drawn from stream i, independent of how many are generated.
class SphereCodebook {
 public:
  SphereCodebook(int n, int m, double p, std::uint64_t seed,
                 std::vector<double> words);

  int n() const { return n_; }
  int m() const { return m_; }
  double p() const { return p_; }
  std::uint64_t seed() const { return seed_; }

  std::span<const double> codeword(int i) const {
    return {words_.data() + static_cast<std::size_t>(i) * n_,
            static_cast<std::size_t>(n_)};
  }

 private:
  int n_, m_;
  double p_;
  std::uint64_t seed_;
  std::vector<double> words_;
};

// Uniform point on the radius-r sphere in R^n (renormalized Gaussian
// direction; an exactly-zero draw is retried).
std::vector<double> sample_sphere_point(int n, double radius, CounterRng& rng);

SphereCodebook generate_codebook(int n, int m, double p, std::uint64_t seed);

// Codebook files carry a small (n, m, p, seed) header for reproducibility.
void save_codebook_binary(const SphereCodebook& book, const std::string& path);
void save_codebook_csv(const SphereCodebook& book, const std::string& path);
SphereCodebook load_codebook(const std::string& path);  // sniffs the format

// argmax_i <x(i), y>; on equal-norm books this is maximum likelihood and
// minimum Euclidean distance. Ties break to the smallest index.
int decode_max_inner(const SphereCodebook& book, std::span<const double> y);

// Exact law of the first coordinate of a uniform direction on the unit
// sphere in R^n: Pr(U >= c). The _log variant avoids underflow deep in the
// tail.
double pairwise_tail_exact(int n, double c);
double pairwise_tail_log(int n, double c);

// ln of the induced output density f_X W^n(y) at ||y||^2 = n*s, for X
// uniform on the power sphere.
double log_induced_output_density(int n, double p, double s);

// The max-likelihood decoding metric as a function of the inner product and
// the output norm: q = <x,y> - ln F_n(n,p,s) + ln B(1/2,(n-1)/2).
double decoding_metric(int n, double p, double inner, double s);

// Exact Pr(q(Xbar, Y) >= t | ||Y||^2 = n s) via the incomplete-beta tail.
double g_exact(int n, double p, double s, double t);

struct RcuEstimate {
  int n = 0;
  double m_log = 0.0;  // nats
  double eps_hat = 0.0;
  double stderr_est = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

// Monte Carlo RCU bound E[min{1, M Pr(<Xbar,Y> >= <X,Y> | X,Y)}] with the
// inner probability computed exactly per trial. Bit-identical for fixed
// (seed, trials) at any worker count.
RcuEstimate rcu_error_estimate(int n, double m_log, double p,
                               std::uint64_t trials, std::uint64_t seed,
                               unsigned workers = 0);

// Largest m_log (within tol nats) whose estimate satisfies
// eps_hat + 2 stderr <= eps, by bisection over a common set of channel
// realizations. Throws BracketError when eps is unreachable at m_log = 0.
class BracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

BoundResult rcu_max_rate(int n, double eps, double p, std::uint64_t trials,
                         double tol, std::uint64_t seed, unsigned workers = 0);

struct TypicalSetSpec {
  int n = 0;
  double p = 0.0;
  double delta = 0.0;  // half-width of the norm window around P+1

  TypicalSetSpec(int n, double p, double delta);
  static TypicalSetSpec with_default_delta(int n, double p);  // delta=n^{-1/3}
};

struct TypicalSetEstimate {
  double prob_complement = 0.0;
  double stderr_est = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

TypicalSetEstimate typical_set_prob(const TypicalSetSpec& spec,
                                    std::uint64_t trials, std::uint64_t seed,
                                    unsigned workers = 0);

// Numerical sup over the norm window of f_X W^n / f*_Y (grid max times a
// 1.01 safety factor).
double output_density_ratio_bound(int n, double p, double delta,
                                  int grid_points);

struct AchievableOptions {
  std::uint64_t trials = 200000;  // for the typical-set estimate
  std::uint64_t seed = 1;
  unsigned workers = 0;
  int grid_points = 33;
  // The finite-n epsilon backoff (B+G)/sqrt(n) + xi_n makes the bound vacuous
  // below roughly ((B+G)/eps)^2; with the backoff disabled the same
  // construction is evaluated with those terms absorbed into the O(1) part,
  // which is the form used for desk-scale simulation checks.
  bool epsilon_backoff = true;
};

// The achievable log-cardinality n C + sqrt(n V) Phi^{-1}(eps') + (1/2) ln n
// - ln(G J), with eps' = eps - (B+G)/sqrt(n) - xi_n when the backoff is
// enabled. Throws VacuousBoundError when eps' leaves (0,1).
BoundResult achievable_log_m(int n, double eps, double p,
                             const AchievableOptions& opt = {});

}  // namespace fbawgn::sim
