#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <vector>

#include "fbawgn/gauss.hpp"
#include "fbawgn/rng.hpp"
#include "fbawgn/shell.hpp"
#include "fbawgn/simulate.hpp"

using namespace fbawgn;

namespace {

double norm_sq(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

std::filesystem::path temp_path(const char* name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("sample_sphere_point") {
  SUBCASE("n = 1 gives both signs at the exact radius") {
    int plus = 0, minus = 0;
    for (int i = 0; i < 1000; ++i) {
      CounterRng rng(5, i);
      const auto x = sim::sample_sphere_point(1, 2.5, rng);
      REQUIRE(x.size() == 1);
      CHECK(std::abs(std::abs(x[0]) - 2.5) <= 1e-12);
      (x[0] > 0 ? plus : minus)++;
    }
    CHECK(plus > 400);
    CHECK(minus > 400);
  }

  SUBCASE("norm is exact and the first coordinate is centered") {
    const std::size_t draws = 1000000;
    double sum = 0.0, sumsq = 0.0;
    for (std::size_t i = 0; i < draws; ++i) {
      CounterRng rng(6, i);
      const auto x = sim::sample_sphere_point(8, 1.0, rng);
      sum += x[0];
      sumsq += x[0] * x[0];
    }
    const double mean = sum / draws;
    const double se = std::sqrt((sumsq / draws - mean * mean) / draws);
    CHECK(std::abs(mean) <= 4.0 * se);
  }

  SUBCASE("first-coordinate law matches the beta tail, before and after a "
          "fixed rotation") {
    const int n = 12;
    const std::size_t draws = 100000;

    // Householder reflection through a fixed direction; orthogonal, so the
    // reflected first coordinate must follow the same law.
    std::vector<double> v(n);
    {
      CounterRng vr(1001, 0);
      double nsq = 0.0;
      for (auto& vi : v) {
        vi = vr.normal();
        nsq += vi * vi;
      }
      for (auto& vi : v) vi /= std::sqrt(nsq);
    }

    std::vector<double> us(draws), rotated(draws);
    for (std::size_t i = 0; i < draws; ++i) {
      CounterRng rng(7, i);
      const auto x = sim::sample_sphere_point(n, 1.0, rng);
      us[i] = x[0];
      double dot = 0.0;
      for (int j = 0; j < n; ++j) dot += v[j] * x[j];
      rotated[i] = x[0] - 2.0 * dot * v[0];
    }

    for (auto* sample : {&us, &rotated}) {
      std::sort(sample->begin(), sample->end());
      double ks = 0.0;
      for (std::size_t i = 0; i < draws; ++i) {
        const double cdf = 1.0 - sim::pairwise_tail_exact(n, (*sample)[i]);
        ks = std::max(ks, std::abs(cdf - static_cast<double>(i) / draws));
        ks = std::max(ks, std::abs(cdf - static_cast<double>(i + 1) / draws));
      }
      CHECK(ks <= 0.01);
    }
  }
}

TEST_CASE("generate_codebook") {
  const auto a = sim::generate_codebook(4, 3, 1.0, 7);
  const auto b = sim::generate_codebook(4, 3, 1.0, 7);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 4; ++j)
      CHECK(a.codeword(i)[j] == b.codeword(i)[j]);

  for (int i = 0; i < 3; ++i)
    CHECK(std::abs(norm_sq(a.codeword(i)) - 4.0) <= 1e-9 * 4.0);

  // a longer book reuses the same per-index streams
  const auto c = sim::generate_codebook(4, 5, 1.0, 7);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 4; ++j)
      CHECK(a.codeword(i)[j] == c.codeword(i)[j]);

  CHECK_THROWS_AS(sim::generate_codebook(100000, 100000, 1.0, 1),
                  std::length_error);

  SUBCASE("off-diagonal Gram entries concentrate near zero") {
    const auto book = sim::generate_codebook(1000, 1000, 1.0, 11);
    CounterRng rng(12, 0);
    const std::size_t pairs = 50000;
    double sum = 0.0, sumsq = 0.0;
    for (std::size_t k = 0; k < pairs; ++k) {
      const int i = static_cast<int>(rng.uniform() * 1000);
      int j = static_cast<int>(rng.uniform() * 999);
      if (j >= i) j++;
      const auto wi = book.codeword(i), wj = book.codeword(j);
      double inner = 0.0;
      for (int t = 0; t < 1000; ++t) inner += wi[t] * wj[t];
      inner /= 1000.0;  // normalized by nP
      sum += inner;
      sumsq += inner * inner;
    }
    const double mean = sum / pairs;
    const double se = std::sqrt((sumsq / pairs - mean * mean) / pairs);
    CHECK(std::abs(mean) < 3.0 * se);
  }
}

TEST_CASE("decode_max_inner") {
  const auto book = sim::generate_codebook(8, 4, 1.0, 42);
  for (int m = 0; m < 4; ++m) {
    const auto w = book.codeword(m);
    CHECK(sim::decode_max_inner(book, w) == m);
  }

  SUBCASE("orthogonal construction") {
    // hand-built book: codewords on distinct axes, norm^2 = n p = 4
    std::vector<double> words{2, 0, 0, 0, 0, 2, 0, 0, 0, 0, 2, 0};
    const sim::SphereCodebook ortho(4, 3, 1.0, 0, words);
    const std::vector<double> y{0.7, 0.0, 0.0, 0.3};
    CHECK(sim::decode_max_inner(ortho, y) == 0);
  }

  SUBCASE("dimension mismatch") {
    const std::vector<double> y(7, 0.0);
    CHECK_THROWS_AS(sim::decode_max_inner(book, y), std::invalid_argument);
  }

  SUBCASE("equivalent to max metric and min distance on equal-norm books") {
    CounterRng rng(5, 999);
    for (int trial = 0; trial < 1000; ++trial) {
      std::vector<double> y(8);
      for (auto& v : y) v = 2.0 * rng.normal();
      const double s = norm_sq(y) / 8.0;
      if (!(s > 0.0)) continue;
      const int by_inner = sim::decode_max_inner(book, y);
      int by_q = -1, by_dist = -1;
      double best_q = -1e300, best_d = 1e300;
      for (int i = 0; i < 4; ++i) {
        const auto w = book.codeword(i);
        double inner = 0.0, dist = 0.0;
        for (int j = 0; j < 8; ++j) {
          inner += w[j] * y[j];
          dist += (w[j] - y[j]) * (w[j] - y[j]);
        }
        const double q = sim::decoding_metric(8, 1.0, inner, s);
        if (q > best_q) {
          best_q = q;
          by_q = i;
        }
        if (dist < best_d) {
          best_d = dist;
          by_dist = i;
        }
      }
      CHECK(by_inner == by_q);
      CHECK(by_inner == by_dist);
    }
  }
}

TEST_CASE("pairwise tail") {
  CHECK(sim::pairwise_tail_exact(10, 0.0) == 0.5);
  CHECK(sim::pairwise_tail_exact(10, 1.0) == 0.0);
  CHECK(sim::pairwise_tail_exact(10, 1.5) == 0.0);
  CHECK(sim::pairwise_tail_exact(10, -1.0) == 1.0);

  for (double c = -0.95; c < 1.0; c += 0.1)
    CHECK(sim::pairwise_tail_exact(3, c) ==
          doctest::Approx((1.0 - c) / 2.0).epsilon(1e-12));

  SUBCASE("matches Monte Carlo of sphere directions") {
    const int n = 20;
    const double c = 0.4;
    const std::size_t draws = 1000000;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < draws; ++i) {
      CounterRng rng(8, i);
      if (sim::sample_sphere_point(n, 1.0, rng)[0] >= c) hits++;
    }
    const double phat = static_cast<double>(hits) / draws;
    const double se = std::sqrt(phat * (1.0 - phat) / draws);
    CHECK(std::abs(sim::pairwise_tail_exact(n, c) - phat) <= 3.0 * se);
  }

  SUBCASE("log form agrees and reaches deep tails") {
    for (int n : {3, 64, 1000})
      for (double c : {-0.8, -0.2, 0.0, 0.3, 0.7}) {
        const double lin = sim::pairwise_tail_exact(n, c);
        if (lin > 1e-290)
          CHECK(sim::pairwise_tail_log(n, c) ==
                doctest::Approx(std::log(lin)).epsilon(1e-10));
      }
    CHECK(sim::pairwise_tail_log(4000, 0.8) < -700.0);
    CHECK(std::isfinite(sim::pairwise_tail_log(4000, 0.8)));
  }
}

TEST_CASE("rcu error estimate") {
  SUBCASE("strictly positive at a single codeword") {
    const auto est = sim::rcu_error_estimate(64, 0.0, 1.0, 20000, 7);
    CHECK(est.eps_hat > 0.0);
  }

  SUBCASE("pathwise monotone in M under common random numbers") {
    for (double m_log : {0.5, 2.0, 10.0, 20.0}) {
      const auto lo = sim::rcu_error_estimate(64, m_log, 1.0, 20000, 7);
      const auto hi =
          sim::rcu_error_estimate(64, m_log + std::log(2.0), 1.0, 20000, 7);
      CHECK(hi.eps_hat >= lo.eps_hat);
    }
  }

  SUBCASE("bit-identical across worker counts") {
    const auto w1 = sim::rcu_error_estimate(100, 20.0, 1.0, 30000, 9, 1);
    const auto w3 = sim::rcu_error_estimate(100, 20.0, 1.0, 30000, 9, 3);
    CHECK(w1.eps_hat == w3.eps_hat);
    CHECK(w1.stderr_est == w3.stderr_est);
  }

  SUBCASE("stderr shrinks like sqrt(trials)") {
    const auto small = sim::rcu_error_estimate(100, 25.0, 1.0, 10000, 13);
    const auto large = sim::rcu_error_estimate(100, 25.0, 1.0, 100000, 13);
    const double ratio = small.stderr_est / large.stderr_est;
    CHECK(ratio > 2.2);
    CHECK(ratio < 4.5);
  }
}

TEST_CASE("rcu max rate") {
  const SnrPoint p1(1.0);
  const double na2 = 100.0 * gauss::capacity(p1);

  const BoundResult r = sim::rcu_max_rate(100, 0.5, 1.0, 20000, 0.05, 1);
  CHECK(r.total_nats >= na2);
  CHECK(r.total_nats <= na2 + std::log(100.0));
  CHECK(r.extra("eps_hat") <= 0.5);
  CHECK(r.total_nats == doctest::Approx(r.capacity_term + r.dispersion_term +
                                        r.third_order_term)
                            .epsilon(1e-12));

  SUBCASE("halving the tolerance moves the answer by at most tol") {
    const BoundResult fine = sim::rcu_max_rate(100, 0.5, 1.0, 20000, 0.025, 1);
    CHECK(std::abs(fine.total_nats - r.total_nats) <= 0.05 + 1e-12);
  }

  SUBCASE("unreachable target raises a bracket error") {
    CHECK_THROWS_AS(sim::rcu_max_rate(4, 1e-9, 1.0, 5000, 0.05, 1),
                    sim::BracketError);
  }
}

TEST_CASE("typical set probability") {
  SUBCASE("full support window has zero complement") {
    const auto est =
        sim::typical_set_prob(sim::TypicalSetSpec(100, 1.0, 1e9), 10000, 3);
    CHECK(est.prob_complement == 0.0);
  }

  SUBCASE("matches a raw-vector Monte Carlo oracle") {
    const auto spec = sim::TypicalSetSpec::with_default_delta(100, 1.0);
    const auto est = sim::typical_set_prob(spec, 1000000, 3);

    std::mt19937_64 gen(1357);
    std::normal_distribution<double> normal(0.0, 1.0);
    const std::size_t draws = 400000;
    std::size_t outside = 0;
    const double rnp = std::sqrt(100.0);
    for (std::size_t i = 0; i < draws; ++i) {
      double nsq = 0.0;
      for (int j = 0; j < 100; ++j) {
        const double z = normal(gen) + (j == 0 ? rnp : 0.0);
        nsq += z * z;
      }
      const double val = nsq / 100.0;
      if (val < 2.0 - spec.delta || val > 2.0 + spec.delta) outside++;
    }
    const double phat = static_cast<double>(outside) / draws;
    const double se_mc = std::sqrt(phat * (1.0 - phat) / draws);
    const double se = std::sqrt(se_mc * se_mc + est.stderr_est * est.stderr_est);
    CHECK(std::abs(est.prob_complement - phat) <= 3.0 * se);
  }

  SUBCASE("deterministic across worker counts") {
    const auto spec = sim::TypicalSetSpec::with_default_delta(200, 1.0);
    const auto w1 = sim::typical_set_prob(spec, 50000, 5, 1);
    const auto w4 = sim::typical_set_prob(spec, 50000, 5, 4);
    CHECK(w1.prob_complement == w4.prob_complement);
    CHECK(w1.stderr_est == w4.stderr_est);
  }
}

TEST_CASE("output density ratio bound") {
  const double delta = std::pow(100.0, -1.0 / 3.0);
  const double j33 = sim::output_density_ratio_bound(100, 1.0, delta, 33);
  CHECK(j33 > 0.0);

  SUBCASE("stable under grid refinement") {
    const double j65 = sim::output_density_ratio_bound(100, 1.0, delta, 65);
    CHECK(std::abs(j65 / j33 - 1.0) <= 0.02);
  }

  SUBCASE("ratio at the center norm stays bounded in n") {
    const double r100 = sim::output_density_ratio_bound(100, 1.0, 1e-9, 2);
    const double r1000 = sim::output_density_ratio_bound(1000, 1.0, 1e-9, 2);
    CHECK(std::abs(r1000 / r100 - 1.0) <= 0.10);
  }

  CHECK_THROWS_AS(sim::output_density_ratio_bound(100, 1.0, delta, 1),
                  std::invalid_argument);
}

TEST_CASE("achievable log M") {
  SUBCASE("vacuous below the backoff threshold") {
    CHECK_THROWS_AS(sim::achievable_log_m(100, 0.1, 1.0), VacuousBoundError);
  }

  SUBCASE("breakdown sums exactly and constants are reported") {
    sim::AchievableOptions opt;
    opt.trials = 50000;
    opt.epsilon_backoff = false;
    const BoundResult r = sim::achievable_log_m(100, 0.1, 1.0, opt);
    CHECK(r.total_nats == r.capacity_term + r.dispersion_term +
                              r.third_order_term + r.constant_term);
    CHECK(r.extra("eps_effective") == 0.1);
    CHECK(r.extra("G") == doctest::Approx(shell::metric_tail_g(1.0)));
    CHECK(r.extra("B") > 0.0);
    CHECK(r.extra("J") > 0.0);
  }

  SUBCASE("dispersion term vanishes at eps = 1/2 for huge n") {
    sim::AchievableOptions opt;
    opt.trials = 50000;
    opt.epsilon_backoff = false;
    const BoundResult r = sim::achievable_log_m(400000, 0.5, 1.0, opt);
    CHECK(r.dispersion_term == 0.0);
  }

  SUBCASE("bounded distance from the third-order normal approximation") {
    // With the finite-n backoff the gap drifts toward the Taylor limit
    // -sqrt(V)(B+G)/phi(0) - ln(G J); check boundedness and convergence.
    const SnrPoint p1(1.0);
    const double v = gauss::dispersion(p1);
    const double b_const =
        6.0 * gauss::third_abs_moment(p1) / (v * std::sqrt(v));
    const double g_const = shell::metric_tail_g(1.0);

    double last_gap = 0.0, last_pred = 0.0;
    for (int n : {100000, 400000}) {
      sim::AchievableOptions opt;
      opt.trials = 100000;
      const BoundResult r = sim::achievable_log_m(n, 0.5, 1.0, opt);
      const auto na3 = gauss::normal_approximation(n, 0.5, p1, true);
      last_gap = r.total_nats - na3.total;
      CHECK(std::abs(last_gap) < 60.0);
      last_pred = -std::sqrt(v) * (b_const + g_const) /
                      gauss::std_normal_pdf(0.0) -
                  std::log(g_const * r.extra("J"));
    }
    CHECK(std::abs(last_gap - last_pred) < 1.0);
  }
}

TEST_CASE("codebook files") {
  const auto book = sim::generate_codebook(6, 5, 2.0, 31337);

  SUBCASE("binary round trip is bitwise") {
    const auto path = temp_path("fbawgn_test_book.bin");
    sim::save_codebook_binary(book, path.string());
    const auto loaded = sim::load_codebook(path.string());
    CHECK(loaded.n() == 6);
    CHECK(loaded.m() == 5);
    CHECK(loaded.p() == 2.0);
    CHECK(loaded.seed() == 31337);
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 6; ++j)
        CHECK(loaded.codeword(i)[j] == book.codeword(i)[j]);
    std::filesystem::remove(path);
  }

  SUBCASE("csv round trip is bitwise") {
    const auto path = temp_path("fbawgn_test_book.csv");
    sim::save_codebook_csv(book, path.string());
    const auto loaded = sim::load_codebook(path.string());
    CHECK(loaded.n() == 6);
    CHECK(loaded.m() == 5);
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 6; ++j)
        CHECK(loaded.codeword(i)[j] == book.codeword(i)[j]);
    std::filesystem::remove(path);
  }

  SUBCASE("norm violations are rejected on load") {
    const auto path = temp_path("fbawgn_test_book_bad.csv");
    sim::save_codebook_csv(book, path.string());
    std::ifstream in(path);
    std::string contents((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
    in.close();
    // blank out one coordinate
    const auto pos = contents.rfind('\n', contents.size() - 2);
    const auto comma = contents.find(',', pos);
    contents.replace(pos + 1, comma - pos - 1, "0");
    std::ofstream out(path);
    out << contents;
    out.close();
    CHECK_THROWS_AS(sim::load_codebook(path.string()), std::invalid_argument);
    std::filesystem::remove(path);
  }
}
