#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "fbawgn/gauss.hpp"
#include "fbawgn/rng.hpp"
#include "fbawgn/shell.hpp"
#include "fbawgn/waterfill.hpp"

using namespace fbawgn;

TEST_CASE("waterfill reference cases") {
  SUBCASE("single channel") {
    for (double sigma2 : {0.3, 1.0, 4.0})
      for (double power : {0.1, 2.0}) {
        const auto a = wf::waterfill({sigma2}, power);
        CHECK(a.nu == doctest::Approx(sigma2 + power).epsilon(1e-15));
        CHECK(a.powers[0] == doctest::Approx(power).epsilon(1e-15));
        CHECK(a.active_set == std::vector<int>{0});
      }
  }

  SUBCASE("both channels above water") {
    const auto a = wf::waterfill({1.0, 2.0}, 3.0);
    CHECK(a.nu == 3.0);
    CHECK(a.powers[0] == 2.0);
    CHECK(a.powers[1] == 1.0);
    CHECK(a.active_set == std::vector<int>{0, 1});
  }

  SUBCASE("noisy channel shut off") {
    const auto a = wf::waterfill({1.0, 10.0}, 0.5);
    CHECK(a.nu == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(a.powers[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(a.powers[1] == 0.0);
    CHECK(a.active_set == std::vector<int>{0});
  }

  CHECK_THROWS_AS(wf::waterfill({}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(wf::waterfill({1.0, -2.0}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(wf::waterfill({1.0}, 0.0), std::invalid_argument);
}

TEST_CASE("waterfill KKT invariants on random instances") {
  CounterRng rng(20240719, 0);
  for (int trial = 0; trial < 1000; ++trial) {
    const int k = 1 + static_cast<int>(rng.uniform() * 16);
    std::vector<double> noise(k);
    for (double& nj : noise) nj = 0.1 + 4.9 * rng.uniform();
    const double power = 0.1 + 9.9 * rng.uniform();

    const auto a = wf::waterfill(noise, power);
    const double sum = std::accumulate(a.powers.begin(), a.powers.end(), 0.0);
    CHECK(std::abs(sum - power) <= 1e-12 * power);
    CHECK(!a.active_set.empty());
    for (int j = 0; j < k; ++j) {
      CHECK(a.powers[j] >= 0.0);
      CHECK(a.powers[j] == std::max(0.0, a.nu - noise[j]));
      if (a.powers[j] > 0.0)
        CHECK(std::abs(a.nu - noise[j] - a.powers[j]) <= 1e-12);
    }
  }
}

TEST_CASE("waterfill monotone in the power budget") {
  CounterRng rng(31, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 2 + static_cast<int>(rng.uniform() * 8);
    std::vector<double> noise(k);
    for (double& nj : noise) nj = 0.2 + 3.0 * rng.uniform();
    const double p_small = 0.2 + 3.0 * rng.uniform();
    const double p_large = p_small + 0.5 + 3.0 * rng.uniform();

    const auto a = wf::waterfill(noise, p_small);
    const auto b = wf::waterfill(noise, p_large);
    for (int j = 0; j < k; ++j) {
      CHECK(b.powers[j] >= a.powers[j]);
      if (a.powers[j] > 0.0) CHECK(b.powers[j] > 0.0);
    }
    CHECK(b.active_set.size() >= a.active_set.size());
  }
}

TEST_CASE("parallel slice bound") {
  SUBCASE("single channel reduces to the scalar bound") {
    const auto a = wf::waterfill({1.0}, 1.0);
    const double parallel = wf::parallel_slice_bound(a, {2.0}, 400, 0.7);
    const double scalar = shell::slice_prob_bound(400, 1.0, 2.0, 0.7);
    CHECK(parallel == scalar);
  }

  SUBCASE("two-channel arithmetic composition") {
    const auto a = wf::waterfill({1.0, 2.0}, 3.0);
    const std::vector<double> s{a.powers[0] + 1.0, a.powers[1] + 1.0};
    const double expect = std::min(
        2.0 * shell::laplace_sup_bound(a.powers[0], s[0]).l_bound() *
            std::log(2.0) / std::sqrt(400.0 * a.powers[0] * s[0]),
        2.0 * shell::laplace_sup_bound(a.powers[1], s[1]).l_bound() *
            std::log(2.0) / std::sqrt(400.0 * a.powers[1] * s[1]));
    CHECK(wf::parallel_slice_bound(a, s, 400, std::log(2.0)) ==
          doctest::Approx(expect).epsilon(1e-15));
  }

  SUBCASE("invariant under channel permutation") {
    const std::vector<double> noise{0.5, 1.3, 2.2};
    const std::vector<double> s{2.0, 1.7, 2.4};
    const auto a = wf::waterfill(noise, 4.0);
    const double base = wf::parallel_slice_bound(a, s, 300, 0.9);

    const std::vector<double> noise_p{2.2, 0.5, 1.3};
    const std::vector<double> s_p{2.4, 2.0, 1.7};
    const auto b = wf::waterfill(noise_p, 4.0);
    CHECK(wf::parallel_slice_bound(b, s_p, 300, 0.9) == base);
  }

  SUBCASE("dominates a sampled window probability") {
    // Two active channels; sample each conditional coordinate by rejection,
    // then measure how much mass a metric window of width mu/n captures.
    const auto alloc = wf::waterfill({1.0, 2.0}, 3.0);
    const int n = 200;
    const double mu = 1.0;
    // Shell parameters at the typical per-channel output norms.
    const std::vector<double> s{alloc.powers[0] + 1.0, alloc.powers[1] + 1.0};
    const double bound = wf::parallel_slice_bound(alloc, s, n, mu);

    std::vector<std::vector<double>> us(2);
    for (int l = 0; l < 2; ++l) {
      const double rnp = std::sqrt(n * alloc.powers[l]);
      for (std::uint64_t stream = 0;
           us[l].size() < 100000 && stream < 50000000; ++stream) {
        CounterRng trial_rng(808 + l, stream);
        const double z1 = trial_rng.normal();
        const double rest = trial_rng.chi_square(n - 1);
        const double axis = rnp + z1;
        const double nsq = axis * axis + rest;
        if (std::abs(nsq / n - s[l]) <= 5e-3)
          us[l].push_back(axis / std::sqrt(nsq));
      }
      REQUIRE(us[l].size() == 100000);
    }

    const double scale0 = std::sqrt(alloc.powers[0] * s[0]);
    const double scale1 = std::sqrt(alloc.powers[1] * s[1]);
    const double center = scale0 * shell::shell_mode(alloc.powers[0] * s[0]) +
                          scale1 * shell::shell_mode(alloc.powers[1] * s[1]);
    for (double shift : {-2.0 / n, 0.0, 2.0 / n}) {
      const double lo = center + shift, hi = lo + mu / n;
      std::size_t inside = 0;
      for (std::size_t i = 0; i < us[0].size(); ++i) {
        const double sum = scale0 * us[0][i] + scale1 * us[1][i];
        if (sum >= lo && sum < hi) inside++;
      }
      const double phat = static_cast<double>(inside) / us[0].size();
      const double se =
          std::sqrt(phat * (1.0 - phat) / us[0].size());
      CHECK(phat <= bound + 3.0 * se);
    }
  }

  SUBCASE("argument checks") {
    const auto a = wf::waterfill({1.0, 2.0}, 3.0);
    CHECK_THROWS_AS(wf::parallel_slice_bound(a, {1.0}, 300, 0.5),
                    std::invalid_argument);
    CHECK_THROWS_AS(wf::parallel_slice_bound(a, {1.0, -1.0}, 300, 0.5),
                    std::invalid_argument);
  }
}

TEST_CASE("parallel normal approximation") {
  SUBCASE("single channel matches the scalar path bit for bit") {
    for (double eps : {0.1, 0.5, 0.9}) {
      const auto parallel =
          wf::parallel_normal_approximation(1000, eps, {1.0}, 2.0);
      const auto scalar =
          gauss::normal_approximation(1000, eps, SnrPoint(2.0), true);
      CHECK(parallel.total_nats == scalar.total);
      CHECK(parallel.capacity_term == scalar.capacity_term);
      CHECK(parallel.dispersion_term == scalar.dispersion_term);
    }
  }

  SUBCASE("reference two-channel case at eps = 1/2") {
    const auto r = wf::parallel_normal_approximation(1000, 0.5, {1.0, 2.0}, 3.0);
    const double expect =
        1000.0 * (gauss::capacity(SnrPoint(2.0)) + gauss::capacity(SnrPoint(0.5))) +
        0.5 * std::log(1000.0);
    CHECK(r.total_nats == doctest::Approx(expect).epsilon(1e-15));
    CHECK(!r.convention.empty());
  }

  SUBCASE("inactive channels contribute nothing") {
    const auto with_dead =
        wf::parallel_normal_approximation(500, 0.3, {1.0, 50.0}, 0.5);
    const auto alone = wf::parallel_normal_approximation(500, 0.3, {1.0}, 0.5);
    CHECK(with_dead.total_nats == alone.total_nats);
  }
}
