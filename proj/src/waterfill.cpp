#include "fbawgn/waterfill.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "fbawgn/gauss.hpp"
#include "fbawgn/shell.hpp"

namespace fbawgn::wf {

PowerAllocation waterfill(const std::vector<double>& noise,
                          double total_power) {
  if (noise.empty()) throw std::invalid_argument("waterfill: k >= 1");
  for (double nj : noise)
    if (!(nj > 0.0) || !std::isfinite(nj))
      throw std::invalid_argument("waterfill: noise levels must be finite, > 0");
  if (!(total_power > 0.0) || !std::isfinite(total_power))
    throw std::invalid_argument("waterfill: total power must be finite, > 0");

  const std::size_t k = noise.size();
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return noise[a] < noise[b]; });

  // With the j quietest channels active, nu = (P + sum N)/j; the correct j is
  // the largest one whose level still covers the next-quietest channel.
  long double prefix = 0.0L;
  long double nu = 0.0L;
  std::size_t active = 0;
  for (std::size_t j = 0; j < k; ++j) {
    prefix += noise[order[j]];
    const long double level =
        (static_cast<long double>(total_power) + prefix) /
        static_cast<long double>(j + 1);
    if (j + 1 < k && level > noise[order[j + 1]]) continue;
    nu = level;
    active = j + 1;
    break;
  }

  (void)active;
  PowerAllocation alloc;
  alloc.noise = noise;
  alloc.total_power = total_power;
  alloc.nu = static_cast<double>(nu);
  alloc.powers.assign(k, 0.0);
  // Powers are derived from the rounded level so that the double-arithmetic
  // identity P_j = max(0, nu - N_j) holds exactly for callers.
  for (std::size_t j = 0; j < k; ++j)
    alloc.powers[j] = std::max(0.0, alloc.nu - noise[j]);
  for (std::size_t j = 0; j < k; ++j)
    if (alloc.powers[j] > 0.0) alloc.active_set.push_back(static_cast<int>(j));
  return alloc;
}

double parallel_slice_bound(const PowerAllocation& alloc,
                            const std::vector<double>& s, int n, double mu) {
  if (alloc.active_set.empty())
    throw std::invalid_argument("parallel_slice_bound: empty active set");
  if (s.size() != alloc.noise.size())
    throw std::invalid_argument("parallel_slice_bound: s size mismatch");
  if (n < 3) throw std::invalid_argument("parallel_slice_bound: n >= 3");
  if (!(mu > 0.0)) throw std::invalid_argument("parallel_slice_bound: mu > 0");

  double best = std::numeric_limits<double>::infinity();
  for (int l : alloc.active_set) {
    const double pl = alloc.powers[l];
    const double sl = s[l];
    if (!(sl > 0.0))
      throw std::invalid_argument(
          "parallel_slice_bound: s must be > 0 on the active set");
    const double val = 2.0 * shell::laplace_sup_bound(pl, sl).l_bound() * mu /
                       std::sqrt(static_cast<double>(n) * pl * sl);
    best = std::min(best, val);
  }
  return std::clamp(best, 0.0, 1.0);
}

BoundResult parallel_normal_approximation(std::int64_t n, double eps,
                                          const std::vector<double>& noise,
                                          double total_power) {
  if (n < 1)
    throw std::invalid_argument("parallel_normal_approximation: n >= 1");
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument(
        "parallel_normal_approximation: eps must be in (0,1)");
  const PowerAllocation alloc = waterfill(noise, total_power);

  double cap_sum = 0.0, disp_sum = 0.0;
  for (std::size_t j = 0; j < noise.size(); ++j) {
    if (alloc.powers[j] <= 0.0) continue;  // inactive channels contribute 0
    const SnrPoint snr(alloc.powers[j] / noise[j]);
    cap_sum += gauss::capacity(snr);
    disp_sum += gauss::dispersion(snr);
  }

  BoundResult out;
  out.capacity_term = static_cast<double>(n) * cap_sum;
  out.dispersion_term = std::sqrt(static_cast<double>(n) * disp_sum) *
                        gauss::std_normal_cdf_inv(eps);
  out.third_order_term = 0.5 * std::log(static_cast<double>(n));
  out.total_nats =
      out.capacity_term + out.dispersion_term + out.third_order_term;
  out.extras = {{"nu", alloc.nu},
                {"k", static_cast<double>(noise.size())},
                {"k_active", static_cast<double>(alloc.active_set.size())}};
  out.convention =
      "dispersion term uses the per-channel sum sum_j V(P_j/N_j)";
  return out;
}

}  // namespace fbawgn::wf
