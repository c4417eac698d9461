#pragma once

#include <cstdint>
#include <vector>

#include "fbawgn/types.hpp"

namespace fbawgn::wf {

struct PowerAllocation {
  std::vector<double> noise;   // N_j > 0
  double total_power = 0.0;    // P
  double nu = 0.0;             // water level
  std::vector<double> powers;  // P_j = max(0, nu - N_j)
  std::vector<int> active_set; // indices with P_j > 0
};

// Exact water-filling over k parallel channels: the level is solved from the
// sorted piecewise-linear total-power equation, no iterative tolerance.
PowerAllocation waterfill(const std::vector<double>& noise,
                          double total_power);

// min over active channels of 2 L(P_l, s_l) mu / sqrt(n P_l s_l), clamped to
// [0,1]. s has one entry per channel, aligned with alloc.noise.
double parallel_slice_bound(const PowerAllocation& alloc,
                            const std::vector<double>& s, int n, double mu);

// n sum_j C(P_j/N_j) + sqrt(n sum_j V(P_j/N_j)) Phi^{-1}(eps) + (1/2) ln n.
// The dispersion-sum form is a convention, recorded in the result.
BoundResult parallel_normal_approximation(std::int64_t n, double eps,
                                          const std::vector<double>& noise,
                                          double total_power);

}  // namespace fbawgn::wf
