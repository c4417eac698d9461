#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fbawgn {

// Channel parameter: linear SNR with unit noise variance.
struct SnrPoint {
  double p;

  explicit SnrPoint(double snr) : p(snr) {
    if (!(snr > 0.0) || !std::isfinite(snr))
      throw std::invalid_argument("SnrPoint: snr must be finite and > 0");
  }
};

struct McProvenance {
  std::uint64_t seed = 0;
  std::uint64_t trials = 0;
};

// A log-cardinality bound in nats, with the per-term breakdown and, for
// Monte Carlo backed quantities, the standard error of the estimate.
struct BoundResult {
  double total_nats = 0.0;
  double capacity_term = 0.0;
  double dispersion_term = 0.0;
  double third_order_term = 0.0;
  double constant_term = 0.0;
  std::vector<std::pair<std::string, double>> extras;
  std::optional<double> mc_stderr;
  std::optional<McProvenance> provenance;
  std::string convention;  // nonempty when a term is a convention, not a derived fact

  double extra(const std::string& key) const {
    for (const auto& [k, v] : extras)
      if (k == key) return v;
    throw std::out_of_range("BoundResult: no extra named " + key);
  }
};

class VacuousBoundError : public std::runtime_error {
 public:
  VacuousBoundError(const std::string& msg, double eps_effective)
      : std::runtime_error(msg), eps_effective(eps_effective) {}
  double eps_effective;
};

}  // namespace fbawgn
