#pragma once

#include <cmath>
#include <cstdint>

namespace sightline {

/// Binomial Monte Carlo estimate of a probability.
struct ProbEstimate {
  double p_hat = 0;
  double se = 0;
  std::int64_t n = 0;
  std::int64_t hits = 0;

  static ProbEstimate from_counts(std::int64_t hits, std::int64_t n) {
    ProbEstimate e;
    e.n = n;
    e.hits = hits;
    e.p_hat = n > 0 ? double(hits) / double(n) : 0.0;
    e.se = n > 0 ? std::sqrt(e.p_hat * (1.0 - e.p_hat) / double(n)) : 0.0;
    return e;
  }
};

/// Monte Carlo estimate of a nonnegative quantity obtained by scaling a hit
/// fraction (rejection-sampled volumes, capacities, ...).
struct ValueEstimate {
  double value = 0;
  double se = 0;
  std::int64_t n = 0;
  std::int64_t hits = 0;

  static ValueEstimate from_counts(double scale, std::int64_t hits, std::int64_t n) {
    ValueEstimate e;
    e.n = n;
    e.hits = hits;
    if (n > 0) {
      double p = double(hits) / double(n);
      e.value = scale * p;
      e.se = scale * std::sqrt(p * (1.0 - p) / double(n));
    }
    return e;
  }
};

}  // namespace sightline
