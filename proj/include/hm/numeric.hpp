#pragma once

#include <cmath>
#include <cstdint>

namespace helmholtz {

// Numerically stable logistic sigmoid; strictly inside (0,1) for finite a.
inline double sigmoid(double a) {
  if (a >= 0.0) {
    return 1.0 / (1.0 + std::exp(-a));
  }
  const double e = std::exp(a);
  return e / (1.0 + e);
}

// softplus(x) = log(1 + e^x), overflow-free for large |x|.
inline double softplus(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

// log probability of observing sign s ∈ {−1,+1} for a unit with activation a:
//   P(+1) = σ(a), P(−1) = 1 − σ(a) = σ(−a), so log P(s) = log σ(s·a) = −softplus(−s·a).
// Always finite, unlike log(sigmoid(a)) which underflows past a ≈ −745.
inline double log_prob_of_sign(double s, double a) { return -softplus(-s * a); }

// Online mean / standard error (Welford). Identical inputs keep m2 at exactly 0,
// so a constant sample stream reports std_error exactly 0.0.
struct Welford {
  std::int64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double d1 = x - mean;
    mean += d1 / static_cast<double>(n);
    const double d2 = x - mean;
    m2 += d1 * d2;
  }
  // Standard error of the mean; 0 by convention for n < 2.
  double std_error() const {
    if (n < 2) return 0.0;
    const double nn = static_cast<double>(n);
    return std::sqrt(m2 / (nn * (nn - 1.0)));
  }
};

}  // namespace helmholtz
