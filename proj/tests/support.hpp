#pragma once

// Shared test helpers: seeded generators and a reference 2x2 matrix exponential.

#include <cmath>
#include <random>

#include "josephson/spin_algebra.hpp"

namespace testing {

using josephson::cplx;
using josephson::Op2;
using josephson::Vec3;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  cplx complex(double scale) { return {uniform(-scale, scale), uniform(-scale, scale)}; }

  Op2 hermitian(double scale) {
    const double a = uniform(-scale, scale);
    const double d = uniform(-scale, scale);
    const cplx b = complex(scale);
    return {a, b, std::conj(b), d};
  }

  Op2 matrix(double scale) { return {complex(scale), complex(scale), complex(scale), complex(scale)}; }

  // Bloch vector with length at most r_max.
  Vec3 bloch(double r_max) {
    const double z = uniform(-1.0, 1.0);
    const double t = uniform(0.0, 2.0 * M_PI);
    const double s = std::sqrt(1.0 - z * z);
    const double r = r_max * std::cbrt(uniform(0.0, 1.0));
    return {r * s * std::cos(t), r * s * std::sin(t), r * z};
  }

 private:
  std::mt19937_64 rng_;
};

// exp(a) by scaling and squaring of a Taylor series.
inline Op2 expm(const Op2& a) {
  int squarings = 0;
  double n = a.max_norm();
  while (n > 0.25) {
    n *= 0.5;
    ++squarings;
  }
  const Op2 x = std::ldexp(1.0, -squarings) * a;
  Op2 term = Op2::identity();
  Op2 sum = Op2::identity();
  for (int k = 1; k <= 24; ++k) {
    term = (1.0 / k) * (term * x);
    sum += term;
  }
  for (int k = 0; k < squarings; ++k) sum = sum * sum;
  return sum;
}

}  // namespace testing
