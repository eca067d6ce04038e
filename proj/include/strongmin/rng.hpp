// Copyright (c) the strongmin contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef STRONGMIN_RNG_HPP
#define STRONGMIN_RNG_HPP

#include <cstdint>
#include <random>

#include "strongmin/numkernel.hpp"

namespace strongmin {

// Seeded source of complex Gaussian draws.  Every randomized routine in the
// library takes an explicit seed and builds one of these, so repeated runs
// with the same seed reproduce bit-identical results.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double gaussian_real() { return normal_(engine_); }

  // Standard complex Gaussian, E|z|^2 = 1.
  Complex gaussian() {
    const double re = normal_(engine_);
    const double im = normal_(engine_);
    return Complex(re * kInvSqrt2, im * kInvSqrt2);
  }

  CMatrix gaussian_matrix(Index rows, Index cols) {
    CMatrix out(rows, cols);
    for (Index j = 0; j < cols; ++j) {
      for (Index i = 0; i < rows; ++i) out(i, j) = gaussian();
    }
    return out;
  }

  // Uniformly random point on the circle of the given radius.
  Complex circle_point(double radius) {
    const double angle = uniform_(engine_) * 2.0 * kPi;
    return Complex(radius * std::cos(angle), radius * std::sin(angle));
  }

  std::uint64_t next_seed() { return engine_(); }

 private:
  static constexpr double kInvSqrt2 = 0.70710678118654752440;
  static constexpr double kPi = 3.14159265358979323846;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace strongmin

#endif  // STRONGMIN_RNG_HPP
