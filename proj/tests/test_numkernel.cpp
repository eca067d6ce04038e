// Copyright (c) the strongmin contributors.
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>
#include <complex>
#include <vector>

#include "oracles.hpp"
#include "strongmin/numkernel.hpp"
#include "strongmin/rng.hpp"

using namespace strongmin;
using namespace std::complex_literals;

namespace {

CMatrix m22(Complex a, Complex b, Complex c, Complex d) {
  CMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

// Expands prod (z - r_i) by convolution; the oracle for the root finder.
std::vector<Complex> poly_from_roots(const std::vector<Complex>& roots) {
  std::vector<Complex> c{Complex(1.0, 0.0)};
  for (const Complex& r : roots) {
    std::vector<Complex> next(c.size() + 1, Complex(0.0, 0.0));
    for (size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] -= r * c[i];
    }
    c = std::move(next);
  }
  return c;
}

}  // namespace

TEST_CASE("svd reconstructs and is unitary on random matrices") {
  Rng rng(101);
  for (int trial = 0; trial < 1000; ++trial) {
    const Index rows = 1 + static_cast<Index>(rng.next_seed() % 12);
    const Index cols = 1 + static_cast<Index>(rng.next_seed() % 12);
    const CMatrix a = rng.gaussian_matrix(rows, cols);
    const SvdResult dec = svd(a);
    CMatrix sigma = CMatrix::Zero(rows, cols);
    for (size_t i = 0; i < dec.singular_values.size(); ++i) {
      sigma(static_cast<Index>(i), static_cast<Index>(i)) =
          dec.singular_values[i];
    }
    REQUIRE((a - dec.u * sigma * dec.v.adjoint()).norm() <=
            1e-13 * std::max(1.0, a.norm()));
    REQUIRE((dec.u.adjoint() * dec.u - CMatrix::Identity(rows, rows)).norm() <=
            1e-13 * rows);
    REQUIRE((dec.v.adjoint() * dec.v - CMatrix::Identity(cols, cols)).norm() <=
            1e-13 * cols);
    for (size_t i = 1; i < dec.singular_values.size(); ++i) {
      REQUIRE(dec.singular_values[i - 1] >= dec.singular_values[i]);
    }
  }
}

TEST_CASE("svd of diag(0,1) sorts singular values") {
  const SvdResult dec = svd(m22(0, 0, 0, 1));
  REQUIRE(dec.singular_values.size() == 2);
  CHECK(dec.singular_values[0] == Catch::Approx(1.0));
  CHECK(dec.singular_values[1] == Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("svd rejects non-finite input") {
  CMatrix bad = m22(1, 0, 0, std::numeric_limits<double>::quiet_NaN());
  REQUIRE_THROWS_AS(svd(bad), InputError);
}

TEST_CASE("rank_of on fixed matrices") {
  CHECK(rank_of(m22(0, 0, 0, 1)) == 1);
  CHECK(rank_of(CMatrix::Zero(3, 3)) == 0);
  CHECK(rank_of(CMatrix::Identity(4, 4)) == 4);
  // Absolute threshold overrides the spectral scale.
  CHECK(rank_of(m22(1e-6, 0, 0, 1), RankTolerance::absolute(1e-3)) == 1);
  CHECK(rank_of(m22(1e-6, 0, 0, 1), RankTolerance::absolute(1e-9)) == 2);
}

TEST_CASE("rank_of is scale invariant in relative mode") {
  Rng rng(202);
  for (int trial = 0; trial < 50; ++trial) {
    const CMatrix g1 = rng.gaussian_matrix(5, 2);
    const CMatrix g2 = rng.gaussian_matrix(2, 6);
    const CMatrix a = g1 * g2;  // rank 2 by construction
    REQUIRE(rank_of(a) == 2);
    REQUIRE(rank_of(CMatrix(1e150 * a)) == 2);
    REQUIRE(rank_of(CMatrix(1e-150 * a)) == 2);
  }
}

TEST_CASE("hermitian_eigendecomp on the exchange matrix") {
  const HermitianEig dec = hermitian_eigendecomp(m22(0, 1, 1, 0));
  REQUIRE(dec.lambdas.size() == 2);
  CHECK(dec.lambdas[0] == Catch::Approx(-1.0));
  CHECK(dec.lambdas[1] == Catch::Approx(1.0));
}

TEST_CASE("hermitian_eigendecomp reconstructs random Hermitian matrices") {
  Rng rng(303);
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = 1 + static_cast<Index>(rng.next_seed() % 10);
    const CMatrix g = rng.gaussian_matrix(n, n);
    const CMatrix a = 0.5 * (g + g.adjoint());
    const HermitianEig dec = hermitian_eigendecomp(a);
    CMatrix lam = CMatrix::Zero(n, n);
    for (Index i = 0; i < n; ++i) lam(i, i) = dec.lambdas[static_cast<size_t>(i)];
    REQUIRE((a - dec.q * lam * dec.q.adjoint()).norm() <=
            1e-12 * std::max(1.0, a.norm()));
    for (size_t i = 1; i < dec.lambdas.size(); ++i) {
      REQUIRE(dec.lambdas[i - 1] <= dec.lambdas[i]);
    }
  }
}

TEST_CASE("hermitian_eigendecomp rejects non-Hermitian input") {
  REQUIRE_THROWS_AS(hermitian_eigendecomp(m22(0, 1, 0, 0)), StructureError);
  try {
    hermitian_eigendecomp(m22(0, 1, 0, 0));
  } catch (const StructureError& e) {
    CHECK(e.defect > 0.5);
  }
}

TEST_CASE("lin_solve residual on random systems") {
  Rng rng(404);
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = 1 + static_cast<Index>(rng.next_seed() % 10);
    const CMatrix a = rng.gaussian_matrix(n, n) +
                      2.0 * CMatrix::Identity(n, n);
    const CMatrix b = rng.gaussian_matrix(n, 3);
    const CMatrix x = lin_solve(a, b);
    REQUIRE((a * x - b).norm() <= 1e-10 * std::max(1.0, b.norm()));
  }
}

TEST_CASE("lin_solve reports the smallest singular value when singular") {
  CMatrix a = m22(1, 2, 2, 4);  // exactly rank 1
  try {
    lin_solve(a, CMatrix::Identity(2, 2));
    FAIL("expected SingularityError");
  } catch (const SingularityError& e) {
    CHECK(e.smallest_singular_value <= 1e-12);
  }
}

TEST_CASE("poly_roots on fixed polynomials") {
  // z^2 + 1
  const auto r1 = poly_roots({1.0 + 0.0i, 0.0 + 0.0i, 1.0 + 0.0i});
  CHECK(oracles::multiset_match_distance(r1, {1.0i, -1.0i}) < 1e-10);

  // (z + 1)(z^2 + z + 1): roots -1 and the primitive cube roots of unity.
  const auto r2 = poly_roots({1.0 + 0.0i, 2.0 + 0.0i, 2.0 + 0.0i, 1.0 + 0.0i});
  const double s3 = std::sqrt(3.0) / 2.0;
  CHECK(oracles::multiset_match_distance(
            r2, {-1.0 + 0.0i, Complex(-0.5, s3), Complex(-0.5, -s3)}) < 1e-8);

  // Constant after trimming a tiny leading coefficient: no roots.
  CHECK(poly_roots({2.0 + 0.0i, 1e-15 + 0.0i}).empty());

  REQUIRE_THROWS_AS(poly_roots({0.0 + 0.0i, 0.0 + 0.0i}),
                    DegenerateInputError);
  REQUIRE_THROWS_AS(poly_roots(std::vector<Complex>{}), DegenerateInputError);
}

TEST_CASE("poly_roots inverts expansion from separated roots") {
  Rng rng(505);
  for (int trial = 0; trial < 100; ++trial) {
    const int deg = 1 + static_cast<int>(rng.next_seed() % 10);
    std::vector<Complex> roots;
    int guard = 0;
    while (static_cast<int>(roots.size()) < deg && guard++ < 10000) {
      const Complex cand = 2.0 * rng.gaussian();
      bool ok = true;
      for (const Complex& r : roots) {
        if (std::abs(r - cand) < 0.1) ok = false;
      }
      if (ok) roots.push_back(cand);
    }
    REQUIRE(static_cast<int>(roots.size()) == deg);
    const auto coeffs = poly_from_roots(roots);
    const auto got = poly_roots(coeffs);
    REQUIRE(oracles::multiset_match_distance(got, roots) < 1e-6);
    // Residual at each computed root, relative to the coefficient scale.
    double cmax = 0.0;
    for (const Complex& c : coeffs) cmax = std::max(cmax, std::abs(c));
    for (const Complex& z : got) {
      const double scale =
          cmax * std::pow(std::max(1.0, std::abs(z)), deg);
      REQUIRE(std::abs(poly_eval(coeffs, z)) <= 1e-8 * scale);
    }
  }
}
