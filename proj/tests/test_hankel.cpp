// Copyright (c) the strongmin contributors.
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>
#include <complex>

#include "oracles.hpp"
#include "strongmin/hankel.hpp"
#include "strongmin/rng.hpp"

using namespace strongmin;
using namespace std::complex_literals;

namespace {

CMatrix scalar(Complex v) {
  CMatrix m(1, 1);
  m(0, 0) = v;
  return m;
}

// Unitarity and exact block-diagonality invariants every compression must
// satisfy, regardless of layout or structure.
void check_compression_invariants(const CMatrix& m,
                                  const CompressionResult& c) {
  const Index p = m.rows(), q = m.cols();
  REQUIRE((c.u.adjoint() * c.u - CMatrix::Identity(p, p)).norm() <= 1e-12 * p);
  REQUIRE((c.v.adjoint() * c.v - CMatrix::Identity(q, q)).norm() <= 1e-12 * q);
  REQUIRE(c.off_core_residual <=
          std::max(1e-10, 100.0 * c.threshold) * std::max(1.0, m.norm()));
  REQUIRE((m - c.u_core() * c.core * c.v_core().adjoint()).norm() <=
          std::max(1e-10, 100.0 * c.threshold) * std::max(1.0, m.norm()));
}

}  // namespace

TEST_CASE("build_T for a quadratic is the leading coefficient") {
  Rng rng(11);
  const PolyMatrix p = random_poly(2, 3, 2, rng.next_seed());
  const CMatrix t = build_T(p);
  REQUIRE(t.rows() == 2);
  REQUIRE(t.cols() == 3);
  CHECK((t - p.coeff(2)).norm() == 0.0);
}

TEST_CASE("build_T for a cubic places coefficients up the antidiagonals") {
  Rng rng(12);
  const PolyMatrix p = random_poly(2, 2, 3, rng.next_seed());
  const CMatrix t = build_T(p);
  REQUIRE(t.rows() == 4);
  REQUIRE(t.cols() == 4);
  CHECK(t.block(0, 0, 2, 2).norm() == 0.0);
  CHECK((t.block(0, 2, 2, 2) - p.coeff(3)).norm() == 0.0);
  CHECK((t.block(2, 0, 2, 2) - p.coeff(3)).norm() == 0.0);
  CHECK((t.block(2, 2, 2, 2) - p.coeff(2)).norm() == 0.0);
}

TEST_CASE("build_T rejects degrees below two") {
  CHECK_THROWS_AS(build_T(PolyMatrix::make({scalar(1.0), scalar(1.0)})),
                  DegenerateDegreeError);
}

TEST_CASE("build_H_pair lays out the moments and their shift") {
  const LaurentTail tail = LaurentTail::make(
      {scalar(1.0), scalar(2.0), scalar(3.0), scalar(4.0)});
  const auto [h, hs] = build_H_pair(tail, 2);
  CMatrix want_h(2, 2), want_hs(2, 2);
  want_h << 1.0, 2.0, 2.0, 3.0;
  want_hs << 2.0, 3.0, 3.0, 4.0;
  CHECK((h - want_h).norm() == 0.0);
  CHECK((hs - want_hs).norm() == 0.0);
  CHECK_THROWS_AS(build_H_pair(tail, 3), InputError);
  CHECK_THROWS_AS(build_H_pair(tail, 0), InputError);
}

TEST_CASE("sign scalings carry the expected patterns") {
  CHECK(build_S_poly(2, 2).signs == std::vector<int>{-1});
  CHECK(build_S_poly(3, 1).signs == std::vector<int>{1, -1});
  CHECK(build_S_poly(4, 1).signs == std::vector<int>{-1, 1, -1});
  CHECK(build_S_rat(3, 2).signs == std::vector<int>{-1, 1, -1});
  CHECK(build_S_rat(1, 4).signs == std::vector<int>{-1});

  const ScalingS s = build_S_poly(4, 2);
  const CMatrix sm = s.matrix();
  REQUIRE(s.dim() == 6);
  CHECK((sm * sm - CMatrix::Identity(6, 6)).norm() == 0.0);
  CHECK((sm - sm.adjoint()).norm() == 0.0);

  Rng rng(13);
  const CMatrix m = rng.gaussian_matrix(6, 4);
  CHECK((s.apply_left(m) - sm * m).norm() == 0.0);
  CHECK_THROWS_AS(s.apply_left(CMatrix::Zero(5, 4)), ShapeError);

  const ScalingS id = ScalingS::identity(3);
  CHECK((id.apply_left(CMatrix::Identity(3, 3)) - CMatrix::Identity(3, 3))
            .norm() == 0.0);
}

TEST_CASE("compress_unstructured finds planted ranks in both layouts") {
  Rng rng(14);
  for (int trial = 0; trial < 40; ++trial) {
    const Index p = 2 + static_cast<Index>(rng.next_seed() % 6);
    const Index q = 2 + static_cast<Index>(rng.next_seed() % 6);
    const Index r = static_cast<Index>(rng.next_seed() % (std::min(p, q) + 1));
    CMatrix m = CMatrix::Zero(p, q);
    if (r > 0) m = rng.gaussian_matrix(p, r) * rng.gaussian_matrix(r, q);
    for (Layout layout : {Layout::zeros_first, Layout::core_first}) {
      const CompressionResult c = compress_unstructured(m, layout);
      REQUIRE(c.rank == r);
      check_compression_invariants(m, c);
      // The zero-side columns really annihilate the matrix.
      CHECK((c.u_zeros().adjoint() * m).norm() <= 1e-10 * std::max(1.0, m.norm()));
      CHECK((m * c.v_zeros()).norm() <= 1e-10 * std::max(1.0, m.norm()));
      if (layout == Layout::zeros_first) {
        CHECK(c.u_core_offset() == p - r);
        CHECK(c.v_core_offset() == q - r);
      } else {
        CHECK(c.u_core_offset() == 0);
      }
    }
  }
}

TEST_CASE("compress_unstructured flags borderline rank decisions") {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = 5e-3;
  const CompressionResult near = compress_unstructured(
      m, Layout::zeros_first, RankTolerance::absolute(1e-3));
  CHECK(near.rank == 2);
  CHECK(near.borderline);

  m(1, 1) = 1e-8;
  const CompressionResult clear = compress_unstructured(
      m, Layout::zeros_first, RankTolerance::absolute(1e-3));
  CHECK(clear.rank == 1);
  CHECK(!clear.borderline);
  CHECK(clear.max_zero_value == Catch::Approx(1e-8));
  CHECK(clear.min_core_value == Catch::Approx(1.0));
}

TEST_CASE("compress_structured on a diagonal Hermitian matrix") {
  CMatrix m = CMatrix::Zero(2, 2);
  m(1, 1) = 5.0;
  const CompressionResult c = compress_structured(
      m, StructureTag::hermitian, ScalingS::identity(2), Layout::zeros_first);
  REQUIRE(c.rank == 1);
  REQUIRE(c.core.rows() == 1);
  CHECK(std::abs(c.core(0, 0) - Complex(5.0, 0.0)) < 1e-12);
  CHECK(!c.rep_scaled_by_i);
  check_compression_invariants(m, c);
}

TEST_CASE("compress_structured reproduces the worked quadratic example") {
  // P(z) = z^2 diag(1, 0) - diag(0, 1) is para-Hermitian; T = diag(1, 0) and
  // the degree-2 scaling is -I, so the Hermitian representative is -T.
  CMatrix p0 = CMatrix::Zero(2, 2);
  p0(1, 1) = -1.0;
  CMatrix p2 = CMatrix::Zero(2, 2);
  p2(0, 0) = 1.0;
  const PolyMatrix pw =
      PolyMatrix::make({p0, CMatrix::Zero(2, 2), p2});
  REQUIRE(check_structure_poly(pw, StructureTag::para_hermitian).ok);

  const CMatrix t = build_T(pw);
  const ScalingS s = build_S_poly(2, 2);
  const CompressionResult c = compress_structured(
      t, StructureTag::para_hermitian, s, Layout::zeros_first);
  REQUIRE(c.rank == 1);
  CHECK(!c.rep_scaled_by_i);
  CMatrix want_v(2, 2);
  want_v << 0.0, 1.0, 1.0, 0.0;
  CHECK((c.v - want_v).norm() < 1e-12);
  CHECK((c.u + want_v).norm() < 1e-12);
  CHECK(std::abs(c.core(0, 0) - Complex(-1.0, 0.0)) < 1e-12);
  check_compression_invariants(t, c);
}

TEST_CASE("compress_structured preserves U = S V and the core symmetry") {
  struct Case {
    StructureTag tag;
    bool expect_rotated;  // representative needed the factor i
    int core_sign;        // core^* = sign * core
  };
  const Case cases[] = {
      {StructureTag::para_hermitian, false, 1},
      {StructureTag::para_skew_hermitian, true, -1},
  };
  for (const Case& cs : cases) {
    for (Index d : {Index{2}, Index{3}, Index{4}}) {
      const PolyMatrix p = random_structured_poly(3, d, cs.tag, 1000 + d, 2);
      const CMatrix t = build_T(p);
      const ScalingS s = build_S_poly(d, 3);
      for (Layout layout : {Layout::zeros_first, Layout::core_first}) {
        const CompressionResult c =
            compress_structured(t, cs.tag, s, layout, {});
        INFO(to_string(cs.tag) << " d=" << d);
        check_compression_invariants(t, c);
        CHECK((c.u - s.apply_left(c.v)).norm() <= 1e-12 * c.u.norm());
        CHECK(c.rep_scaled_by_i == cs.expect_rotated);
        const double sym =
            (c.core.adjoint() - static_cast<double>(cs.core_sign) * c.core)
                .norm();
        CHECK(sym <= 1e-10 * std::max(1.0, c.core.norm()));
        if (d == 2) CHECK(c.rank == 2);  // T is the planted-rank coefficient
        // Structured and unstructured ranks agree.
        CHECK(c.rank == compress_unstructured(t, layout).rank);
      }
    }
  }
}

TEST_CASE("compress_structured on moment Hankels of structured tails") {
  struct Case {
    StructureTag tag;
    bool use_scaling;
    int core_sign;
  };
  const Case cases[] = {
      {StructureTag::hermitian, false, 1},
      {StructureTag::skew_hermitian, false, -1},
      {StructureTag::para_hermitian, true, -1},
      {StructureTag::para_skew_hermitian, true, 1},
  };
  for (const Case& cs : cases) {
    const LaurentTail tail = random_structured_tail(2, 6, cs.tag, 21);
    const Index k = 3;
    const auto [h, hs] = build_H_pair(tail, k);
    const ScalingS s =
        cs.use_scaling ? build_S_rat(k, 2) : ScalingS::identity(k * 2);
    const CompressionResult c =
        compress_structured(h, cs.tag, s, Layout::core_first);
    INFO(to_string(cs.tag));
    check_compression_invariants(h, c);
    const double sym =
        (c.core.adjoint() - static_cast<double>(cs.core_sign) * c.core).norm();
    CHECK(sym <= 1e-10 * std::max(1.0, c.core.norm()));
  }
}

TEST_CASE("compress_structured rejects inputs without the symmetry") {
  Rng rng(22);
  const CMatrix m = rng.gaussian_matrix(4, 4);
  CHECK_THROWS_AS(compress_structured(m, StructureTag::hermitian,
                                      ScalingS::identity(4),
                                      Layout::zeros_first),
                  StructureError);
  CHECK_THROWS_AS(compress_structured(m, StructureTag::none,
                                      ScalingS::identity(4),
                                      Layout::zeros_first),
                  InputError);
  CHECK_THROWS_AS(compress_structured(rng.gaussian_matrix(3, 4),
                                      StructureTag::hermitian,
                                      ScalingS::identity(3),
                                      Layout::zeros_first),
                  ShapeError);
}

TEST_CASE("choose_k tracks the Hankel rank plateau") {
  // Three states: the moment ranks step 2, 3, 3, 3, 3, so every k from 3 on
  // ties its predecessor and the latest tie wins.
  const StateSpaceTriple ss3 = oracles::random_minimal_state_space(3, 2, 2, 31);
  const LaurentTail t3 = laurent_from_state_space(ss3, 10);
  const ChooseK c3 = choose_k(t3);
  CHECK(c3.ranks == std::vector<Index>{0, 2, 3, 3, 3, 3});
  CHECK(c3.k_used == 5);
  CHECK(c3.stabilized);
  CHECK(c3.rank_at_k == 3);

  // Eight states with only four moments per side: the rank never repeats, so
  // the cap is used and the selection is reported as unstabilized.
  const StateSpaceTriple ss8 = oracles::random_minimal_state_space(8, 2, 2, 32);
  const LaurentTail t8 = laurent_from_state_space(ss8, 8);
  const ChooseK c8 = choose_k(t8);
  CHECK(c8.ranks == std::vector<Index>{0, 2, 4, 6, 8});
  CHECK(c8.k_used == 4);
  CHECK(!c8.stabilized);

  // The zero tail stabilizes immediately at rank zero.
  const LaurentTail zt = LaurentTail::make(
      {CMatrix::Zero(2, 2), CMatrix::Zero(2, 2), CMatrix::Zero(2, 2),
       CMatrix::Zero(2, 2)});
  const ChooseK cz = choose_k(zt);
  CHECK(cz.k_used == 2);
  CHECK(cz.stabilized);
  CHECK(cz.rank_at_k == 0);
}
