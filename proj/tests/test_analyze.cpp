// Copyright (c) the strongmin contributors.
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>
#include <complex>
#include <vector>

#include "oracles.hpp"
#include "strongmin/analyze.hpp"
#include "strongmin/linearize.hpp"
#include "strongmin/rng.hpp"

using namespace strongmin;
using namespace std::complex_literals;

namespace {

CMatrix scalar(Complex v) {
  CMatrix m(1, 1);
  m(0, 0) = v;
  return m;
}

// P(z) = z^2 diag(0, 1) + z I + I, deflated to its one-state system matrix.
PolyMatrix quad_example() {
  CMatrix p2 = CMatrix::Zero(2, 2);
  p2(1, 1) = 1.0;
  return PolyMatrix::make(
      {CMatrix::Identity(2, 2), CMatrix::Identity(2, 2), p2});
}

// Worked para-Hermitian quadratic: P(z) = z^2 diag(1, 0) - diag(0, 1).
PolyMatrix para_quad_example() {
  CMatrix p0 = CMatrix::Zero(2, 2);
  p0(1, 1) = -1.0;
  CMatrix p2 = CMatrix::Zero(2, 2);
  p2(0, 0) = 1.0;
  return PolyMatrix::make({p0, CMatrix::Zero(2, 2), p2});
}

// det P = (z + 1)(z^2 + z + 1) for quad_example.
std::vector<Complex> quad_example_eigs() {
  const double s3 = std::sqrt(3.0) / 2.0;
  return {-1.0 + 0.0i, Complex(-0.5, s3), Complex(-0.5, -s3)};
}

// Minimal two-state system padded with a spectator mode at z = 1 that B
// cannot reach: controllability fails there and nowhere else.
LinearSystemMatrix padded_state_space(std::uint64_t seed) {
  const StateSpaceTriple ss = oracles::random_minimal_state_space(2, 2, 2,
                                                                  seed);
  const Index q = 3;
  CMatrix a = CMatrix::Zero(q, q), e = CMatrix::Zero(q, q);
  a.topLeftCorner(2, 2) = ss.a;
  a(2, 2) = 1.0;
  e.topLeftCorner(2, 2) = ss.e;
  e(2, 2) = 1.0;
  CMatrix b = CMatrix::Zero(q, 2);
  b.topRows(2) = ss.b;
  CMatrix c(2, q);
  c.leftCols(2) = ss.c;
  c.col(2) << 1.0, 0.0;
  return from_state_space(StateSpaceTriple::make(a, e, b, c));
}

}  // namespace

TEST_CASE("transfer_eval matches the polynomial and reports poles") {
  const LinearSystemMatrix l = deflate_Ls(quad_example()).system;
  CMatrix want = CMatrix::Zero(2, 2);
  want(0, 0) = 2.0;
  want(1, 1) = 3.0;
  CHECK((transfer_eval(l, 1.0 + 0.0i) - want).norm() < 1e-13);

  const LaurentTail tail = LaurentTail::make({scalar(1.0), scalar(0.0)});
  const LinearSystemMatrix pole = realize_strictly_proper(tail, 1).system;
  CHECK_THROWS_AS(transfer_eval(pole, 0.0 + 0.0i), SingularityError);
}

TEST_CASE("pencil_finite_eigenvalues on the deflated quadratic") {
  const LinearSystemMatrix l = deflate_Ls(quad_example()).system;
  const auto [l0, l1] = l.plain_pair();
  const auto eigs = pencil_finite_eigenvalues(l0, l1);
  REQUIRE(eigs.size() == 3);
  for (const auto& [z, mult] : eigs) CHECK(mult == 1);
  CHECK(oracles::multiset_match_distance(oracles::expand_eigs(eigs),
                                         quad_example_eigs()) < 1e-7);
}

TEST_CASE("pencil_finite_eigenvalues clusters multiple roots") {
  CMatrix l0 = CMatrix::Zero(3, 3);
  l0(0, 0) = -1.0;
  l0(1, 1) = -1.0;
  l0(2, 2) = -2.0;
  const CMatrix l1 = CMatrix::Identity(3, 3);
  const auto eigs = pencil_finite_eigenvalues(l0, l1);
  REQUIRE(eigs.size() == 2);
  bool saw_double = false, saw_single = false;
  for (const auto& [z, mult] : eigs) {
    if (mult == 2) {
      saw_double = true;
      CHECK(std::abs(z - 1.0) < 1e-7);
    }
    if (mult == 1) {
      saw_single = true;
      CHECK(std::abs(z - 2.0) < 1e-7);
    }
  }
  CHECK(saw_double);
  CHECK(saw_single);
}

TEST_CASE("pencil_finite_eigenvalues is scale invariant and validates input") {
  Rng rng(71);
  CMatrix d = CMatrix::Zero(4, 4);
  std::vector<Complex> want;
  for (Index i = 0; i < 4; ++i) {
    d(i, i) = rng.gaussian();
    want.push_back(d(i, i));
  }
  const CMatrix l0 = -d, l1 = CMatrix::Identity(4, 4);
  const auto base = pencil_finite_eigenvalues(l0, l1);
  CHECK(oracles::multiset_match_distance(oracles::expand_eigs(base), want) <
        1e-8);
  const auto scaled = pencil_finite_eigenvalues(CMatrix(1e8 * l0),
                                                CMatrix(1e8 * l1));
  CHECK(oracles::multiset_match_distance(oracles::expand_eigs(scaled), want) <
        1e-8);

  CHECK(pencil_finite_eigenvalues(CMatrix(0, 0), CMatrix(0, 0)).empty());
  CHECK_THROWS_AS(pencil_finite_eigenvalues(CMatrix::Zero(2, 3),
                                            CMatrix::Zero(2, 3)),
                  ShapeError);
  CHECK_THROWS_AS(pencil_finite_eigenvalues(CMatrix::Zero(2, 2),
                                            CMatrix::Zero(2, 2)),
                  SingularPencilError);
  CMatrix half = CMatrix::Zero(2, 2);
  half(0, 0) = 1.0;
  CHECK_THROWS_AS(pencil_finite_eigenvalues(half, CMatrix::Zero(2, 2)),
                  SingularPencilError);
}

TEST_CASE("partial_mults_at_zero on hand-checked cases") {
  // z itself: a simple zero.
  const StructuralIndices lin = partial_mults_at_zero(
      std::vector<CMatrix>{scalar(0.0), scalar(1.0)});
  CHECK(lin.normal_rank == 1);
  CHECK(lin.indices == std::vector<int>{1});

  // z^2: one multiplicity of two.
  const StructuralIndices sq = partial_mults_at_zero(
      std::vector<CMatrix>{scalar(0.0), scalar(0.0), scalar(1.0)});
  CHECK(sq.normal_rank == 1);
  CHECK(sq.indices == std::vector<int>{2});

  // Constant identity: nothing at zero.
  const StructuralIndices id = partial_mults_at_zero(
      std::vector<CMatrix>{CMatrix::Identity(2, 2)});
  CHECK(id.normal_rank == 2);
  CHECK(id.indices.empty());

  // diag(z, z^3): multiplicities 1 and 3.
  CMatrix c1 = CMatrix::Zero(2, 2), c3 = CMatrix::Zero(2, 2);
  c1(0, 0) = 1.0;
  c3(1, 1) = 1.0;
  const StructuralIndices dg = partial_mults_at_zero(std::vector<CMatrix>{
      CMatrix::Zero(2, 2), c1, CMatrix::Zero(2, 2), c3});
  CHECK(dg.normal_rank == 2);
  CHECK(dg.indices == std::vector<int>{1, 3});

  // diag(z, 1): only the simple zero shows up.
  CMatrix k0 = CMatrix::Zero(2, 2), k1 = CMatrix::Zero(2, 2);
  k0(1, 1) = 1.0;
  k1(0, 0) = 1.0;
  const StructuralIndices mx =
      partial_mults_at_zero(std::vector<CMatrix>{k0, k1});
  CHECK(mx.normal_rank == 2);
  CHECK(mx.indices == std::vector<int>{1});

  // Zero matrix: empty rank, empty list.
  const StructuralIndices zz = partial_mults_at_zero(
      std::vector<CMatrix>{CMatrix::Zero(2, 3)});
  CHECK(zz.normal_rank == 0);
  CHECK(zz.indices.empty());

  CHECK_THROWS_AS(partial_mults_at_zero(std::vector<CMatrix>{}), InputError);
  CHECK_THROWS_AS(partial_mults_at_zero(std::vector<CMatrix>{
                      CMatrix::Zero(2, 2), CMatrix::Zero(2, 3)}),
                  ShapeError);
}

TEST_CASE("partial_mults_at_zero agrees with exact Smith reduction") {
  Rng rng(72);
  for (int trial = 0; trial < 300; ++trial) {
    // 2x2 polynomials of degree <= 2 with small integer entries.
    oracles::QPoly q[2][2];
    std::vector<CMatrix> coeffs(3, CMatrix::Zero(2, 2));
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        long long raw[3];
        for (int t = 0; t < 3; ++t) {
          raw[t] = static_cast<long long>(rng.next_seed() % 5) - 2;
          coeffs[static_cast<size_t>(t)](i, j) =
              Complex(static_cast<double>(raw[t]), 0.0);
        }
        q[i][j] = oracles::QPoly::from_ints({raw[0], raw[1], raw[2]});
      }
    }
    const oracles::SmithAtZero want =
        oracles::smith_at_zero_2x2(q[0][0], q[0][1], q[1][0], q[1][1]);
    const StructuralIndices got =
        partial_mults_at_zero(coeffs, {}, rng.next_seed());
    INFO("trial " << trial);
    REQUIRE(got.normal_rank == want.normal_rank);
    REQUIRE(got.indices == want.mults_at_zero);
  }
}

TEST_CASE("the pencil overload matches the coefficient overload") {
  Rng rng(73);
  const CMatrix l0 = rng.gaussian_matrix(3, 3);
  CMatrix l1 = rng.gaussian_matrix(3, 3);
  const StructuralIndices a =
      partial_mults_at_zero(std::vector<CMatrix>{l0, l1});
  const StructuralIndices b = partial_mults_at_zero(l0, l1);
  CHECK(a.normal_rank == b.normal_rank);
  CHECK(a.indices == b.indices);
}

TEST_CASE("check_strong_minimality passes on deflated systems") {
  Rng rng(74);
  struct Shape {
    Index m, n, d, rank;
  };
  for (const Shape s : {Shape{3, 3, 2, 1}, Shape{2, 3, 3, 2},
                        Shape{4, 2, 3, 1}}) {
    const PolyMatrix p = random_poly(s.m, s.n, s.d, rng.next_seed(), s.rank);
    const LinearSystemMatrix l = deflate_Ls(p).system;
    const MinimalityCertificate cert = check_strong_minimality(l);
    INFO("m=" << s.m << " n=" << s.n << " d=" << s.d);
    CHECK(cert.passed());
    CHECK(cert.failures.empty());
    CHECK(cert.margin_controllable > 100.0);
    CHECK(cert.margin_observable > 100.0);
  }

  // No state at all: trivially minimal with infinite margins.
  const MinimalityCertificate triv = check_strong_minimality(
      trivial_linearization(PolyMatrix::make({scalar(2.0)})));
  CHECK(triv.passed());
  CHECK(std::isinf(triv.margin_controllable));
  CHECK(std::isinf(triv.margin_observable));
}

TEST_CASE("check_strong_minimality sees the rank defect at infinity") {
  // Companion form with a column-rank-deficient leading coefficient: the
  // column pencil [A; C] loses rank exactly at infinity.
  const PolyMatrix p = random_structured_poly(3, 3, StructureTag::none, 75, 1);
  const LinearSystemMatrix l = build_Lr(p);
  const MinimalityCertificate cert = check_strong_minimality(l);
  CHECK(!cert.passed());
  CHECK(cert.controllable_finite);
  CHECK(cert.controllable_infinite);
  CHECK(cert.observable_finite);
  CHECK(!cert.observable_infinite);
  REQUIRE(!cert.failures.empty());
  bool at_inf = false;
  for (const auto& w : cert.failures) at_inf = at_inf || w.at_infinity;
  CHECK(at_inf);
}

TEST_CASE("check_strong_minimality rejects the undeflated builder") {
  // Degree-2 with a singular leading coefficient: every row and column check
  // fails because the state block is singular for all z.
  const PolyMatrix p = random_poly(2, 2, 2, 76, 1);
  const LinearSystemMatrix l = build_Ls(p);
  const MinimalityCertificate cert = check_strong_minimality(l);
  CHECK(!cert.controllable_finite);
  CHECK(!cert.controllable_infinite);
  CHECK(!cert.observable_finite);
  CHECK(!cert.observable_infinite);
  CHECK(!cert.failures.empty());
}

TEST_CASE("check_strong_minimality locates a planted uncontrollable mode") {
  for (std::uint64_t seed : {77ULL, 78ULL, 79ULL}) {
    const LinearSystemMatrix l = padded_state_space(seed);
    const MinimalityCertificate cert = check_strong_minimality(l, {}, seed);
    INFO("seed " << seed);
    CHECK(!cert.controllable_finite);
    CHECK(cert.controllable_infinite);
    CHECK(cert.observable_finite);
    CHECK(cert.observable_infinite);
    bool near_one = false;
    for (const auto& w : cert.failures) {
      near_one = near_one || (!w.at_infinity && std::abs(w.point - 1.0) < 1e-6);
    }
    CHECK(near_one);
  }
}

TEST_CASE("indices_at_infinity on the deflated quadratic") {
  const LinearSystemMatrix l = deflate_Ls(quad_example()).system;
  const std::vector<int> d = indices_at_infinity(l, 2);
  CHECK(d == std::vector<int>{-2, -1});

  const StructuralIndices inf_poly =
      eig_structure_at_infinity_poly(quad_example(), l);
  CHECK(inf_poly.normal_rank == 2);
  CHECK(inf_poly.indices == std::vector<int>{1});

  const StructuralIndices qinf = quad_infinity(quad_example(), l);
  CHECK(qinf.indices == std::vector<int>{1});
}

TEST_CASE("indices_at_infinity on the worked para-Hermitian quadratic") {
  const PolyMatrix p = para_quad_example();
  const LinearSystemMatrix l =
      deflate_Ls_structured(p, StructureTag::para_hermitian).system;
  const std::vector<int> d = indices_at_infinity(l, 2);
  CHECK(d == std::vector<int>{-2, 0});
  const StructuralIndices qinf = quad_infinity(p, l);
  CHECK(qinf.indices == std::vector<int>{2});
  CHECK_THROWS_AS(quad_infinity(PolyMatrix::make({scalar(1.0)}), l),
                  InputError);
}

TEST_CASE("indices_at_infinity of a constant are all zero") {
  const LinearSystemMatrix l =
      trivial_linearization(PolyMatrix::make({CMatrix::Identity(2, 2)}));
  CHECK(indices_at_infinity(l, 2) == std::vector<int>{0, 0});
}

TEST_CASE("indices_at_infinity refuses non-minimal input") {
  const PolyMatrix p = random_poly(2, 2, 2, 80, 1);
  const LinearSystemMatrix l = build_Ls(p);
  CHECK_THROWS_AS(indices_at_infinity(l, 2), PreconditionError);
}

TEST_CASE("eigenvector transport round trips through the system matrix") {
  const PolyMatrix p = quad_example();
  const LinearSystemMatrix l = deflate_Ls(p).system;

  // At z = -1 the transfer is diag(0, 1): e1 spans both null spaces.
  const Complex z0(-1.0, 0.0);
  CVector x(2);
  x << 1.0, 0.0;
  const CVector full_r = lift_eigenvector(l, z0, Side::right, x);
  REQUIRE(full_r.size() == 3);
  CHECK((l.assemble(z0) * full_r).norm() < 1e-12);
  CHECK((recover_eigenvector(l, z0, Side::right, full_r) - x).norm() < 1e-14);

  const CVector full_l = lift_eigenvector(l, z0, Side::left, x);
  REQUIRE(full_l.size() == 3);
  CHECK((full_l.adjoint() * l.assemble(z0)).norm() < 1e-12);
  CHECK((recover_eigenvector(l, z0, Side::left, full_l) - x).norm() < 1e-14);

  // At a root of z^2 + z + 1 the second diagonal entry vanishes instead.
  const Complex w(-0.5, std::sqrt(3.0) / 2.0);
  CVector y(2);
  y << 0.0, 1.0;
  const CVector full_w = lift_eigenvector(l, w, Side::right, y);
  CHECK((l.assemble(w) * full_w).norm() < 1e-12);
  CHECK((recover_eigenvector(l, w, Side::right, full_w) - y).norm() < 1e-14);

  // A vector that is not in the null space is rejected.
  CVector junk(3);
  junk << 1.0, 1.0, 1.0;
  CHECK_THROWS_AS(recover_eigenvector(l, z0, Side::right, junk), InputError);
  CHECK_THROWS_AS(recover_eigenvector(l, z0, Side::right, CVector::Zero(5)),
                  ShapeError);
  CHECK_THROWS_AS(lift_eigenvector(l, z0, Side::right, CVector::Zero(3)),
                  ShapeError);
}

TEST_CASE("degree_audit balances the books for the deflated quadratic") {
  const LinearSystemMatrix l = deflate_Ls(quad_example()).system;
  const DegreeAudit audit = degree_audit(l, 2);
  CHECK(audit.rank_l1 == 3);
  CHECK(audit.finite_pole_count == 0);
  CHECK(audit.polar_degree_at_infinity == 3);
  CHECK(audit.mcmillan_degree() == 3);
  CHECK(audit.consistent);
}

TEST_CASE("degree_audit on a realization with one finite pole") {
  const LaurentTail tail = LaurentTail::make(
      {scalar(1.0), scalar(1.0), scalar(1.0), scalar(1.0)});
  const LinearSystemMatrix l = realize_strictly_proper(tail, 2).system;
  const DegreeAudit audit = degree_audit(l, 1);
  CHECK(audit.rank_l1 == 1);
  CHECK(audit.finite_pole_count == 1);
  CHECK(audit.polar_degree_at_infinity == 0);
  CHECK(audit.indices_at_inf == std::vector<int>{1});
  CHECK(audit.consistent);
}

TEST_CASE("build_structural_report collects the full picture") {
  const LinearSystemMatrix l = deflate_Ls(quad_example()).system;
  const StructuralReport rep = build_structural_report(l);
  CHECK(rep.transfer_normal_rank == 2);
  CHECK(rep.indices_at_inf == std::vector<int>{-2, -1});
  CHECK(rep.square_regular);
  CHECK(oracles::multiset_match_distance(
            oracles::expand_eigs(rep.finite_eigenvalues),
            quad_example_eigs()) < 1e-7);
  CHECK(rep.audit.consistent);

  // The constant identity has no finite eigenvalues and a clean audit.
  const StructuralReport flat = build_structural_report(
      trivial_linearization(PolyMatrix::make({CMatrix::Identity(2, 2)})));
  CHECK(flat.transfer_normal_rank == 2);
  CHECK(flat.indices_at_inf == std::vector<int>{0, 0});
  CHECK(flat.square_regular);  // constant nonzero determinant, no roots
  CHECK(flat.finite_eigenvalues.empty());
  CHECK(flat.audit.consistent);
}
