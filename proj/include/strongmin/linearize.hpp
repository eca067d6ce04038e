// Copyright (c) the strongmin contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Degree-1 system matrices L(z) = [[A(z), -B(z)], [C(z), D(z)]] with transfer
// D + C A^{-1} B, and the constructions that produce strongly minimal ones:
// unitary deflation of the coefficient Hankel for polynomial parts, moment
// realizations for strictly proper parts, and their block-diagonal
// combination.  Structured variants keep the four symmetry classes exactly,
// by congruence plus a final coefficient averaging whose correction size is
// reported back to the caller.

#ifndef STRONGMIN_LINEARIZE_HPP
#define STRONGMIN_LINEARIZE_HPP

#include <optional>
#include <utility>

#include "strongmin/errors.hpp"
#include "strongmin/hankel.hpp"
#include "strongmin/numkernel.hpp"
#include "strongmin/polyrat.hpp"

namespace strongmin {

// ---------------------------------------------------------------------------
// LinearSystemMatrix

// Eight constant matrices storing A(z) = z A1 - A0, B(z) = z B1 - B0,
// C(z) = z C1 - C0, D(z) = z D1 - D0.  The state block is square except for
// the raw undeflated builder below, whose A block is (d-1)m x (d-1)n.
struct LinearSystemMatrix {
  CMatrix a0, a1;  // state_rows x state_cols
  CMatrix b0, b1;  // state_rows x inputs
  CMatrix c0, c1;  // outputs x state_cols
  CMatrix d0, d1;  // outputs x inputs

  Index state_rows() const { return a0.rows(); }
  Index state_cols() const { return a0.cols(); }
  Index outputs() const { return d0.rows(); }
  Index inputs() const { return d0.cols(); }

  Index state_dim() const {
    if (state_rows() != state_cols()) {
      throw ShapeError("LinearSystemMatrix: state block is not square");
    }
    return state_rows();
  }

  CMatrix a_at(Complex z) const { return z * a1 - a0; }
  CMatrix b_at(Complex z) const { return z * b1 - b0; }
  CMatrix c_at(Complex z) const { return z * c1 - c0; }
  CMatrix d_at(Complex z) const { return z * d1 - d0; }

  // Constant coefficients of L(z) = L0 + z L1, assembled in the
  // [[A, -B], [C, D]] block layout.
  std::pair<CMatrix, CMatrix> plain_pair() const {
    const Index pr = state_rows(), pc = state_cols();
    const Index m = outputs(), n = inputs();
    CMatrix l0 = CMatrix::Zero(pr + m, pc + n);
    CMatrix l1 = CMatrix::Zero(pr + m, pc + n);
    l0.topLeftCorner(pr, pc) = -a0;
    l0.topRightCorner(pr, n) = b0;
    l0.bottomLeftCorner(m, pc) = -c0;
    l0.bottomRightCorner(m, n) = -d0;
    l1.topLeftCorner(pr, pc) = a1;
    l1.topRightCorner(pr, n) = -b1;
    l1.bottomLeftCorner(m, pc) = c1;
    l1.bottomRightCorner(m, n) = d1;
    return {std::move(l0), std::move(l1)};
  }

  CMatrix assemble(Complex z) const {
    const auto [l0, l1] = plain_pair();
    return l0 + z * l1;
  }

  static LinearSystemMatrix make(CMatrix a0, CMatrix a1, CMatrix b0,
                                 CMatrix b1, CMatrix c0, CMatrix c1,
                                 CMatrix d0, CMatrix d1) {
    const Index pr = a0.rows(), pc = a0.cols();
    const Index m = d0.rows(), n = d0.cols();
    const auto shape = [](const CMatrix& x, Index r, Index c) {
      return x.rows() == r && x.cols() == c;
    };
    if (!shape(a1, pr, pc) || !shape(b0, pr, n) || !shape(b1, pr, n) ||
        !shape(c0, m, pc) || !shape(c1, m, pc) || !shape(d1, m, n)) {
      throw ShapeError("LinearSystemMatrix: block shapes disagree");
    }
    for (const CMatrix* x : {&a0, &a1, &b0, &b1, &c0, &c1, &d0, &d1}) {
      require_finite(*x, "LinearSystemMatrix");
    }
    return LinearSystemMatrix{std::move(a0), std::move(a1), std::move(b0),
                              std::move(b1), std::move(c0), std::move(c1),
                              std::move(d0), std::move(d1)};
  }

  // Inverse of plain_pair for given block dimensions.
  static LinearSystemMatrix from_plain(const CMatrix& l0, const CMatrix& l1,
                                       Index state_rows, Index state_cols) {
    if (l0.rows() != l1.rows() || l0.cols() != l1.cols() ||
        state_rows > l0.rows() || state_cols > l0.cols()) {
      throw ShapeError("LinearSystemMatrix: bad plain pencil dimensions");
    }
    const Index m = l0.rows() - state_rows, n = l0.cols() - state_cols;
    return make(-l0.topLeftCorner(state_rows, state_cols),
                l1.topLeftCorner(state_rows, state_cols),
                l0.topRightCorner(state_rows, n),
                -l1.topRightCorner(state_rows, n),
                -l0.bottomLeftCorner(m, state_cols),
                l1.bottomLeftCorner(m, state_cols),
                -l0.bottomRightCorner(m, n), l1.bottomRightCorner(m, n));
  }
};

// Largest coefficient norm, used to scale residual and symmetry checks.
inline double coefficient_scale(const LinearSystemMatrix& l) {
  const auto [l0, l1] = l.plain_pair();
  return std::max(l0.norm(), l1.norm());
}

// Residual of the tag's coefficient symmetry on the assembled pencil.
inline double pencil_symmetry_defect(const LinearSystemMatrix& l,
                                     StructureTag tag) {
  const auto [l0, l1] = l.plain_pair();
  const double s0 = static_cast<double>(structure_sign(tag, 0));
  const double s1 = static_cast<double>(structure_sign(tag, 1));
  return std::max((l0.adjoint() - s0 * l0).norm(),
                  (l1.adjoint() - s1 * l1).norm());
}

namespace detail {

// Replaces the pencil by the nearest one with the tag's exact coefficient
// symmetries and returns the defect that was averaged away.
inline double symmetrize_pencil(LinearSystemMatrix& l, StructureTag tag) {
  const double defect = pencil_symmetry_defect(l, tag);
  auto [l0, l1] = l.plain_pair();
  const double s0 = static_cast<double>(structure_sign(tag, 0));
  const double s1 = static_cast<double>(structure_sign(tag, 1));
  l0 = 0.5 * (l0 + s0 * l0.adjoint());
  l1 = 0.5 * (l1 + s1 * l1.adjoint());
  l = LinearSystemMatrix::from_plain(l0, l1, l.state_rows(), l.state_cols());
  return defect;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Constant and linear inputs

// Degree at most one: the polynomial is its own transfer, no state needed.
inline LinearSystemMatrix trivial_linearization(const PolyMatrix& p) {
  if (p.degree() > 1) {
    throw InputError("trivial_linearization: degree must be at most 1");
  }
  const Index m = p.rows, n = p.cols;
  return LinearSystemMatrix::make(
      CMatrix(0, 0), CMatrix(0, 0), CMatrix(0, n), CMatrix(0, n),
      CMatrix(m, 0), CMatrix(m, 0), -p.coeff(0), p.coeff_or_zero(1));
}

// ---------------------------------------------------------------------------
// Companion-style builders (degree >= 2)

// Row companion form: shift-structured A over n-sized blocks, coefficients in
// the C block.  Strongly minimal iff P_d has full column rank.
inline LinearSystemMatrix build_Lr(const PolyMatrix& p) {
  const Index d = p.degree();
  if (d < 2) {
    throw DegenerateDegreeError("build_Lr: defined for degree >= 2 only");
  }
  const Index m = p.rows, n = p.cols;
  const Index s = (d - 1) * n;
  CMatrix a0 = CMatrix::Identity(s, s);
  CMatrix a1 = CMatrix::Zero(s, s);
  for (Index i = 0; i + 1 <= d - 2; ++i) {
    a1.block(i * n, (i + 1) * n, n, n) = CMatrix::Identity(n, n);
  }
  CMatrix b1 = CMatrix::Zero(s, n);
  b1.bottomRows(n) = -CMatrix::Identity(n, n);
  CMatrix c1 = CMatrix::Zero(m, s);
  for (Index j = 1; j <= d - 1; ++j) {
    c1.middleCols((j - 1) * n, n) = p.coeff(d + 1 - j);
  }
  return LinearSystemMatrix::make(std::move(a0), std::move(a1),
                                  CMatrix::Zero(s, n), std::move(b1),
                                  CMatrix::Zero(m, s), std::move(c1),
                                  -p.coeff(0), p.coeff(1));
}

// Column companion form, dual to build_Lr: coefficients in the B block.
// Strongly minimal iff P_d has full row rank.
inline LinearSystemMatrix build_Lc(const PolyMatrix& p) {
  const Index d = p.degree();
  if (d < 2) {
    throw DegenerateDegreeError("build_Lc: defined for degree >= 2 only");
  }
  const Index m = p.rows, n = p.cols;
  const Index s = (d - 1) * m;
  CMatrix a0 = CMatrix::Identity(s, s);
  CMatrix a1 = CMatrix::Zero(s, s);
  for (Index i = 0; i + 1 <= d - 2; ++i) {
    a1.block((i + 1) * m, i * m, m, m) = CMatrix::Identity(m, m);
  }
  CMatrix b1 = CMatrix::Zero(s, n);
  for (Index i = 1; i <= d - 1; ++i) {
    b1.middleRows((i - 1) * m, m) = -p.coeff(d + 1 - i);
  }
  CMatrix c1 = CMatrix::Zero(m, s);
  c1.rightCols(m) = CMatrix::Identity(m, m);
  return LinearSystemMatrix::make(std::move(a0), std::move(a1),
                                  CMatrix::Zero(s, n), std::move(b1),
                                  CMatrix::Zero(m, s), std::move(c1),
                                  -p.coeff(0), p.coeff(1));
}

namespace detail {

// First-degree coefficient of the symmetric builder's A block: the
// coefficient Hankel shifted one antidiagonal up, block (i, j) holding
// P_{2d+1-i-j} where the subscript stays within the degree.
inline CMatrix build_As1(const PolyMatrix& p) {
  const Index d = p.degree();
  const Index m = p.rows, n = p.cols;
  CMatrix a1 = CMatrix::Zero((d - 1) * m, (d - 1) * n);
  for (Index i = 1; i <= d - 1; ++i) {
    for (Index j = 1; j <= d - 1; ++j) {
      const Index sub = 2 * d + 1 - i - j;
      if (sub <= d) {
        a1.block((i - 1) * m, (j - 1) * n, m, n) = p.coeff(sub);
      }
    }
  }
  return a1;
}

// Stack of (P_d, ..., P_2), block i holding P_{d+1-i}.
inline CMatrix coeff_stack(const PolyMatrix& p) {
  const Index d = p.degree();
  CMatrix s = CMatrix::Zero((d - 1) * p.rows, p.cols);
  for (Index i = 1; i <= d - 1; ++i) {
    s.middleRows((i - 1) * p.rows, p.rows) = p.coeff(d + 1 - i);
  }
  return s;
}

// Row of (P_d, ..., P_2), block j holding P_{d+1-j}.
inline CMatrix coeff_row(const PolyMatrix& p) {
  const Index d = p.degree();
  CMatrix r = CMatrix::Zero(p.rows, (d - 1) * p.cols);
  for (Index j = 1; j <= d - 1; ++j) {
    r.middleCols((j - 1) * p.cols, p.cols) = p.coeff(d + 1 - j);
  }
  return r;
}

}  // namespace detail

// Symmetric (Hankel) builder: A0 is the coefficient Hankel of build_T, so
// the state block is (d-1)m x (d-1)n and regular only when P_d is square
// invertible.  Starting point of the deflation below; not itself a system
// matrix in the rectangular or singular case.
inline LinearSystemMatrix build_Ls(const PolyMatrix& p) {
  const Index d = p.degree();
  if (d < 2) {
    throw DegenerateDegreeError("build_Ls: defined for degree >= 2 only");
  }
  const Index m = p.rows, n = p.cols;
  return LinearSystemMatrix::make(
      build_T(p), detail::build_As1(p), CMatrix::Zero((d - 1) * m, n),
      -detail::coeff_stack(p), CMatrix::Zero(m, (d - 1) * n),
      detail::coeff_row(p), -p.coeff(0), p.coeff(1));
}

// ---------------------------------------------------------------------------
// Deflation of the symmetric builder

struct DeflationOutcome {
  LinearSystemMatrix system;
  CompressionResult compression;
  // Norm of the blocks the compression is supposed to zero out across the
  // whole conjugated pencil (exactly zero in exact arithmetic).
  double deflation_residual = 0.0;
  // Structured path only: symmetry defect averaged away at the end.
  double symmetry_defect = 0.0;
};

namespace detail {

// Conjugates build_Ls by the compression bases and reads off the deflated
// system matrix living in the core rows and columns.
inline DeflationOutcome deflate_from_compression(const PolyMatrix& p,
                                                 CompressionResult comp) {
  const Index r = comp.rank;
  const CMatrix u2 = comp.u_core(), v2 = comp.v_core();
  const CMatrix u1 = comp.u_zeros(), v1 = comp.v_zeros();
  const CMatrix as1 = build_As1(p);
  const CMatrix bs1 = -coeff_stack(p);  // B block, degree-1 coefficient
  const CMatrix cs1 = coeff_row(p);
  DeflationOutcome out{
      LinearSystemMatrix::make(comp.core, u2.adjoint() * as1 * v2,
                               CMatrix::Zero(r, p.cols), u2.adjoint() * bs1,
                               CMatrix::Zero(p.rows, r), cs1 * v2,
                               -p.coeff(0), p.coeff(1)),
      std::move(comp), 0.0, 0.0};
  // The deflated rows and columns must vanish in every coefficient:
  // U1 annihilates the Hankel from the left, V1 from the right.
  const CMatrix t = build_T(p);
  double res = std::max({(u1.adjoint() * t).norm(), (t * v1).norm(),
                         (u1.adjoint() * as1).norm(), (as1 * v1).norm(),
                         (u1.adjoint() * bs1).norm(), (cs1 * v1).norm()});
  out.deflation_residual = res;
  return out;
}

}  // namespace detail

// Unitary deflation of build_Ls via the SVD of the coefficient Hankel T:
// with U^* T V = diag(0, core), the core rows and columns of the conjugated
// pencil form a strongly minimal system matrix of P with state dimension
// rank(T), and A(0) = -core.
inline DeflationOutcome deflate_Ls(const PolyMatrix& p,
                                   RankTolerance tol = {}) {
  const Index d = p.degree();
  if (d < 2) {
    throw DegenerateDegreeError("deflate_Ls: defined for degree >= 2 only");
  }
  return detail::deflate_from_compression(
      p, compress_unstructured(build_T(p), Layout::zeros_first, tol));
}

// Structure-preserving deflation: the compression is a congruence (U = V for
// Hermitian and skew-Hermitian inputs, U = S_poly V for the para classes),
// so the deflated pencil inherits the tag's coefficient symmetries, which a
// final averaging makes exact.
inline DeflationOutcome deflate_Ls_structured(const PolyMatrix& p,
                                              StructureTag tag,
                                              RankTolerance tol = {}) {
  const Index d = p.degree();
  if (d < 2) {
    throw DegenerateDegreeError(
        "deflate_Ls_structured: defined for degree >= 2 only");
  }
  if (tag == StructureTag::none) {
    throw InputError("deflate_Ls_structured: tag carries no symmetry");
  }
  const StructureCheck chk = check_structure_poly(p, tag);
  if (!chk.ok) {
    throw StructureError("deflate_Ls_structured: input lacks the structure",
                         chk.defect);
  }
  const bool para = tag == StructureTag::para_hermitian ||
                    tag == StructureTag::para_skew_hermitian;
  const ScalingS s = para ? build_S_poly(d, p.rows)
                          : ScalingS::identity((d - 1) * p.rows);
  DeflationOutcome out = detail::deflate_from_compression(
      p, compress_structured(build_T(p), tag, s, Layout::zeros_first, tol));
  out.symmetry_defect = detail::symmetrize_pencil(out.system, tag);
  return out;
}

// ---------------------------------------------------------------------------
// Quadratic shortcuts

// Degree-2 specialization: T = P_2, so the deflation is a single compression
// of the leading coefficient, [[-core, z core V2^*], [z U2 core, z P_1 + P_0]]
// up to the bases.  Equals deflate_Ls on the same input.
inline DeflationOutcome quad_lowrank(const PolyMatrix& p,
                                     RankTolerance tol = {}) {
  if (p.degree() != 2) {
    throw InputError("quad_lowrank: defined for degree 2 exactly");
  }
  CompressionResult comp =
      compress_unstructured(p.coeff(2), Layout::zeros_first, tol);
  const Index r = comp.rank;
  const CMatrix u2 = comp.u_core(), v2 = comp.v_core();
  DeflationOutcome out{
      LinearSystemMatrix::make(comp.core, CMatrix::Zero(r, r),
                               CMatrix::Zero(r, p.cols),
                               -(comp.core * v2.adjoint()),
                               CMatrix::Zero(p.rows, r), u2 * comp.core,
                               -p.coeff(0), p.coeff(1)),
      CompressionResult{}, 0.0, 0.0};
  out.deflation_residual = comp.off_core_residual;
  out.compression = std::move(comp);
  return out;
}

// Degree-2 input with the leading coefficient already factored as
// P_2 = lfac ufac^* with both factors of full column rank: no compression is
// needed and the state dimension is the factor width.
inline LinearSystemMatrix quad_lowrank_factored(const CMatrix& p1,
                                                const CMatrix& p0,
                                                const CMatrix& lfac,
                                                const CMatrix& ufac) {
  const Index m = p0.rows(), n = p0.cols();
  const Index r = lfac.cols();
  if (p1.rows() != m || p1.cols() != n) {
    throw ShapeError("quad_lowrank_factored: coefficient shapes disagree");
  }
  if (lfac.rows() != m || ufac.rows() != n || ufac.cols() != r) {
    throw ShapeError("quad_lowrank_factored: factor shapes disagree");
  }
  if (rank_of(lfac) < r || rank_of(ufac) < r) {
    throw InputError("quad_lowrank_factored: factors must have full column rank");
  }
  return LinearSystemMatrix::make(
      CMatrix::Identity(r, r), CMatrix::Zero(r, r), CMatrix::Zero(r, n),
      -ufac.adjoint(), CMatrix::Zero(m, r), lfac, -p0, p1);
}

// ---------------------------------------------------------------------------
// Strictly proper parts

struct RealizationOutcome {
  LinearSystemMatrix system;
  CompressionResult compression;
  double symmetry_defect = 0.0;       // structured path, pencil coefficients
  double core_symmetry_defect = 0.0;  // structured path, core block
};

namespace detail {

// Shared assembly: with U^* H V = diag(core, 0) (core first) the system
// [[U1^* H_sigma V1 - z core, core V11^*], [U11 core, 0]] realizes the tail,
// U11 and V11 being the leading m and n rows of the core bases.
inline RealizationOutcome realize_from_compression(const LaurentTail& tail,
                                                   CompressionResult comp,
                                                   const CMatrix& h_sigma) {
  const Index m = tail.rows, n = tail.cols;
  const Index r = comp.rank;
  const CMatrix u1 = comp.u_core(), v1 = comp.v_core();
  const CMatrix u11 = u1.topRows(m);
  const CMatrix v11 = v1.topRows(n);
  RealizationOutcome out{
      LinearSystemMatrix::make(-(u1.adjoint() * h_sigma * v1), -comp.core,
                               comp.core * v11.adjoint(), CMatrix::Zero(r, n),
                               -(u11 * comp.core), CMatrix::Zero(m, r),
                               CMatrix::Zero(m, n), CMatrix::Zero(m, n)),
      std::move(comp), 0.0, 0.0};
  return out;
}

}  // namespace detail

// Moment realization of a strictly proper transfer given by its Laurent
// tail: compress the k-block moment Hankel, keep the core.  The state
// dimension is rank H(k); with k at the stabilized order of choose_k this is
// a minimal realization and the transfer matches the tail exactly.
inline RealizationOutcome realize_strictly_proper(const LaurentTail& tail,
                                                  Index k,
                                                  RankTolerance tol = {}) {
  auto [h, h_sigma] = build_H_pair(tail, k);
  return detail::realize_from_compression(
      tail, compress_unstructured(h, Layout::core_first, tol), h_sigma);
}

// Structure-preserving moment realization (square tails).  The compression
// congruence uses S_rat for the para classes and the identity otherwise; the
// core block then carries the symmetry listed in the class table, and the
// final averaging makes the pencil symmetries exact.
inline RealizationOutcome realize_strictly_proper_structured(
    const LaurentTail& tail, StructureTag tag, Index k,
    RankTolerance tol = {}) {
  if (tag == StructureTag::none) {
    throw InputError(
        "realize_strictly_proper_structured: tag carries no symmetry");
  }
  const StructureCheck chk = check_structure_laurent(tail, tag);
  if (!chk.ok) {
    throw StructureError(
        "realize_strictly_proper_structured: input lacks the structure",
        chk.defect);
  }
  auto [h, h_sigma] = build_H_pair(tail, k);
  const bool para = tag == StructureTag::para_hermitian ||
                    tag == StructureTag::para_skew_hermitian;
  const ScalingS s =
      para ? build_S_rat(k, tail.rows) : ScalingS::identity(k * tail.rows);
  RealizationOutcome out = detail::realize_from_compression(
      tail, compress_structured(h, tag, s, Layout::core_first, tol), h_sigma);
  // Core symmetry per class: Hermitian tails give a Hermitian core,
  // skew-Hermitian and para-Hermitian a skew-Hermitian one, para-skew a
  // Hermitian one again.
  const int core_sign = (tag == StructureTag::hermitian ||
                         tag == StructureTag::para_skew_hermitian)
                            ? 1
                            : -1;
  const CMatrix& core = out.compression.core;
  out.core_symmetry_defect =
      (core.adjoint() - static_cast<double>(core_sign) * core).norm();
  out.symmetry_defect = detail::symmetrize_pencil(out.system, tag);
  return out;
}

// Descriptor realization taken as-is: [[A - z E, -B], [C, 0]].
inline LinearSystemMatrix from_state_space(const StateSpaceTriple& ss) {
  const Index m = ss.rows(), n = ss.cols();
  return LinearSystemMatrix::make(-ss.a, -ss.e, -ss.b,
                                  CMatrix::Zero(ss.states(), n), -ss.c,
                                  CMatrix::Zero(m, ss.states()),
                                  CMatrix::Zero(m, n), CMatrix::Zero(m, n));
}

// ---------------------------------------------------------------------------
// Combination

// Block-diagonal coupling of a polynomial-part system matrix with a strictly
// proper one (whose D block must vanish identically): states concatenate,
// transfers add.  Strong minimality of both parts carries over because their
// state matrices share no eigenvalues in the spectra that matter: the
// polynomial part's A is unimodular, the strictly proper part contributes
// the finite poles.
inline LinearSystemMatrix combine(const LinearSystemMatrix& lpoly,
                                  const LinearSystemMatrix& lsp) {
  const Index m = lpoly.outputs(), n = lpoly.inputs();
  if (lsp.outputs() != m || lsp.inputs() != n) {
    throw ShapeError("combine: transfer dimensions disagree");
  }
  if (!exactly_zero(lsp.d0) || !exactly_zero(lsp.d1)) {
    throw PreconditionError("combine: strictly proper part must have D = 0");
  }
  const Index p1 = lpoly.state_dim(), p2 = lsp.state_dim();
  const Index p = p1 + p2;
  CMatrix a0 = CMatrix::Zero(p, p), a1 = CMatrix::Zero(p, p);
  a0.topLeftCorner(p1, p1) = lpoly.a0;
  a0.bottomRightCorner(p2, p2) = lsp.a0;
  a1.topLeftCorner(p1, p1) = lpoly.a1;
  a1.bottomRightCorner(p2, p2) = lsp.a1;
  CMatrix b0(p, n), b1(p, n);
  b0.topRows(p1) = lpoly.b0;
  b0.bottomRows(p2) = lsp.b0;
  b1.topRows(p1) = lpoly.b1;
  b1.bottomRows(p2) = lsp.b1;
  CMatrix c0(m, p), c1(m, p);
  c0.leftCols(p1) = lpoly.c0;
  c0.rightCols(p2) = lsp.c0;
  c1.leftCols(p1) = lpoly.c1;
  c1.rightCols(p2) = lsp.c1;
  return LinearSystemMatrix::make(std::move(a0), std::move(a1), std::move(b0),
                                  std::move(b1), std::move(c0), std::move(c1),
                                  lpoly.d0, lpoly.d1);
}

// ---------------------------------------------------------------------------
// End-to-end construction

struct RationalLinearization {
  LinearSystemMatrix system;
  std::optional<DeflationOutcome> poly_part;
  std::optional<RealizationOutcome> sp_part;
  std::optional<ChooseK> order_selection;  // set when k was chosen here
  Index k_used = 0;                        // 0 when no tail was realized
  bool borderline = false;
};

// One-stop construction for a rational matrix given as polynomial part plus
// optional strictly proper part.  Degree <= 1 polynomial parts need no
// state; tails are realized at the requested moment order k (chosen from the
// tail when absent); state-space parts are wrapped as-is, after checking
// that they carry the requested structure.
inline RationalLinearization linearize_rational(
    const RationalMatrix& r, StructureTag tag = StructureTag::none,
    RankTolerance tol = {}, std::optional<Index> k = std::nullopt) {
  RationalLinearization out;
  const Index d = r.poly.degree();
  LinearSystemMatrix lpoly;
  if (d >= 2) {
    DeflationOutcome defl =
        (tag == StructureTag::none)
            ? deflate_Ls(r.poly, tol)
            : deflate_Ls_structured(r.poly, tag, tol);
    lpoly = defl.system;
    out.borderline = out.borderline || defl.compression.borderline;
    out.poly_part = std::move(defl);
  } else {
    if (tag != StructureTag::none) {
      const StructureCheck chk = check_structure_poly(r.poly, tag);
      if (!chk.ok) {
        throw StructureError("linearize_rational: poly part lacks structure",
                             chk.defect);
      }
    }
    lpoly = trivial_linearization(r.poly);
  }

  if (const auto* tail = std::get_if<LaurentTail>(&r.sp)) {
    Index k_used;
    if (k) {
      k_used = *k;
    } else {
      ChooseK sel = choose_k(*tail, tol);
      k_used = sel.k_used;
      out.borderline = out.borderline || !sel.stabilized;
      out.order_selection = std::move(sel);
    }
    RealizationOutcome sp =
        (tag == StructureTag::none)
            ? realize_strictly_proper(*tail, k_used, tol)
            : realize_strictly_proper_structured(*tail, tag, k_used, tol);
    out.k_used = k_used;
    out.borderline = out.borderline || sp.compression.borderline;
    out.system = combine(lpoly, sp.system);
    out.sp_part = std::move(sp);
  } else if (const auto* ss = std::get_if<StateSpaceTriple>(&r.sp)) {
    LinearSystemMatrix lsp = from_state_space(*ss);
    if (tag != StructureTag::none) {
      const double defect = pencil_symmetry_defect(lsp, tag);
      const double scale = coefficient_scale(lsp);
      if (defect > 1e-12 * std::max(scale, 1.0)) {
        throw StructureError(
            "linearize_rational: state-space part lacks the structure",
            defect);
      }
    }
    out.system = combine(lpoly, lsp);
  } else {
    out.system = lpoly;
  }
  return out;
}

}  // namespace strongmin

#endif  // STRONGMIN_LINEARIZE_HPP
