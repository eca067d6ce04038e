// Copyright (c) the strongmin contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Data layer: matrix polynomials, strictly proper parts given either as a
// finite Laurent tail or as a descriptor state-space triple, and the symmetry
// structures the compression steps preserve.
//
// Coefficient conventions used everywhere downstream:
//   polynomial   P(z) = P_0 + P_1 z + ... + P_d z^d
//   Laurent tail R(z) = R_{-1} z^{-1} + ... + R_{-2k} z^{-2k}
//   pencil pair  (L0, L1) means L(z) = L0 + z L1, so the degree-1 reversal
//                z L(1/z) is the swapped pair (L1, L0).

#ifndef STRONGMIN_POLYRAT_HPP
#define STRONGMIN_POLYRAT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "strongmin/errors.hpp"
#include "strongmin/numkernel.hpp"
#include "strongmin/rng.hpp"

namespace strongmin {

enum class StructureTag {
  none,
  hermitian,
  skew_hermitian,
  para_hermitian,
  para_skew_hermitian,
};

inline const char* to_string(StructureTag tag) {
  switch (tag) {
    case StructureTag::none: return "none";
    case StructureTag::hermitian: return "hermitian";
    case StructureTag::skew_hermitian: return "skew_hermitian";
    case StructureTag::para_hermitian: return "para_hermitian";
    case StructureTag::para_skew_hermitian: return "para_skew_hermitian";
  }
  throw InputError("to_string: unknown structure tag");
}

inline std::optional<StructureTag> structure_tag_from_string(
    const std::string& s) {
  if (s == "none") return StructureTag::none;
  if (s == "hermitian") return StructureTag::hermitian;
  if (s == "skew_hermitian") return StructureTag::skew_hermitian;
  if (s == "para_hermitian") return StructureTag::para_hermitian;
  if (s == "para_skew_hermitian") return StructureTag::para_skew_hermitian;
  return std::nullopt;
}

// Sign s such that the coefficient at exponent `power` must satisfy
// M^* = s M under the tag.  Laurent blocks R_{-i} pass power = i because
// (-1)^{-i} = (-1)^i.
inline int structure_sign(StructureTag tag, Index power) {
  const int alt = (power % 2 == 0) ? 1 : -1;
  switch (tag) {
    case StructureTag::hermitian: return 1;
    case StructureTag::skew_hermitian: return -1;
    case StructureTag::para_hermitian: return alt;
    case StructureTag::para_skew_hermitian: return -alt;
    case StructureTag::none: break;
  }
  throw InputError("structure_sign: tag carries no symmetry");
}

// ---------------------------------------------------------------------------
// PolyMatrix

struct PolyMatrix {
  Index rows = 0;
  Index cols = 0;
  std::vector<CMatrix> coeffs;  // coeffs[i] multiplies z^i

  Index degree() const { return static_cast<Index>(coeffs.size()) - 1; }

  const CMatrix& coeff(Index i) const {
    return coeffs[static_cast<size_t>(i)];
  }

  // Coefficient at exponent i, zero beyond the degree.  Index formulas in the
  // block constructions rely on this extension.
  CMatrix coeff_or_zero(Index i) const {
    if (i < 0 || i > degree()) return CMatrix::Zero(rows, cols);
    return coeffs[static_cast<size_t>(i)];
  }

  double coeff_scale() const {
    double s = 0.0;
    for (const CMatrix& c : coeffs) s = std::max(s, c.norm());
    return s;
  }

  static PolyMatrix make(std::vector<CMatrix> cs) {
    if (cs.empty()) {
      throw InputError("PolyMatrix: need at least the constant coefficient");
    }
    const Index rows = cs.front().rows();
    const Index cols = cs.front().cols();
    if (rows == 0 || cols == 0) {
      throw InputError("PolyMatrix: coefficients must be nonempty matrices");
    }
    for (const CMatrix& c : cs) {
      if (c.rows() != rows || c.cols() != cols) {
        throw ShapeError("PolyMatrix: coefficient shapes disagree");
      }
      require_finite(c, "PolyMatrix");
    }
    // Exactly-zero leading coefficients are dropped so that degree() is
    // honest; judging "numerically zero" is left to the rank machinery.
    while (cs.size() > 1 && exactly_zero(cs.back())) cs.pop_back();
    return PolyMatrix{rows, cols, std::move(cs)};
  }

  static PolyMatrix zero(Index rows, Index cols) {
    return PolyMatrix{rows, cols, {CMatrix::Zero(rows, cols)}};
  }
};

inline CMatrix eval_poly(const PolyMatrix& p, Complex z) {
  CMatrix acc = CMatrix::Zero(p.rows, p.cols);
  for (auto it = p.coeffs.rbegin(); it != p.coeffs.rend(); ++it) {
    acc = z * acc + *it;
  }
  return acc;
}

// ---------------------------------------------------------------------------
// LaurentTail

struct LaurentTail {
  Index rows = 0;
  Index cols = 0;
  std::vector<CMatrix> blocks;  // blocks[i] is the coefficient of z^{-(i+1)}

  Index depth() const { return static_cast<Index>(blocks.size()); }
  Index half_depth() const { return depth() / 2; }

  // R_{-i}; zero beyond the stored depth.
  CMatrix block_or_zero(Index i) const {
    if (i < 1 || i > depth()) return CMatrix::Zero(rows, cols);
    return blocks[static_cast<size_t>(i - 1)];
  }

  double coeff_scale() const {
    double s = 0.0;
    for (const CMatrix& b : blocks) s = std::max(s, b.norm());
    return s;
  }

  static LaurentTail make(std::vector<CMatrix> bs) {
    if (bs.size() < 2 || bs.size() % 2 != 0) {
      throw InputError(
          "LaurentTail: block count must be even and at least two");
    }
    const Index rows = bs.front().rows();
    const Index cols = bs.front().cols();
    if (rows == 0 || cols == 0) {
      throw InputError("LaurentTail: blocks must be nonempty matrices");
    }
    for (const CMatrix& b : bs) {
      if (b.rows() != rows || b.cols() != cols) {
        throw ShapeError("LaurentTail: block shapes disagree");
      }
      require_finite(b, "LaurentTail");
    }
    return LaurentTail{rows, cols, std::move(bs)};
  }
};

inline CMatrix eval_laurent(const LaurentTail& t, Complex z) {
  if (z == Complex(0.0, 0.0)) {
    throw DomainError("eval_laurent: tail is undefined at z = 0");
  }
  const Complex w = Complex(1.0, 0.0) / z;
  // Horner in w = 1/z: R(z) = w (R_{-1} + w (R_{-2} + ...)).
  CMatrix acc = CMatrix::Zero(t.rows, t.cols);
  for (auto it = t.blocks.rbegin(); it != t.blocks.rend(); ++it) {
    acc = w * acc + *it;
  }
  return w * acc;
}

// ---------------------------------------------------------------------------
// StateSpaceTriple

// Descriptor realization (A, E, B, C) of a strictly proper transfer
// C (A - z E)^{-1} B with E invertible.
struct StateSpaceTriple {
  CMatrix a;
  CMatrix e;
  CMatrix b;
  CMatrix c;

  Index states() const { return a.rows(); }
  Index rows() const { return c.rows(); }
  Index cols() const { return b.cols(); }

  static StateSpaceTriple make(CMatrix a, CMatrix e, CMatrix b, CMatrix c) {
    const Index q = a.rows();
    if (a.cols() != q || e.rows() != q || e.cols() != q) {
      throw ShapeError("StateSpaceTriple: A and E must be square and equal");
    }
    if (b.rows() != q || c.cols() != q) {
      throw ShapeError("StateSpaceTriple: B and C do not match state count");
    }
    require_finite(a, "StateSpaceTriple");
    require_finite(e, "StateSpaceTriple");
    require_finite(b, "StateSpaceTriple");
    require_finite(c, "StateSpaceTriple");
    if (q > 0 && rank_of(e) < q) {
      throw InputError("StateSpaceTriple: E must be invertible");
    }
    return StateSpaceTriple{std::move(a), std::move(e), std::move(b),
                            std::move(c)};
  }
};

inline CMatrix eval_statespace(const StateSpaceTriple& ss, Complex z) {
  if (ss.states() == 0) return CMatrix::Zero(ss.rows(), ss.cols());
  const CMatrix az = ss.a - z * ss.e;
  return ss.c * lin_solve(az, ss.b);
}

// First `depth` Laurent blocks of C (A - z E)^{-1} B at infinity:
// R_{-j} = -C (E^{-1} A)^{j-1} E^{-1} B.
inline LaurentTail laurent_from_state_space(const StateSpaceTriple& ss,
                                            Index depth) {
  if (depth < 2 || depth % 2 != 0) {
    throw InputError("laurent_from_state_space: depth must be even, >= 2");
  }
  std::vector<CMatrix> blocks;
  blocks.reserve(static_cast<size_t>(depth));
  if (ss.states() == 0) {
    for (Index j = 0; j < depth; ++j) {
      blocks.push_back(CMatrix::Zero(ss.rows(), ss.cols()));
    }
    return LaurentTail{ss.rows(), ss.cols(), std::move(blocks)};
  }
  CMatrix x = lin_solve(ss.e, ss.b);  // E^{-1} B, then E^{-1} A E^{-1} B, ...
  for (Index j = 1; j <= depth; ++j) {
    blocks.push_back(-(ss.c * x));
    if (j < depth) x = lin_solve(ss.e, CMatrix(ss.a * x));
  }
  return LaurentTail::make(std::move(blocks));
}

// ---------------------------------------------------------------------------
// RationalMatrix

// Polynomial part plus an optional strictly proper part.  The two summands
// must agree in shape; either representation of the strictly proper part is
// accepted.
struct RationalMatrix {
  PolyMatrix poly;
  std::variant<std::monostate, LaurentTail, StateSpaceTriple> sp;

  Index rows() const { return poly.rows; }
  Index cols() const { return poly.cols; }
  bool has_sp() const { return !std::holds_alternative<std::monostate>(sp); }

  static RationalMatrix make(
      PolyMatrix poly,
      std::variant<std::monostate, LaurentTail, StateSpaceTriple> sp =
          std::monostate{}) {
    if (const auto* tail = std::get_if<LaurentTail>(&sp)) {
      if (tail->rows != poly.rows || tail->cols != poly.cols) {
        throw ShapeError("RationalMatrix: tail shape disagrees with poly");
      }
    } else if (const auto* tr = std::get_if<StateSpaceTriple>(&sp)) {
      if (tr->rows() != poly.rows || tr->cols() != poly.cols) {
        throw ShapeError(
            "RationalMatrix: state-space shape disagrees with poly");
      }
    }
    return RationalMatrix{std::move(poly), std::move(sp)};
  }
};

inline CMatrix eval_rational(const RationalMatrix& r, Complex z) {
  CMatrix out = eval_poly(r.poly, z);
  if (const auto* tail = std::get_if<LaurentTail>(&r.sp)) {
    out += eval_laurent(*tail, z);
  } else if (const auto* ss = std::get_if<StateSpaceTriple>(&r.sp)) {
    out += eval_statespace(*ss, z);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Structure checks

struct StructureCheck {
  bool ok = true;
  double defect = 0.0;  // max over coefficients of ||M^* - s M||_F
};

namespace detail {

inline StructureCheck check_structure_blocks(const std::vector<CMatrix>& ms,
                                             StructureTag tag,
                                             Index first_power,
                                             double scale) {
  StructureCheck out;
  if (tag == StructureTag::none) return out;
  for (size_t i = 0; i < ms.size(); ++i) {
    const Index power = first_power + static_cast<Index>(i);
    const double s = static_cast<double>(structure_sign(tag, power));
    const double d = (ms[i].adjoint() - s * ms[i]).norm();
    out.defect = std::max(out.defect, d);
  }
  out.ok = out.defect <= 1e-12 * scale;
  return out;
}

}  // namespace detail

inline StructureCheck check_structure_poly(const PolyMatrix& p,
                                           StructureTag tag) {
  if (tag != StructureTag::none && p.rows != p.cols) {
    throw ShapeError("check_structure_poly: structured matrices are square");
  }
  return detail::check_structure_blocks(p.coeffs, tag, 0, p.coeff_scale());
}

inline StructureCheck check_structure_laurent(const LaurentTail& t,
                                              StructureTag tag) {
  if (tag != StructureTag::none && t.rows != t.cols) {
    throw ShapeError(
        "check_structure_laurent: structured matrices are square");
  }
  return detail::check_structure_blocks(t.blocks, tag, 1, t.coeff_scale());
}

// ---------------------------------------------------------------------------
// Pencils

// Degree-1 reversal z L(1/z) of L(z) = L0 + z L1: a pure coefficient swap.
inline std::pair<CMatrix, CMatrix> reverse_pencil(const CMatrix& l0,
                                                  const CMatrix& l1) {
  if (l0.rows() != l1.rows() || l0.cols() != l1.cols()) {
    throw ShapeError("reverse_pencil: coefficient shapes disagree");
  }
  return {l1, l0};
}

// ---------------------------------------------------------------------------
// Structural indices

// Normal rank together with a nondecreasing list of structural indices; the
// meaning of the list (partial multiplicities at a point, indices at
// infinity) is fixed by the routine that produced it.
struct StructuralIndices {
  Index normal_rank = 0;
  std::vector<int> indices;
};

// ---------------------------------------------------------------------------
// Random generators (seeded, for tests and demos)

namespace detail {

// Projects a Gaussian draw onto the class M^* = s M; with `rank` set, plants
// an exact-rank representative instead (G G^* is Hermitian of rank |G|, and
// i G G^* is skew-Hermitian of the same rank).
inline CMatrix random_signed(Rng& rng, Index m, int s,
                             std::optional<Index> rank) {
  if (rank) {
    const CMatrix g = rng.gaussian_matrix(m, *rank);
    CMatrix out = g * g.adjoint();
    if (s < 0) out *= Complex(0.0, 1.0);
    return out;
  }
  const CMatrix g = rng.gaussian_matrix(m, m);
  return 0.5 * (g + static_cast<double>(s) * g.adjoint());
}

}  // namespace detail

// Random square matrix polynomial of exact degree d with the tag's symmetry.
// `leading_rank` plants an exact rank on P_d (the deflation step then has
// genuine work to do).
inline PolyMatrix random_structured_poly(Index m, Index d, StructureTag tag,
                                         std::uint64_t seed,
                                         std::optional<Index> leading_rank =
                                             std::nullopt) {
  if (m < 1 || d < 0) {
    throw InputError("random_structured_poly: need m >= 1 and d >= 0");
  }
  if (leading_rank && (*leading_rank < 1 || *leading_rank > m)) {
    throw InputError("random_structured_poly: leading rank out of range");
  }
  Rng rng(seed);
  std::vector<CMatrix> cs;
  cs.reserve(static_cast<size_t>(d) + 1);
  for (Index i = 0; i <= d; ++i) {
    const bool leading = (i == d);
    const std::optional<Index> r =
        leading ? leading_rank : std::optional<Index>{};
    if (tag == StructureTag::none) {
      if (r) {
        cs.push_back(rng.gaussian_matrix(m, *r) * rng.gaussian_matrix(*r, m));
      } else {
        cs.push_back(rng.gaussian_matrix(m, m));
      }
    } else {
      cs.push_back(detail::random_signed(rng, m, structure_sign(tag, i), r));
    }
  }
  return PolyMatrix::make(std::move(cs));
}

// Rectangular unstructured variant.
inline PolyMatrix random_poly(Index m, Index n, Index d, std::uint64_t seed,
                              std::optional<Index> leading_rank =
                                  std::nullopt) {
  if (m < 1 || n < 1 || d < 0) {
    throw InputError("random_poly: need m, n >= 1 and d >= 0");
  }
  if (leading_rank && (*leading_rank < 1 || *leading_rank > std::min(m, n))) {
    throw InputError("random_poly: leading rank out of range");
  }
  Rng rng(seed);
  std::vector<CMatrix> cs;
  for (Index i = 0; i <= d; ++i) {
    if (i == d && leading_rank) {
      cs.push_back(rng.gaussian_matrix(m, *leading_rank) *
                   rng.gaussian_matrix(*leading_rank, n));
    } else {
      cs.push_back(rng.gaussian_matrix(m, n));
    }
  }
  return PolyMatrix::make(std::move(cs));
}

// Random Laurent tail of depth 2k with the tag's symmetry; `leading_rank`
// plants an exact rank on R_{-1}.
inline LaurentTail random_structured_tail(Index m, Index depth,
                                          StructureTag tag,
                                          std::uint64_t seed,
                                          std::optional<Index> leading_rank =
                                              std::nullopt) {
  if (m < 1 || depth < 2 || depth % 2 != 0) {
    throw InputError(
        "random_structured_tail: need m >= 1 and even depth >= 2");
  }
  if (leading_rank && (*leading_rank < 1 || *leading_rank > m)) {
    throw InputError("random_structured_tail: leading rank out of range");
  }
  Rng rng(seed);
  std::vector<CMatrix> bs;
  bs.reserve(static_cast<size_t>(depth));
  for (Index i = 1; i <= depth; ++i) {
    const std::optional<Index> r =
        (i == 1) ? leading_rank : std::optional<Index>{};
    if (tag == StructureTag::none) {
      if (r) {
        bs.push_back(rng.gaussian_matrix(m, *r) * rng.gaussian_matrix(*r, m));
      } else {
        bs.push_back(rng.gaussian_matrix(m, m));
      }
    } else {
      bs.push_back(detail::random_signed(rng, m, structure_sign(tag, i), r));
    }
  }
  return LaurentTail::make(std::move(bs));
}

}  // namespace strongmin

#endif  // STRONGMIN_POLYRAT_HPP
