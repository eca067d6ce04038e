// Copyright (c) the strongmin contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Block Hankel matrices attached to a matrix polynomial or a Laurent tail,
// and the rank-revealing unitary compressions the linearization steps build
// on.  The structured variant produces congruences U = S V that preserve the
// four symmetry classes.

#ifndef STRONGMIN_HANKEL_HPP
#define STRONGMIN_HANKEL_HPP

#include <algorithm>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "strongmin/errors.hpp"
#include "strongmin/numkernel.hpp"
#include "strongmin/polyrat.hpp"

namespace strongmin {

enum class Layout { zeros_first, core_first };

// ---------------------------------------------------------------------------
// Builders

// Upper coefficient Hankel of P(z) = sum P_i z^i for degree d >= 2: block
// (i, j), 1-based, is P_{2d-i-j} (zero once the subscript exceeds d), with
// d-1 block rows of height m and d-1 block columns of width n.  Subscripts
// run from 2 in the bottom-right corner up the antidiagonals.
inline CMatrix build_T(const PolyMatrix& p) {
  const Index d = p.degree();
  if (d < 2) {
    throw DegenerateDegreeError("build_T: defined for degree >= 2 only");
  }
  const Index m = p.rows, n = p.cols;
  CMatrix t = CMatrix::Zero((d - 1) * m, (d - 1) * n);
  for (Index i = 1; i <= d - 1; ++i) {
    for (Index j = 1; j <= d - 1; ++j) {
      const Index sub = 2 * d - i - j;
      if (sub <= d) {
        t.block((i - 1) * m, (j - 1) * n, m, n) = p.coeff(sub);
      }
    }
  }
  return t;
}

// Moment Hankel pair of a Laurent tail: H has block (i, j) = R_{-(i+j-1)}
// and its shift H_sigma has block (i, j) = R_{-(i+j)}, both k x k blocks.
// The tail must hold at least 2k blocks.
inline std::pair<CMatrix, CMatrix> build_H_pair(const LaurentTail& tail,
                                                Index k) {
  if (k < 1) throw InputError("build_H_pair: k must be at least 1");
  if (tail.depth() < 2 * k) {
    throw InputError("build_H_pair: tail depth is below 2k");
  }
  const Index m = tail.rows, n = tail.cols;
  CMatrix h = CMatrix::Zero(k * m, k * n);
  CMatrix hs = CMatrix::Zero(k * m, k * n);
  for (Index i = 1; i <= k; ++i) {
    for (Index j = 1; j <= k; ++j) {
      h.block((i - 1) * m, (j - 1) * n, m, n) = tail.block_or_zero(i + j - 1);
      hs.block((i - 1) * m, (j - 1) * n, m, n) = tail.block_or_zero(i + j);
    }
  }
  return {std::move(h), std::move(hs)};
}

// ---------------------------------------------------------------------------
// Block sign scalings

// Block diagonal matrix diag(s_1 I_b, ..., s_r I_b) with signs s_j = +-1.
struct ScalingS {
  Index block_size = 0;
  std::vector<int> signs;

  Index dim() const {
    return block_size * static_cast<Index>(signs.size());
  }

  CMatrix matrix() const {
    CMatrix s = CMatrix::Zero(dim(), dim());
    for (size_t j = 0; j < signs.size(); ++j) {
      const Index off = static_cast<Index>(j) * block_size;
      for (Index i = 0; i < block_size; ++i) {
        s(off + i, off + i) = Complex(static_cast<double>(signs[j]), 0.0);
      }
    }
    return s;
  }

  // S * M without forming S.
  CMatrix apply_left(const CMatrix& m) const {
    if (m.rows() != dim()) {
      throw ShapeError("ScalingS: row count does not match scaling");
    }
    CMatrix out = m;
    for (size_t j = 0; j < signs.size(); ++j) {
      if (signs[j] < 0) {
        out.middleRows(static_cast<Index>(j) * block_size, block_size) *= -1.0;
      }
    }
    return out;
  }

  static ScalingS identity(Index dim) {
    return ScalingS{dim, {1}};
  }
};

// Alternating scaling for the polynomial Hankel T of a degree-d matrix, block
// j carrying sign (-1)^{d-j}; S_poly * T is Hermitian (resp. skew) for the
// para-Hermitian (resp. para-skew) classes.
inline ScalingS build_S_poly(Index d, Index m) {
  if (d < 2) {
    throw DegenerateDegreeError("build_S_poly: defined for degree >= 2 only");
  }
  ScalingS s{m, {}};
  s.signs.reserve(static_cast<size_t>(d - 1));
  for (Index j = 1; j <= d - 1; ++j) {
    s.signs.push_back(((d - j) % 2 == 0) ? 1 : -1);
  }
  return s;
}

// Alternating scaling for the moment Hankel pair, block j carrying (-1)^j.
inline ScalingS build_S_rat(Index k, Index m) {
  if (k < 1) throw InputError("build_S_rat: k must be at least 1");
  ScalingS s{m, {}};
  s.signs.reserve(static_cast<size_t>(k));
  for (Index j = 1; j <= k; ++j) {
    s.signs.push_back((j % 2 == 0) ? 1 : -1);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Compression

// Unitary change of bases u, v with u^* M v block diagonal: a `rank`-sized
// core block and a complementary zero block, ordered per `layout`.  `core`
// is the actual product u_core^* M v_core.
struct CompressionResult {
  CMatrix u;
  CMatrix v;
  Index rank = 0;
  Layout layout = Layout::zeros_first;
  CMatrix core;
  double threshold = 0.0;
  // Diagnostics: the decision gap around the rank threshold plus the exact
  // residual on the discarded blocks.  Spectral values within a factor of 10
  // of the threshold mark the rank decision as borderline.
  double min_core_value = 0.0;
  double max_zero_value = 0.0;
  double off_core_residual = 0.0;
  bool borderline = false;
  bool rep_scaled_by_i = false;  // structured path picked i S M over S M

  Index u_core_offset() const {
    return layout == Layout::zeros_first ? u.cols() - rank : 0;
  }
  Index v_core_offset() const {
    return layout == Layout::zeros_first ? v.cols() - rank : 0;
  }
  CMatrix u_core() const { return u.middleCols(u_core_offset(), rank); }
  CMatrix v_core() const { return v.middleCols(v_core_offset(), rank); }
  CMatrix u_zeros() const {
    return layout == Layout::zeros_first ? u.leftCols(u.cols() - rank)
                                         : u.rightCols(u.cols() - rank);
  }
  CMatrix v_zeros() const {
    return layout == Layout::zeros_first ? v.leftCols(v.cols() - rank)
                                         : v.rightCols(v.cols() - rank);
  }
};

namespace detail {

inline void finish_compression(const CMatrix& m, CompressionResult& out) {
  out.core = out.u_core().adjoint() * m * out.v_core();
  const CMatrix full = out.u.adjoint() * m * out.v;
  CMatrix off = full;
  off.block(out.u_core_offset(), out.v_core_offset(), out.rank, out.rank)
      .setZero();
  out.off_core_residual = off.norm();
  const double lo = out.threshold / 10.0, hi = out.threshold * 10.0;
  const auto near = [&](double x) { return x >= lo && x <= hi; };
  out.borderline = (out.rank > 0 && near(out.min_core_value)) ||
                   (out.max_zero_value > 0.0 && near(out.max_zero_value));
}

}  // namespace detail

inline CompressionResult compress_unstructured(const CMatrix& m, Layout layout,
                                               RankTolerance tol = {}) {
  require_finite(m, "compress_unstructured");
  const SvdResult dec = svd(m);
  CompressionResult out;
  out.layout = layout;
  out.threshold = tol.resolve(dec.sigma_max(), m.rows(), m.cols());
  const Index nsv = static_cast<Index>(dec.singular_values.size());
  Index r = 0;
  for (double s : dec.singular_values) {
    if (s > out.threshold) ++r;
  }
  out.rank = r;
  out.min_core_value = r > 0 ? dec.singular_values[static_cast<size_t>(r - 1)]
                             : 0.0;
  out.max_zero_value =
      r < nsv ? dec.singular_values[static_cast<size_t>(r)] : 0.0;
  if (layout == Layout::core_first) {
    out.u = dec.u;
    out.v = dec.v;
  } else {
    // Null-side columns move to the front; the core keeps its internal order.
    out.u = CMatrix(m.rows(), m.rows());
    out.u << dec.u.rightCols(m.rows() - r), dec.u.leftCols(r);
    out.v = CMatrix(m.cols(), m.cols());
    out.v << dec.v.rightCols(m.cols() - r), dec.v.leftCols(r);
  }
  detail::finish_compression(m, out);
  return out;
}

// Structure-preserving compression of a square M with U = S V.  Requires
// S M or i S M to be Hermitian (which of the two holds is decided by the
// smaller symmetry defect); V then collects eigenvectors of that Hermitian
// representative, ordered by eigenvalue magnitude per `layout`.
inline CompressionResult compress_structured(const CMatrix& m,
                                             StructureTag tag,
                                             const ScalingS& s, Layout layout,
                                             RankTolerance tol = {}) {
  require_finite(m, "compress_structured");
  if (m.rows() != m.cols()) {
    throw ShapeError("compress_structured: matrix must be square");
  }
  if (s.dim() != m.rows()) {
    throw ShapeError("compress_structured: scaling dimension mismatch");
  }
  if (tag == StructureTag::none) {
    throw InputError("compress_structured: tag carries no symmetry");
  }
  const CMatrix sm = s.apply_left(m);
  const double scale = sm.norm();
  const double defect_direct = (sm - sm.adjoint()).norm();
  // i S M is Hermitian exactly when S M is skew-Hermitian.
  const double defect_rotated = (sm + sm.adjoint()).norm();
  CompressionResult out;
  out.layout = layout;
  CMatrix rep;
  if (defect_direct <= 1e-12 * scale) {
    rep = sm;
  } else if (defect_rotated <= 1e-12 * scale) {
    rep = Complex(0.0, 1.0) * sm;
    out.rep_scaled_by_i = true;
  } else {
    throw StructureError(
        "compress_structured: neither S M nor i S M is Hermitian",
        std::min(defect_direct, defect_rotated));
  }
  const HermitianEig eig = hermitian_eigendecomp(0.5 * (rep + rep.adjoint()));
  const Index p = m.rows();
  std::vector<Index> order(static_cast<size_t>(p));
  std::iota(order.begin(), order.end(), Index{0});
  const auto& lam = eig.lambdas;
  const bool ascending = (layout == Layout::zeros_first);
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    const double xa = std::abs(lam[static_cast<size_t>(a)]);
    const double xb = std::abs(lam[static_cast<size_t>(b)]);
    return ascending ? xa < xb : xa > xb;
  });
  double sigma_max = 0.0;
  for (double l : lam) sigma_max = std::max(sigma_max, std::abs(l));
  out.threshold = tol.resolve(sigma_max, p, p);
  Index r = 0;
  double min_core = 0.0, max_zero = 0.0;
  for (double l : lam) {
    const double x = std::abs(l);
    if (x > out.threshold) {
      ++r;
      min_core = (min_core == 0.0) ? x : std::min(min_core, x);
    } else {
      max_zero = std::max(max_zero, x);
    }
  }
  out.rank = r;
  out.min_core_value = min_core;
  out.max_zero_value = max_zero;
  CMatrix vperm(p, p);
  for (Index j = 0; j < p; ++j) {
    vperm.col(j) = eig.q.col(order[static_cast<size_t>(j)]);
  }
  out.v = vperm;
  out.u = s.apply_left(vperm);
  detail::finish_compression(m, out);
  return out;
}

// ---------------------------------------------------------------------------
// Order selection for moment realizations

struct ChooseK {
  Index k_used = 0;
  bool stabilized = false;
  Index rank_at_k = 0;
  std::vector<Index> ranks;  // ranks[j] = rank of the j-block Hankel, j >= 0
};

// Largest k (up to half the tail depth) whose Hankel rank agrees with the
// previous one; rank still growing at the boundary means the tail is too
// short to certify the order, which `stabilized` reports.
inline ChooseK choose_k(const LaurentTail& tail, RankTolerance tol = {}) {
  const Index cap = tail.half_depth();
  ChooseK out;
  out.ranks.assign(static_cast<size_t>(cap) + 1, 0);
  for (Index j = 1; j <= cap; ++j) {
    out.ranks[static_cast<size_t>(j)] = rank_of(build_H_pair(tail, j).first,
                                                tol);
  }
  Index best = 0;
  for (Index k = 1; k <= cap; ++k) {
    if (out.ranks[static_cast<size_t>(k)] ==
        out.ranks[static_cast<size_t>(k - 1)]) {
      best = k;
    }
  }
  out.stabilized = cap >= 1 && out.ranks[static_cast<size_t>(cap)] ==
                                   out.ranks[static_cast<size_t>(cap - 1)];
  out.k_used = (best > 0) ? best : cap;
  out.rank_at_k = out.ranks[static_cast<size_t>(out.k_used)];
  return out;
}

}  // namespace strongmin

#endif  // STRONGMIN_HANKEL_HPP
