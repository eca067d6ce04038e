// Copyright (c) the strongmin contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Diagnostics on degree-1 system matrices: transfer evaluation, randomized
// strong-minimality certificates, eigenvalues of regular pencils through
// determinant interpolation, local Smith structure through block Toeplitz
// ranks, and the index bookkeeping at infinity built on those pieces.

#ifndef STRONGMIN_ANALYZE_HPP
#define STRONGMIN_ANALYZE_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "strongmin/errors.hpp"
#include "strongmin/hankel.hpp"
#include "strongmin/linearize.hpp"
#include "strongmin/numkernel.hpp"
#include "strongmin/polyrat.hpp"
#include "strongmin/rng.hpp"

namespace strongmin {

// ---------------------------------------------------------------------------
// Transfer evaluation

// D(z) + C(z) A(z)^{-1} B(z); propagates a SingularityError when z is a pole.
inline CMatrix transfer_eval(const LinearSystemMatrix& l, Complex z) {
  if (l.state_dim() == 0) return l.d_at(z);
  return l.d_at(z) + l.c_at(z) * lin_solve(l.a_at(z), l.b_at(z));
}

// ---------------------------------------------------------------------------
// Pencil eigenvalues via determinant interpolation

namespace detail {

inline Complex pencil_det(const CMatrix& m0, const CMatrix& m1, Complex z) {
  const CMatrix m = m0 + z * m1;
  return Eigen::PartialPivLU<CMatrix>(m).determinant();
}

}  // namespace detail

// Finite eigenvalues of the regular square pencil L0 + z L1, with
// multiplicities: the determinant polynomial is recovered by interpolation
// on a scaled root-of-unity grid, its roots are clustered at relative radius
// 1e-6.  An identically singular pencil (determinant numerically zero at
// three random probes) is rejected.
inline std::vector<std::pair<Complex, int>> pencil_finite_eigenvalues(
    const CMatrix& l0, const CMatrix& l1, RankTolerance tol = {},
    std::uint64_t seed = 0x5eedULL) {
  if (l0.rows() != l0.cols() || l1.rows() != l0.rows() ||
      l1.cols() != l0.cols()) {
    throw ShapeError("pencil_finite_eigenvalues: pencil must be square");
  }
  const Index s = l0.rows();
  if (s == 0) return {};
  const double gamma = std::max(l0.cwiseAbs().maxCoeff(),
                                l1.cwiseAbs().maxCoeff());
  if (gamma == 0.0) {
    throw SingularPencilError("pencil_finite_eigenvalues: zero pencil");
  }
  const CMatrix m0 = l0 / gamma, m1 = l1 / gamma;
  const double n1 = m1.norm();
  const double rho = 1.0 + (n1 > 0.0 ? m0.norm() / n1 : 1.0);

  Rng rng(seed);
  bool regular_somewhere = false;
  for (int probe = 0; probe < 3 && !regular_somewhere; ++probe) {
    const Complex z = rng.circle_point(rho);
    regular_somewhere = rank_of(m0 + z * m1, tol) == s;
  }
  if (!regular_somewhere) {
    throw SingularPencilError(
        "pencil_finite_eigenvalues: pencil is singular at all probes");
  }

  // Interpolate det(M0 + z M1), a polynomial of degree at most s, on the
  // circle of radius rho; the inverse DFT gives the coefficients.
  const Index nodes = s + 1;
  std::vector<Complex> values(static_cast<size_t>(nodes));
  const double two_pi = 6.28318530717958647692;
  for (Index j = 0; j < nodes; ++j) {
    const double ang = two_pi * static_cast<double>(j) /
                       static_cast<double>(nodes);
    const Complex zj = rho * Complex(std::cos(ang), std::sin(ang));
    values[static_cast<size_t>(j)] = detail::pencil_det(m0, m1, zj);
  }
  std::vector<Complex> coeffs(static_cast<size_t>(nodes));
  for (Index t = 0; t < nodes; ++t) {
    Complex acc(0.0, 0.0);
    for (Index j = 0; j < nodes; ++j) {
      const double ang = -two_pi * static_cast<double>(j * t) /
                         static_cast<double>(nodes);
      acc += values[static_cast<size_t>(j)] *
             Complex(std::cos(ang), std::sin(ang));
    }
    acc /= static_cast<double>(nodes);
    coeffs[static_cast<size_t>(t)] = acc / std::pow(rho, static_cast<double>(t));
  }
  double cmax = 0.0;
  for (const Complex& c : coeffs) cmax = std::max(cmax, std::abs(c));
  if (cmax == 0.0) {
    throw SingularPencilError(
        "pencil_finite_eigenvalues: determinant vanished identically");
  }
  while (coeffs.size() > 1 && std::abs(coeffs.back()) <= 1e-10 * cmax) {
    coeffs.pop_back();
  }
  if (coeffs.size() == 1) return {};
  const std::vector<Complex> roots = poly_roots(coeffs);

  // Single-linkage clustering at relative radius 1e-6 merges the copies of a
  // multiple root that finite precision split apart.
  const size_t nr = roots.size();
  std::vector<size_t> parent(nr);
  for (size_t i = 0; i < nr; ++i) parent[i] = i;
  const auto find = [&](size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (size_t i = 0; i < nr; ++i) {
    for (size_t j = i + 1; j < nr; ++j) {
      const double lim =
          1e-6 * std::max({1.0, std::abs(roots[i]), std::abs(roots[j])});
      if (std::abs(roots[i] - roots[j]) <= lim) {
        parent[find(i)] = find(j);
      }
    }
  }
  std::vector<std::pair<Complex, int>> out;
  std::vector<size_t> order(nr);
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    const Complex& x = roots[a];
    const Complex& y = roots[b];
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  std::vector<char> done(nr, 0);
  for (size_t idx : order) {
    const size_t root = find(idx);
    if (done[root]) continue;
    done[root] = 1;
    Complex sum(0.0, 0.0);
    int count = 0;
    for (size_t j = 0; j < nr; ++j) {
      if (find(j) == root) {
        sum += roots[j];
        ++count;
      }
    }
    out.emplace_back(sum / static_cast<double>(count), count);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Local Smith structure at zero

namespace detail {

inline Index toeplitz_rank(const std::vector<CMatrix>& coeffs, Index k,
                           RankTolerance tol) {
  const Index m = coeffs.front().rows(), n = coeffs.front().cols();
  const Index deg = static_cast<Index>(coeffs.size()) - 1;
  CMatrix t = CMatrix::Zero(k * m, k * n);
  for (Index i = 0; i < k; ++i) {
    for (Index j = 0; j <= i; ++j) {
      if (i - j <= deg) {
        t.block(i * m, j * n, m, n) = coeffs[static_cast<size_t>(i - j)];
      }
    }
  }
  return rank_of(t, tol);
}

inline Index normal_rank_coeffs(const std::vector<CMatrix>& coeffs,
                                RankTolerance tol, std::uint64_t seed) {
  Rng rng(seed);
  Index best = 0;
  for (int probe = 0; probe < 3; ++probe) {
    const Complex z = rng.circle_point(0.5 + 0.5 * (probe + 1));
    CMatrix m = CMatrix::Zero(coeffs.front().rows(), coeffs.front().cols());
    Complex zp(1.0, 0.0);
    for (const CMatrix& c : coeffs) {
      m += zp * c;
      zp *= z;
    }
    best = std::max(best, rank_of(m, tol));
  }
  return best;
}

}  // namespace detail

// Positive partial multiplicities at z = 0 of the matrix polynomial with the
// given Taylor coefficients, through the rank growth of the block
// lower-triangular Toeplitz family: with rho_k the rank of the k-block
// Toeplitz matrix and s_k = rho_k - rho_{k-1}, exactly r - s_k partial
// multiplicities are >= k (r the normal rank).  Stops once s_k reaches r;
// running past dimension x degree + 1 without converging signals that the
// tolerance cannot separate the ranks.
inline StructuralIndices partial_mults_at_zero(
    const std::vector<CMatrix>& coeffs, RankTolerance tol = {},
    std::uint64_t seed = 0x5eedULL) {
  if (coeffs.empty()) {
    throw InputError("partial_mults_at_zero: no coefficients");
  }
  const Index m = coeffs.front().rows(), n = coeffs.front().cols();
  for (const CMatrix& c : coeffs) {
    if (c.rows() != m || c.cols() != n) {
      throw ShapeError("partial_mults_at_zero: coefficient shapes disagree");
    }
  }
  StructuralIndices out;
  if (m == 0 || n == 0) return out;
  const Index r = detail::normal_rank_coeffs(coeffs, tol, seed);
  out.normal_rank = r;
  if (r == 0) return out;
  const Index deg = static_cast<Index>(coeffs.size()) - 1;
  const Index cap = std::max(m, n) * std::max(deg, Index{1}) + 1;
  std::vector<Index> counts;  // counts[k-1] = #multiplicities >= k
  Index prev_rank = 0;
  for (Index k = 1; k <= cap + 1; ++k) {
    const Index rho = detail::toeplitz_rank(coeffs, k, tol);
    const Index s_k = rho - prev_rank;
    prev_rank = rho;
    if (s_k > r || s_k < 0) {
      throw InternalError(
          "partial_mults_at_zero: rank growth outside [0, normal rank]");
    }
    counts.push_back(r - s_k);
    if (s_k == r) break;
    if (k == cap + 1) {
      throw InternalError(
          "partial_mults_at_zero: multiplicities did not converge; "
          "the rank tolerance does not separate the spectrum");
    }
  }
  // counts is nonincreasing and ends in 0; expand it into the multiset.
  for (size_t k = 0; k + 1 <= counts.size(); ++k) {
    const Index at_least_k = counts[k];
    const Index at_least_k1 = (k + 1 < counts.size()) ? counts[k + 1] : 0;
    if (at_least_k1 > at_least_k) {
      throw InternalError(
          "partial_mults_at_zero: Toeplitz rank growth is not monotone");
    }
    for (Index c = 0; c < at_least_k - at_least_k1; ++c) {
      out.indices.push_back(static_cast<int>(k) + 1);
    }
  }
  std::sort(out.indices.begin(), out.indices.end());
  return out;
}

inline StructuralIndices partial_mults_at_zero(const PolyMatrix& p,
                                               RankTolerance tol = {},
                                               std::uint64_t seed = 0x5eedULL) {
  return partial_mults_at_zero(p.coeffs, tol, seed);
}

inline StructuralIndices partial_mults_at_zero(const CMatrix& l0,
                                               const CMatrix& l1,
                                               RankTolerance tol = {},
                                               std::uint64_t seed = 0x5eedULL) {
  return partial_mults_at_zero(std::vector<CMatrix>{l0, l1}, tol, seed);
}

// ---------------------------------------------------------------------------
// Strong minimality certificate

struct MinimalityWitness {
  Complex point;      // finite test point (ignored for the infinity checks)
  Index rank_found = 0;
  Index rank_needed = 0;
  bool at_infinity = false;
};

// Randomized certificate of strong minimality.  The margins are the
// smallest ratio (decisive singular value) / (rank threshold) seen across
// all tested points; a sound pass keeps them far above 1.
struct MinimalityCertificate {
  bool controllable_finite = false;
  bool controllable_infinite = false;
  bool observable_finite = false;
  bool observable_infinite = false;
  double margin_controllable = 0.0;
  double margin_observable = 0.0;
  std::vector<MinimalityWitness> failures;

  bool passed() const {
    return controllable_finite && controllable_infinite &&
           observable_finite && observable_infinite;
  }
};

namespace detail {

struct PencilRankCheck {
  bool full_everywhere = true;
  double margin = std::numeric_limits<double>::infinity();
  std::vector<MinimalityWitness> failures;
};

// Checks that the rectangular pencil M0 + z M1 has rank `need` for every
// finite z.  Candidate rank drops are harvested from the eigenvalues of two
// independent random square compressions (a genuine drop survives any such
// compression; a random one adds only spurious candidates, which the direct
// retest below discards), then the rank is retested at the candidates and at
// 20 random probes.
inline PencilRankCheck pencil_full_rank_everywhere(const CMatrix& m0,
                                                   const CMatrix& m1,
                                                   Index need,
                                                   RankTolerance tol,
                                                   Rng& rng) {
  PencilRankCheck out;
  if (need == 0) return out;
  const double n1 = m1.norm();
  const double rho = 1.0 + (n1 > 0.0 ? m0.norm() / n1 : 1.0);
  const bool wide = m0.cols() >= m0.rows();

  std::vector<Complex> test_points;
  for (int draw = 0; draw < 2; ++draw) {
    Rng sub(rng.next_seed());
    // Shrinks the rectangular pencil to a square one; F is cols x rows, used
    // on whichever side squares the pencil.
    const CMatrix f = sub.gaussian_matrix(m0.cols(), m0.rows());
    try {
      const auto eigs = wide ? pencil_finite_eigenvalues(
                                   CMatrix(m0 * f), CMatrix(m1 * f), tol,
                                   sub.next_seed())
                             : pencil_finite_eigenvalues(
                                   CMatrix(f * m0), CMatrix(f * m1), tol,
                                   sub.next_seed());
      for (const auto& [z, mult] : eigs) test_points.push_back(z);
    } catch (const SingularPencilError&) {
      // The compression degenerated; the other draw and the probes cover it.
    }
  }
  for (int probe = 0; probe < 20; ++probe) {
    test_points.push_back(rng.circle_point(rho * (0.5 + 0.1 * probe)));
  }

  for (const Complex& z : test_points) {
    const CMatrix g = m0 + z * m1;
    const SvdResult dec = svd(g);
    const double thresh = tol.resolve(dec.sigma_max(), g.rows(), g.cols());
    const Index rank =
        rank_from_singular_values(dec.singular_values, tol, g.rows(),
                                  g.cols());
    const double decisive =
        dec.singular_values.size() >= static_cast<size_t>(need)
            ? dec.singular_values[static_cast<size_t>(need - 1)]
            : 0.0;
    if (thresh > 0.0) {
      out.margin = std::min(out.margin, decisive / thresh);
    }
    if (rank < need) {
      out.full_everywhere = false;
      out.failures.push_back(MinimalityWitness{z, rank, need, false});
    }
  }
  return out;
}

}  // namespace detail

// Certifies that [A(z), -B(z)] has full row rank and [A(z); C(z)] full
// column rank for all z including infinity (where the degree-1 coefficients
// take over).  Randomized: candidate bad points come from two independent
// square compressions of each rectangular pencil; detection fails only if
// both random compressions hide the same rank drop, which has probability
// zero in exact arithmetic.
inline MinimalityCertificate check_strong_minimality(
    const LinearSystemMatrix& l, RankTolerance tol = {},
    std::uint64_t seed = 0x5eedULL) {
  MinimalityCertificate cert;
  Rng rng(seed);
  const Index pr = l.state_rows(), pc = l.state_cols();
  const Index m = l.outputs(), n = l.inputs();
  const double inf = std::numeric_limits<double>::infinity();

  // Controllability: rows [A, -B].
  CMatrix g0(pr, pc + n), g1(pr, pc + n);
  g0.leftCols(pc) = -l.a0;
  g0.rightCols(n) = l.b0;
  g1.leftCols(pc) = l.a1;
  g1.rightCols(n) = -l.b1;
  // Observability: columns [A; C].
  CMatrix h0(pr + m, pc), h1(pr + m, pc);
  h0.topRows(pr) = -l.a0;
  h0.bottomRows(m) = -l.c0;
  h1.topRows(pr) = l.a1;
  h1.bottomRows(m) = l.c1;

  if (pr == 0) {
    cert.controllable_finite = cert.controllable_infinite = true;
    cert.margin_controllable = inf;
  } else {
    const SvdResult dec = svd(g1);
    const Index rank_inf =
        rank_from_singular_values(dec.singular_values, tol, g1.rows(),
                                  g1.cols());
    const double thresh = tol.resolve(dec.sigma_max(), g1.rows(), g1.cols());
    const double decisive =
        dec.singular_values.size() >= static_cast<size_t>(pr)
            ? dec.singular_values[static_cast<size_t>(pr - 1)]
            : 0.0;
    cert.controllable_infinite = rank_inf == pr;
    cert.margin_controllable = thresh > 0.0 ? decisive / thresh : inf;
    if (!cert.controllable_infinite) {
      cert.failures.push_back(
          MinimalityWitness{Complex(0, 0), rank_inf, pr, true});
    }
    detail::PencilRankCheck fin =
        detail::pencil_full_rank_everywhere(g0, g1, pr, tol, rng);
    cert.controllable_finite = fin.full_everywhere;
    cert.margin_controllable = std::min(cert.margin_controllable, fin.margin);
    for (auto& w : fin.failures) cert.failures.push_back(w);
  }

  if (pc == 0) {
    cert.observable_finite = cert.observable_infinite = true;
    cert.margin_observable = inf;
  } else {
    const SvdResult dec = svd(h1);
    const Index rank_inf =
        rank_from_singular_values(dec.singular_values, tol, h1.rows(),
                                  h1.cols());
    const double thresh = tol.resolve(dec.sigma_max(), h1.rows(), h1.cols());
    const double decisive =
        dec.singular_values.size() >= static_cast<size_t>(pc)
            ? dec.singular_values[static_cast<size_t>(pc - 1)]
            : 0.0;
    cert.observable_infinite = rank_inf == pc;
    cert.margin_observable = thresh > 0.0 ? decisive / thresh : inf;
    if (!cert.observable_infinite) {
      cert.failures.push_back(
          MinimalityWitness{Complex(0, 0), rank_inf, pc, true});
    }
    detail::PencilRankCheck fin =
        detail::pencil_full_rank_everywhere(h0, h1, pc, tol, rng);
    cert.observable_finite = fin.full_everywhere;
    cert.margin_observable = std::min(cert.margin_observable, fin.margin);
    for (auto& w : fin.failures) cert.failures.push_back(w);
  }
  return cert;
}

// ---------------------------------------------------------------------------
// Indices at infinity

// Structural indices at infinity of the transfer of a strongly minimal L
// with transfer normal rank r: partial multiplicities e of the reversed
// state pencil at zero give the polar part, partial multiplicities e~ of the
// reversed full pencil at zero give the zero part, and the list
// (-e_s, ..., -e_1, 0, ..., 0, e~_1, ..., e~_u) - 1 has length r.
inline std::vector<int> indices_at_infinity(
    const LinearSystemMatrix& l, Index transfer_normal_rank,
    RankTolerance tol = {}, std::uint64_t seed = 0x5eedULL,
    const MinimalityCertificate* cert = nullptr) {
  MinimalityCertificate own;
  if (cert == nullptr) {
    own = check_strong_minimality(l, tol, seed);
    cert = &own;
  }
  if (!cert->passed()) {
    throw PreconditionError(
        "indices_at_infinity: system matrix is not strongly minimal");
  }
  const auto [l0, l1] = l.plain_pair();
  // Reversal swaps the pencil coefficients.
  const StructuralIndices e =
      partial_mults_at_zero(CMatrix(l.a1), CMatrix(-l.a0), tol, seed);
  const StructuralIndices et = partial_mults_at_zero(l1, l0, tol, seed);
  const Index s = static_cast<Index>(e.indices.size());
  const Index u = static_cast<Index>(et.indices.size());
  const Index zeros = transfer_normal_rank - s - u;
  if (zeros < 0) {
    throw InternalError(
        "indices_at_infinity: more local multiplicities than the normal rank");
  }
  std::vector<int> d;
  d.reserve(static_cast<size_t>(transfer_normal_rank));
  for (auto it = e.indices.rbegin(); it != e.indices.rend(); ++it) {
    d.push_back(-*it - 1);
  }
  for (Index i = 0; i < zeros; ++i) d.push_back(-1);
  for (int v : et.indices) d.push_back(v - 1);
  return d;
}

// Eigenvalue structure at infinity of a degree-d polynomial from a strongly
// minimal linearization: the transfer indices shifted by d, zeros dropped.
inline StructuralIndices eig_structure_at_infinity_poly(
    const PolyMatrix& p, const LinearSystemMatrix& l, RankTolerance tol = {},
    std::uint64_t seed = 0x5eedULL) {
  const Index r = detail::normal_rank_coeffs(p.coeffs, tol, seed);
  const std::vector<int> d_list = indices_at_infinity(l, r, tol, seed);
  StructuralIndices out;
  out.normal_rank = r;
  const int d = static_cast<int>(p.degree());
  for (int di : d_list) {
    if (di + d > 0) out.indices.push_back(di + d);
  }
  std::sort(out.indices.begin(), out.indices.end());
  return out;
}

// Quadratic shortcut: with r2 the rank of P_2, the partial multiplicities at
// infinity are r - r2 - u ones followed by the reversed-pencil
// multiplicities shifted by one.
inline StructuralIndices quad_infinity(const PolyMatrix& p,
                                       const LinearSystemMatrix& l,
                                       RankTolerance tol = {},
                                       std::uint64_t seed = 0x5eedULL) {
  if (p.degree() != 2) {
    throw InputError("quad_infinity: defined for degree 2 exactly");
  }
  const Index r = detail::normal_rank_coeffs(p.coeffs, tol, seed);
  const Index r2 = rank_of(p.coeff(2), tol);
  const auto [l0, l1] = l.plain_pair();
  const StructuralIndices et = partial_mults_at_zero(l1, l0, tol, seed);
  const Index u = static_cast<Index>(et.indices.size());
  const Index ones = r - r2 - u;
  if (ones < 0) {
    throw InternalError("quad_infinity: inconsistent rank counts");
  }
  StructuralIndices out;
  out.normal_rank = r;
  for (Index i = 0; i < ones; ++i) out.indices.push_back(1);
  for (int v : et.indices) out.indices.push_back(v + 1);
  std::sort(out.indices.begin(), out.indices.end());
  return out;
}

// ---------------------------------------------------------------------------
// Eigenvector transport

enum class Side { right, left };

// Extracts the transfer-level eigenvector from a null vector of L(z0): the
// trailing input (right) or output (left) block.  The residual of the full
// vector against L(z0) is validated first.
inline CVector recover_eigenvector(const LinearSystemMatrix& l, Complex z0,
                                   Side side, const CVector& full) {
  const CMatrix lz = l.assemble(z0);
  const double scale = lz.norm() * full.norm();
  if (side == Side::right) {
    if (full.size() != lz.cols()) {
      throw ShapeError("recover_eigenvector: vector length mismatch");
    }
    if ((lz * full).norm() > 1e-8 * std::max(scale, 1e-300)) {
      throw InputError("recover_eigenvector: not a null vector of L(z0)");
    }
    return full.tail(l.inputs());
  }
  if (full.size() != lz.rows()) {
    throw ShapeError("recover_eigenvector: vector length mismatch");
  }
  if ((full.adjoint() * lz).norm() > 1e-8 * std::max(scale, 1e-300)) {
    throw InputError("recover_eigenvector: not a left null vector of L(z0)");
  }
  return full.tail(l.outputs());
}

// Inverse transport: lifts a null vector of the transfer at z0 to one of
// L(z0) by solving with the state block.
inline CVector lift_eigenvector(const LinearSystemMatrix& l, Complex z0,
                                Side side, const CVector& x) {
  if (side == Side::right) {
    if (x.size() != l.inputs()) {
      throw ShapeError("lift_eigenvector: vector length mismatch");
    }
    const CMatrix w = lin_solve(l.a_at(z0), CMatrix(l.b_at(z0) * x));
    CVector full(l.state_cols() + l.inputs());
    full.head(l.state_cols()) = w.col(0);
    full.tail(l.inputs()) = x;
    return full;
  }
  if (x.size() != l.outputs()) {
    throw ShapeError("lift_eigenvector: vector length mismatch");
  }
  const CMatrix w =
      lin_solve(CMatrix(l.a_at(z0).adjoint()),
                CMatrix(l.c_at(z0).adjoint() * x));
  CVector full(l.state_rows() + l.outputs());
  full.head(l.state_rows()) = -w.col(0);
  full.tail(l.outputs()) = x;
  return full;
}

// ---------------------------------------------------------------------------
// Degree audit

// McMillan-degree bookkeeping for a strongly minimal L: the rank of the
// degree-1 coefficient must equal the finite pole count (eigenvalues of the
// state pencil, with multiplicity) plus the polar degree at infinity.
struct DegreeAudit {
  Index rank_l1 = 0;
  Index finite_pole_count = 0;
  Index polar_degree_at_infinity = 0;
  std::vector<int> indices_at_inf;
  bool consistent = false;
  Index mcmillan_degree() const {
    return finite_pole_count + polar_degree_at_infinity;
  }
};

inline DegreeAudit degree_audit(const LinearSystemMatrix& l,
                                Index transfer_normal_rank,
                                RankTolerance tol = {},
                                std::uint64_t seed = 0x5eedULL) {
  DegreeAudit out;
  const auto [l0, l1] = l.plain_pair();
  out.rank_l1 = rank_of(l1, tol);
  out.indices_at_inf = indices_at_infinity(l, transfer_normal_rank, tol, seed);
  for (int d : out.indices_at_inf) {
    if (d < 0) out.polar_degree_at_infinity += -d;
  }
  if (l.state_dim() > 0) {
    const auto eigs =
        pencil_finite_eigenvalues(CMatrix(-l.a0), CMatrix(l.a1), tol, seed);
    for (const auto& [z, mult] : eigs) {
      out.finite_pole_count += mult;
    }
  }
  out.consistent = out.rank_l1 == out.mcmillan_degree();
  return out;
}

// ---------------------------------------------------------------------------
// Structural report

// Everything the analysis command prints: transfer normal rank, indices at
// infinity, finite eigenvalues of the full pencil when it is square and
// regular, and the degree audit.
struct StructuralReport {
  Index transfer_normal_rank = 0;
  std::vector<int> indices_at_inf;
  bool square_regular = false;
  std::vector<std::pair<Complex, int>> finite_eigenvalues;
  DegreeAudit audit;
};

inline StructuralReport build_structural_report(const LinearSystemMatrix& l,
                                                RankTolerance tol = {},
                                                std::uint64_t seed =
                                                    0x5eedULL) {
  StructuralReport rep;
  Rng rng(seed);
  Index r = 0;
  for (int probe = 0; probe < 3; ++probe) {
    const Complex z = rng.circle_point(1.0 + 0.5 * probe);
    try {
      r = std::max(r, rank_of(transfer_eval(l, z), tol));
    } catch (const SingularityError&) {
      // Landed on a pole; the other probes decide.
    }
  }
  rep.transfer_normal_rank = r;
  rep.indices_at_inf = indices_at_infinity(l, r, tol, seed);
  rep.audit = degree_audit(l, r, tol, seed);
  const auto [l0, l1] = l.plain_pair();
  if (l0.rows() == l0.cols()) {
    try {
      rep.finite_eigenvalues = pencil_finite_eigenvalues(l0, l1, tol, seed);
      rep.square_regular = true;
    } catch (const SingularPencilError&) {
      rep.square_regular = false;
    }
  }
  return rep;
}

}  // namespace strongmin

#endif  // STRONGMIN_ANALYZE_HPP
