// Copyright (c) the strongmin contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Dense complex kernels used by every other header: SVD-based rank decisions,
// Hermitian eigendecomposition, linear solves, and scalar polynomial roots.
// Everything is desk scale (dimensions in the tens), so accuracy wins over
// asymptotics throughout: Jacobi SVD, full pivoting, companion matrices.

#ifndef STRONGMIN_NUMKERNEL_HPP
#define STRONGMIN_NUMKERNEL_HPP

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "strongmin/errors.hpp"

namespace strongmin {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Index = Eigen::Index;

inline constexpr double kEps = std::numeric_limits<double>::epsilon();

inline bool all_finite(const CMatrix& a) {
  return a.array().isFinite().all();
}

// Exact entrywise test; norm() would underflow on subnormal-scale entries.
inline bool exactly_zero(const CMatrix& a) {
  return (a.array() == Complex(0.0, 0.0)).all();
}

inline void require_finite(const CMatrix& a, const char* what) {
  if (!all_finite(a)) {
    throw InputError(std::string(what) + ": non-finite entries");
  }
}

// Rank decision rule shared by every rank-revealing routine.  In relative
// mode `value` scales the conventional threshold max(m,n)*eps*sigma_1; in
// absolute mode `value` is the threshold itself.  Singular values strictly
// above the resolved threshold count toward the rank.
struct RankTolerance {
  enum class Mode { relative, absolute };
  Mode mode = Mode::relative;
  double value = 1.0;

  static RankTolerance relative(double v = 1.0) {
    return RankTolerance{Mode::relative, v};
  }
  static RankTolerance absolute(double v) {
    return RankTolerance{Mode::absolute, v};
  }

  double resolve(double sigma_max, Index rows, Index cols) const {
    if (mode == Mode::absolute) return value;
    return value * static_cast<double>(std::max(rows, cols)) * kEps * sigma_max;
  }
};

// Full SVD, A = u * diag(singular_values) * v^*.  `u` is rows x rows, `v` is
// cols x cols, singular values nonincreasing.
struct SvdResult {
  CMatrix u;
  std::vector<double> singular_values;
  CMatrix v;

  double sigma_max() const {
    return singular_values.empty() ? 0.0 : singular_values.front();
  }
};

inline SvdResult svd(const CMatrix& a) {
  require_finite(a, "svd");
  SvdResult out;
  if (a.rows() == 0 || a.cols() == 0) {
    out.u = CMatrix::Identity(a.rows(), a.rows());
    out.v = CMatrix::Identity(a.cols(), a.cols());
    return out;
  }
  Eigen::JacobiSVD<CMatrix> dec(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  out.u = dec.matrixU();
  out.v = dec.matrixV();
  const auto& s = dec.singularValues();
  out.singular_values.assign(s.data(), s.data() + s.size());
  return out;
}

inline Index rank_from_singular_values(const std::vector<double>& s,
                                       RankTolerance tol, Index rows,
                                       Index cols) {
  if (s.empty()) return 0;
  const double thresh = tol.resolve(s.front(), rows, cols);
  Index r = 0;
  for (double sigma : s) {
    if (sigma > thresh) ++r;
  }
  return r;
}

inline Index rank_of(const CMatrix& a, RankTolerance tol = {}) {
  if (a.rows() == 0 || a.cols() == 0) return 0;
  const SvdResult dec = svd(a);
  return rank_from_singular_values(dec.singular_values, tol, a.rows(),
                                   a.cols());
}

// Eigendecomposition of a Hermitian matrix, A = q * diag(lambdas) * q^*,
// eigenvalues ascending.  The input must be Hermitian up to a relative
// defect of 1e-12; the decomposition itself runs on (A + A^*)/2.
struct HermitianEig {
  CMatrix q;
  std::vector<double> lambdas;
};

inline HermitianEig hermitian_eigendecomp(const CMatrix& a) {
  require_finite(a, "hermitian_eigendecomp");
  if (a.rows() != a.cols()) {
    throw ShapeError("hermitian_eigendecomp: matrix must be square");
  }
  const double scale = a.norm();
  const double defect = (a - a.adjoint()).norm();
  if (defect > 1e-12 * scale) {
    throw StructureError("hermitian_eigendecomp: matrix is not Hermitian",
                         defect);
  }
  HermitianEig out;
  if (a.rows() == 0) {
    out.q = CMatrix(0, 0);
    return out;
  }
  const CMatrix sym = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> dec(sym);
  if (dec.info() != Eigen::Success) {
    throw InternalError("hermitian_eigendecomp: eigensolver did not converge");
  }
  out.q = dec.eigenvectors();
  const auto& ev = dec.eigenvalues();
  out.lambdas.assign(ev.data(), ev.data() + ev.size());
  return out;
}

// Solve A X = B for square A via the SVD.  Throws SingularityError carrying
// the smallest singular value when A is numerically rank deficient.
inline CMatrix lin_solve(const CMatrix& a, const CMatrix& b) {
  require_finite(a, "lin_solve");
  require_finite(b, "lin_solve");
  if (a.rows() != a.cols()) {
    throw ShapeError("lin_solve: coefficient matrix must be square");
  }
  if (a.rows() != b.rows()) {
    throw ShapeError("lin_solve: right-hand side has mismatched row count");
  }
  if (a.rows() == 0) return CMatrix(0, b.cols());
  const SvdResult dec = svd(a);
  const double sigma_min = dec.singular_values.back();
  const double thresh =
      RankTolerance{}.resolve(dec.sigma_max(), a.rows(), a.cols());
  if (sigma_min <= thresh) {
    throw SingularityError("lin_solve: numerically singular matrix",
                           sigma_min);
  }
  CVector inv_sigma(a.rows());
  for (Index i = 0; i < a.rows(); ++i) {
    inv_sigma(i) = Complex(1.0 / dec.singular_values[static_cast<size_t>(i)],
                           0.0);
  }
  return dec.v * inv_sigma.asDiagonal() * (dec.u.adjoint() * b);
}

// Roots of c[0] + c[1] z + ... + c[n] z^n via the companion matrix of the
// monic normalization.  Trailing coefficients at or below 1e-12 of the
// largest magnitude are trimmed first; the zero polynomial is rejected.
inline std::vector<Complex> poly_roots(const std::vector<Complex>& coeffs) {
  double cmax = 0.0;
  for (const Complex& c : coeffs) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw InputError("poly_roots: non-finite coefficient");
    }
    cmax = std::max(cmax, std::abs(c));
  }
  if (coeffs.empty() || cmax == 0.0) {
    throw DegenerateInputError("poly_roots: zero polynomial");
  }
  size_t deg = coeffs.size() - 1;
  while (deg > 0 && std::abs(coeffs[deg]) <= 1e-12 * cmax) --deg;
  if (deg == 0) {
    if (std::abs(coeffs[0]) <= 1e-12 * cmax) {
      throw DegenerateInputError("poly_roots: zero polynomial after trimming");
    }
    return {};
  }
  const Index n = static_cast<Index>(deg);
  CMatrix companion = CMatrix::Zero(n, n);
  for (Index i = 0; i + 1 < n; ++i) companion(i + 1, i) = Complex(1.0, 0.0);
  for (Index i = 0; i < n; ++i) {
    companion(i, n - 1) = -coeffs[static_cast<size_t>(i)] / coeffs[deg];
  }
  Eigen::ComplexEigenSolver<CMatrix> dec(companion, /*computeEigenvectors=*/false);
  if (dec.info() != Eigen::Success) {
    throw InternalError("poly_roots: eigensolver did not converge");
  }
  const auto& ev = dec.eigenvalues();
  return std::vector<Complex>(ev.data(), ev.data() + ev.size());
}

// Horner evaluation of the same ascending coefficient convention.
inline Complex poly_eval(const std::vector<Complex>& coeffs, Complex z) {
  Complex acc(0.0, 0.0);
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    acc = acc * z + *it;
  }
  return acc;
}

}  // namespace strongmin

#endif  // STRONGMIN_NUMKERNEL_HPP
