#pragma once

// Dense linear-algebra substrate. Everything in the library is expressed with
// these primitives; each carries an explicit tolerance contract.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <type_traits>
#include <vector>

#include "ffk/error.hpp"

namespace ffk {

template <typename T>
struct is_complex : std::false_type {};
template <typename T>
struct is_complex<std::complex<T>> : std::true_type {};
template <typename T>
inline constexpr bool is_complex_v = is_complex<T>::value;

/// The two supported fields. Each analysis session is fixed to one of them.
template <typename Scalar>
concept FieldScalar = std::is_same_v<Scalar, double> || std::is_same_v<Scalar, std::complex<double>>;

using Complex = std::complex<double>;

template <FieldScalar Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <FieldScalar Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
using RealVec = Eigen::VectorXd;

struct Tolerance {
  double rank_rel = 1e-10;   ///< singular values below rank_rel * sigma_max count as zero
  double eig_rel = 1e-9;     ///< relative eigenvalue equality
  double recon_abs = 1e-8;   ///< absolute reconstruction residual

  bool valid() const {
    auto ok = [](double v) { return v > 0.0 && v < 1.0; };
    return ok(rank_rel) && ok(eig_rel) && ok(recon_abs);
  }
};

struct EigenRange {
  double min = 0.0;
  double max = 0.0;
};

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(std::abs(m(i, j)))) return false;
  return true;
}

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m) {
  if (!all_finite(m)) throw Error(ErrorCode::NonFiniteEntries, "matrix contains NaN or Inf");
}

/// (M + M*) / 2
template <FieldScalar Scalar>
Mat<Scalar> symmetrize(const Mat<Scalar>& m) {
  if (m.rows() != m.cols())
    throw Error(ErrorCode::NotSquare, "expected a square matrix, got " + std::to_string(m.rows()) + "x" +
                                          std::to_string(m.cols()));
  return (m + m.adjoint()) * 0.5;
}

/// Singular values, descending.
template <FieldScalar Scalar>
RealVec singular_values(const Mat<Scalar>& m) {
  require_finite(m);
  if (m.size() == 0) return RealVec();
  Eigen::BDCSVD<Mat<Scalar>> svd(m);
  return svd.singularValues();
}

/// Number of singular values above tol.rank_rel * sigma_max. Zero for the zero matrix.
template <FieldScalar Scalar>
std::size_t numerical_rank(const Mat<Scalar>& m, const Tolerance& tol = {}) {
  const RealVec s = singular_values(m);
  if (s.size() == 0 || s(0) == 0.0) return 0;
  const double cutoff = tol.rank_rel * s(0);
  return static_cast<std::size_t>((s.array() > cutoff).count());
}

template <FieldScalar Scalar>
std::size_t kernel_dimension(const Mat<Scalar>& m, const Tolerance& tol = {}) {
  return static_cast<std::size_t>(m.cols()) - numerical_rank(m, tol);
}

/// Orthonormal basis for the column span of `vectors`. The number of returned
/// columns is the numerical rank. Columns are taken from a column-pivoted
/// Householder QR and phase-normalized so that the triangular factor has a
/// nonnegative real diagonal; an already orthonormal input comes back as is.
template <FieldScalar Scalar>
Mat<Scalar> orthonormalize(const Mat<Scalar>& vectors, const Tolerance& tol = {}) {
  if (vectors.cols() < 1 || vectors.rows() < 1)
    throw Error(ErrorCode::AllColumnsNumericallyZero, "no columns to orthonormalize");
  const std::size_t r = numerical_rank(vectors, tol);
  if (r == 0) throw Error(ErrorCode::AllColumnsNumericallyZero, "all columns are numerically zero");

  Eigen::ColPivHouseholderQR<Mat<Scalar>> qr(vectors);
  const auto n = vectors.rows();
  const auto rank = static_cast<Eigen::Index>(r);
  Mat<Scalar> q = qr.householderQ() * Mat<Scalar>::Identity(n, rank);
  const Mat<Scalar> upper = qr.matrixR().topLeftCorner(rank, rank).template triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < rank; ++k) {
    const Scalar d = upper(k, k);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(k) *= d / mag;
  }
  return q;
}

template <FieldScalar Scalar>
RealVec hermitian_eigenvalues(const Mat<Scalar>& m) {
  require_finite(m);
  const Mat<Scalar> h = symmetrize(m);
  Eigen::SelfAdjointEigenSolver<Mat<Scalar>> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

/// Smallest and largest eigenvalue of (M + M*)/2.
template <FieldScalar Scalar>
EigenRange hermitian_eigenrange(const Mat<Scalar>& m) {
  const RealVec ev = hermitian_eigenvalues(m);
  return {ev.minCoeff(), ev.maxCoeff()};
}

/// Solves M X = rhs for Hermitian positive definite M.
template <FieldScalar Scalar>
Mat<Scalar> solve_hermitian_positive(const Mat<Scalar>& m, const Mat<Scalar>& rhs, const Tolerance& tol = {}) {
  if (m.rows() != rhs.rows())
    throw Error(ErrorCode::DimensionMismatch, "right-hand side has " + std::to_string(rhs.rows()) +
                                                  " rows, operator has " + std::to_string(m.rows()));
  const Mat<Scalar> h = symmetrize(m);
  require_finite(h);
  require_finite(rhs);
  const EigenRange range = hermitian_eigenrange(h);
  if (!(range.min > tol.rank_rel * range.max) || range.max <= 0.0)
    throw Error(ErrorCode::NotPositiveDefinite, "smallest eigenvalue " + std::to_string(range.min) +
                                                    " is not positive relative to " + std::to_string(range.max));
  Eigen::LLT<Mat<Scalar>> llt(h);
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::NotPositiveDefinite, "Cholesky factorization failed");
  Mat<Scalar> x = llt.solve(rhs);
  // One step of iterative refinement.
  x += llt.solve(rhs - h * x);
  return x;
}

/// k(M) = ||M|| ||M^-1|| for square invertible M, via singular values.
template <FieldScalar Scalar>
double condition_number(const Mat<Scalar>& m, const Tolerance& tol = {}) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::NotSquare, "condition number needs a square matrix");
  const RealVec s = singular_values(m);
  const double smin = s(s.size() - 1);
  if (!(smin > tol.rank_rel * s(0))) throw Error(ErrorCode::SingularOperator, "operator is numerically singular");
  return s(0) / smin;
}

/// Principal angles between span(a) and span(b), both with orthonormal
/// columns, in ascending order (min(dim a, dim b) of them). Small angles are
/// taken from sines and large ones from cosines so that neither end loses
/// precision.
template <FieldScalar Scalar>
std::vector<double> principal_angles(const Mat<Scalar>& a, const Mat<Scalar>& b) {
  if (a.rows() != b.rows()) throw Error(ErrorCode::DimensionMismatch, "subspaces live in different spaces");
  const Mat<Scalar>& big = a.cols() >= b.cols() ? a : b;
  const Mat<Scalar>& small = a.cols() >= b.cols() ? b : a;
  const auto k = small.cols();

  const Mat<Scalar> cross = big.adjoint() * small;
  RealVec cosines = singular_values(cross);  // descending
  const Mat<Scalar> residual = small - big * cross;
  RealVec sines = singular_values(residual);  // descending
  std::vector<double> angles(static_cast<std::size_t>(k));
  for (Eigen::Index i = 0; i < k; ++i) {
    const double c = std::min(1.0, cosines(i));
    const double s = std::min(1.0, sines(k - 1 - i));
    angles[static_cast<std::size_t>(i)] = c * c >= 0.5 ? std::asin(s) : std::acos(c);
  }
  std::sort(angles.begin(), angles.end());
  return angles;
}

/// Same subspace iff equal dimension and every principal angle <= max_angle.
template <FieldScalar Scalar>
bool same_span(const Mat<Scalar>& a, const Mat<Scalar>& b, double max_angle = 1e-8) {
  if (a.cols() != b.cols()) return false;
  const auto angles = principal_angles(a, b);
  return angles.empty() || angles.back() <= max_angle;
}

template <FieldScalar Scalar>
void require_unit(const Vec<Scalar>& x, double tol = 1e-10) {
  require_finite(x);
  if (std::abs(x.norm() - 1.0) > tol)
    throw Error(ErrorCode::NotUnitVector, "vector has norm " + std::to_string(x.norm()));
}

/// Largest absolute entry of a - b.
template <FieldScalar Scalar>
double max_abs_diff(const Mat<Scalar>& a, const Mat<Scalar>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw Error(ErrorCode::DimensionMismatch, "shape mismatch");
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace ffk
