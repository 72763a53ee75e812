#pragma once

// Classical (vector) frames in H^n: frame operator, redundancy function,
// canonical and alternate duals.

#include <optional>
#include <utility>

#include "ffk/bounds.hpp"
#include "ffk/numerics.hpp"

namespace ffk {

/// A finite list of nonzero vectors stored as the columns of an n x N matrix.
/// `frame()` additionally requires the vectors to span H^n; `sequence()`
/// only requires a frame for the span (used for local frames of a subspace).
template <FieldScalar Scalar>
class VectorFrame {
 public:
  static VectorFrame frame(Mat<Scalar> vectors, const Tolerance& tol = {}) {
    VectorFrame f(std::move(vectors), tol);
    if (!f.spans_ambient_)
      throw Error(ErrorCode::NotAFrame, "vectors span a " + std::to_string(f.rank_) + "-dimensional subspace of H^" +
                                            std::to_string(f.ambient_dim()));
    return f;
  }

  static VectorFrame sequence(Mat<Scalar> vectors, const Tolerance& tol = {}) {
    return VectorFrame(std::move(vectors), tol);
  }

  Eigen::Index ambient_dim() const { return vectors_.rows(); }
  Eigen::Index size() const { return vectors_.cols(); }
  const Mat<Scalar>& vectors() const { return vectors_; }
  auto vector(Eigen::Index i) const { return vectors_.col(i); }
  bool spans_ambient() const { return spans_ambient_; }
  std::size_t rank() const { return rank_; }

  /// Columns divided by their norms.
  Mat<Scalar> normalized_vectors() const {
    Mat<Scalar> u = vectors_;
    for (Eigen::Index i = 0; i < u.cols(); ++i) u.col(i) /= u.col(i).norm();
    return u;
  }

 private:
  VectorFrame(Mat<Scalar> vectors, const Tolerance& tol) : vectors_(std::move(vectors)) {
    if (vectors_.rows() < 1 || vectors_.cols() < 1)
      throw Error(ErrorCode::DimensionMismatch, "a frame needs at least one vector in a nonzero space");
    require_finite(vectors_);
    const double largest = vectors_.colwise().norm().maxCoeff();
    for (Eigen::Index i = 0; i < vectors_.cols(); ++i) {
      const double norm = vectors_.col(i).norm();
      if (!(norm > 0.0) || norm <= tol.rank_rel * largest)
        throw Error(ErrorCode::ZeroVector, "frame vector " + std::to_string(i) + " is numerically zero",
                    static_cast<std::size_t>(i));
    }
    rank_ = numerical_rank(vectors_, tol);
    spans_ambient_ = rank_ == static_cast<std::size_t>(vectors_.rows());
  }

  Mat<Scalar> vectors_;
  std::size_t rank_ = 0;
  bool spans_ambient_ = false;
};

template <FieldScalar Scalar>
void require_spanning(const VectorFrame<Scalar>& frame) {
  if (!frame.spans_ambient()) throw Error(ErrorCode::NotAFrame, "vectors do not span the ambient space");
}

/// S = sum_i phi_i phi_i^*
template <FieldScalar Scalar>
Mat<Scalar> frame_operator(const VectorFrame<Scalar>& frame) {
  require_spanning(frame);
  return frame.vectors() * frame.vectors().adjoint();
}

/// sum_i phi_i phi_i^* / ||phi_i||^2, whose Rayleigh quotient is the redundancy function.
template <FieldScalar Scalar>
Mat<Scalar> normalized_frame_operator(const VectorFrame<Scalar>& frame) {
  const Mat<Scalar> u = frame.normalized_vectors();
  return u * u.adjoint();
}

/// R(x) = sum_i |<x, phi_i>|^2 / ||phi_i||^2 for a unit vector x.
template <FieldScalar Scalar>
double redundancy_function(const VectorFrame<Scalar>& frame, const Vec<Scalar>& x) {
  if (x.size() != frame.ambient_dim()) throw Error(ErrorCode::DimensionMismatch, "x has the wrong dimension");
  require_unit(x);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < frame.size(); ++i) {
    const auto phi = frame.vector(i);
    sum += std::norm(phi.dot(x)) / phi.squaredNorm();
  }
  return sum;
}

template <FieldScalar Scalar>
RedundancyRange vector_redundancy_range(const VectorFrame<Scalar>& frame) {
  require_spanning(frame);
  const EigenRange r = hermitian_eigenrange(normalized_frame_operator(frame));
  return {r.min, r.max};
}

template <FieldScalar Scalar>
FrameBounds vector_frame_bounds(const VectorFrame<Scalar>& frame) {
  const EigenRange r = hermitian_eigenrange(frame_operator(frame));
  return FrameBounds::checked(r.min, r.max, ErrorCode::NotAFrame);
}

/// All norms within eig_rel relative spread.
template <FieldScalar Scalar>
bool equal_norm(const VectorFrame<Scalar>& frame, const Tolerance& tol = {}) {
  const RealVec norms = frame.vectors().colwise().norm().transpose();
  return norms.maxCoeff() - norms.minCoeff() <= tol.eig_rel * norms.maxCoeff();
}

/// {S^-1 phi_i}
template <FieldScalar Scalar>
VectorFrame<Scalar> canonical_dual(const VectorFrame<Scalar>& frame, const Tolerance& tol = {}) {
  return VectorFrame<Scalar>::frame(solve_hermitian_positive(frame_operator(frame), frame.vectors(), tol), tol);
}

/// psi_i = S^-1 phi_i + eta_i - sum_k <S^-1 phi_i, phi_k> eta_k. Every dual
/// of the frame arises this way for some eta (n x N, one column per vector).
template <FieldScalar Scalar>
VectorFrame<Scalar> alternate_dual(const VectorFrame<Scalar>& frame, const Mat<Scalar>& eta,
                                   const Tolerance& tol = {}) {
  if (eta.cols() != frame.size())
    throw Error(ErrorCode::WrongEtaCount, "expected " + std::to_string(frame.size()) + " eta vectors, got " +
                                              std::to_string(eta.cols()));
  if (eta.rows() != frame.ambient_dim()) throw Error(ErrorCode::DimensionMismatch, "eta vectors have wrong length");
  require_finite(eta);
  const Mat<Scalar> canonical = solve_hermitian_positive(frame_operator(frame), frame.vectors(), tol);
  // gram(k, i) = <S^-1 phi_i, phi_k>
  const Mat<Scalar> gram = frame.vectors().adjoint() * canonical;
  const auto n_vec = frame.size();
  return VectorFrame<Scalar>::frame(canonical + eta * (Mat<Scalar>::Identity(n_vec, n_vec) - gram), tol);
}

/// max_k || e_k - sum_i <e_k, phi_i> psi_i ||. By linearity this decides the
/// reconstruction identity on all of H^n.
template <FieldScalar Scalar>
double dual_residual(const VectorFrame<Scalar>& frame, const VectorFrame<Scalar>& dual) {
  if (frame.ambient_dim() != dual.ambient_dim()) throw Error(ErrorCode::DimensionMismatch, "ambient dimensions differ");
  if (frame.size() != dual.size()) throw Error(ErrorCode::MemberCountMismatch, "frame and dual differ in length");
  const auto n = frame.ambient_dim();
  const Mat<Scalar> recon = dual.vectors() * frame.vectors().adjoint();
  return (Mat<Scalar>::Identity(n, n) - recon).colwise().norm().maxCoeff();
}

template <FieldScalar Scalar>
bool is_dual(const VectorFrame<Scalar>& frame, const VectorFrame<Scalar>& dual, const Tolerance& tol = {}) {
  return dual_residual(frame, dual) <= tol.recon_abs;
}

struct EqualNormBound {
  double canonical_norm = 0.0;  // c
  double dual_norm = 0.0;       // d
  double canonical_redundancy = 0.0;
  double dual_redundancy = 0.0;
  double bound = 0.0;  // (d/c)^2 * dual_redundancy
  bool holds = false;
};

struct NormInequality {
  double lhs = 0.0;  // || (<x, S^-1 phi_i>)_i ||_2
  double rhs = 0.0;  // || (<x, psi_i>)_i ||_2
  bool holds = false;
  std::optional<EqualNormBound> equal_norm;
};

/// The canonical dual has the minimal l2 coefficient norm among all duals.
/// When both duals are equal-norm, also evaluates the redundancy comparison
/// R_{S^-1 Phi}(x) <= (d/c)^2 R_Psi(x).
template <FieldScalar Scalar>
NormInequality check_norm_inequality(const VectorFrame<Scalar>& frame, const VectorFrame<Scalar>& dual,
                                     const Vec<Scalar>& x, const Tolerance& tol = {}) {
  const double residual = dual_residual(frame, dual);
  if (residual > tol.recon_abs)
    throw Error(ErrorCode::NotADual, "reconstruction residual " + std::to_string(residual) + " exceeds tolerance");
  require_unit(x);
  const VectorFrame<Scalar> canonical = canonical_dual(frame, tol);
  NormInequality out;
  out.lhs = (canonical.vectors().adjoint() * x).norm();
  out.rhs = (dual.vectors().adjoint() * x).norm();
  out.holds = out.lhs <= out.rhs + tol.eig_rel;
  if (equal_norm(canonical, tol) && equal_norm(dual, tol)) {
    EqualNormBound e;
    e.canonical_norm = canonical.vectors().col(0).norm();
    e.dual_norm = dual.vectors().col(0).norm();
    e.canonical_redundancy = redundancy_function(canonical, x);
    e.dual_redundancy = redundancy_function(dual, x);
    const double ratio = e.dual_norm / e.canonical_norm;
    e.bound = ratio * ratio * e.dual_redundancy;
    e.holds = e.canonical_redundancy <= e.bound + tol.eig_rel * std::max(1.0, e.bound);
    out.equal_norm = e;
  }
  return out;
}

struct DualRedundancySandwich {
  double condition = 1.0;  // k(S) = lambda_max / lambda_min
  RedundancyRange frame;
  RedundancyRange dual;
  bool lower_holds = false;  // R-_Phi / k^2 <= R-_Psi <= R-_Phi k^2
  bool upper_holds = false;  // same for R+
  bool holds = false;
};

/// Redundancy of the canonical dual against the frame, bracketed by the squared
/// condition number of the frame operator.
template <FieldScalar Scalar>
DualRedundancySandwich dual_redundancy_sandwich(const VectorFrame<Scalar>& frame, const Tolerance& tol = {}) {
  const FrameBounds b = vector_frame_bounds(frame);
  DualRedundancySandwich out;
  out.condition = b.upper / b.lower;
  out.frame = vector_redundancy_range(frame);
  out.dual = vector_redundancy_range(canonical_dual(frame, tol));
  const double k2 = out.condition * out.condition;
  auto within = [&](double value, double reference) {
    const double slack = tol.eig_rel * reference * k2;
    return reference / k2 - slack <= value && value <= reference * k2 + slack;
  };
  out.lower_holds = within(out.dual.lower, out.frame.lower);
  out.upper_holds = within(out.dual.upper, out.frame.upper);
  out.holds = out.lower_holds && out.upper_holds;
  return out;
}

struct ScaledDualTest {
  double constant = 0.0;  // least-squares C with C * S ~ I
  double residual = 0.0;  // max_k || e_k - C S e_k ||
  bool is_dual = false;
};

/// Tests whether {C phi_i} is a dual for some C > 0, which happens exactly for
/// tight frames (with C = 1/A). C is fitted by least squares on C S = I.
template <FieldScalar Scalar>
ScaledDualTest scaled_dual_test(const VectorFrame<Scalar>& frame, const Tolerance& tol = {}) {
  const Mat<Scalar> s = frame_operator(frame);
  const auto n = frame.ambient_dim();
  ScaledDualTest out;
  out.constant = std::real(s.trace()) / s.squaredNorm();
  out.residual = (Mat<Scalar>::Identity(n, n) - out.constant * s).colwise().norm().maxCoeff();
  out.is_dual = out.constant > 0.0 && out.residual <= tol.recon_abs;
  return out;
}

struct VectorFrameReport {
  FrameBounds bounds;
  RedundancyRange redundancy;
  bool tight = false;
  bool equal_norm = false;
};

template <FieldScalar Scalar>
VectorFrameReport analyze(const VectorFrame<Scalar>& frame, const Tolerance& tol = {}) {
  VectorFrameReport r;
  r.bounds = vector_frame_bounds(frame);
  r.redundancy = vector_redundancy_range(frame);
  r.tight = r.bounds.tight(tol.eig_rel);
  r.equal_norm = ffk::equal_norm(frame, tol);
  return r;
}

}  // namespace ffk
