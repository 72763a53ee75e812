#pragma once

// Canonical and alternate dual fusion frames.

#include <limits>
#include <optional>
#include <string>

#include "ffk/fusion_frame.hpp"

namespace ffk {

/// {(S_W^-1 W_i, v_i)}. S_W^-1 is applied through the positive-definite solver.
template <FieldScalar Scalar>
FusionFrame<Scalar> canonical_dual_fusion(const FusionFrame<Scalar>& frame) {
  require_fusion_frame(frame);
  const Tolerance& tol = frame.tolerance();
  std::vector<Member<Scalar>> members;
  members.reserve(frame.size());
  for (const auto& m : frame.members()) {
    const Mat<Scalar> mapped = solve_hermitian_positive(frame.frame_operator(), m.subspace.basis(), tol);
    members.push_back({Subspace<Scalar>::span(mapped, tol), m.weight});
  }
  return FusionFrame<Scalar>(frame.ambient_dim(), std::move(members), tol);
}

struct CanonicalDualBracket {
  double condition = 1.0;  // k(S_W^-1) = B / A
  FrameBounds predicted;   // (A / k^2, B k^2)
  FrameBounds dual_bounds;
  bool bracketed = false;
};

/// Bounds of the canonical dual against those predicted for the image of the
/// frame under the invertible operator S_W^-1.
template <FieldScalar Scalar>
CanonicalDualBracket canonical_dual_bracket(const FusionFrame<Scalar>& frame, const FusionFrame<Scalar>& dual) {
  const FrameBounds b = frame_bounds(frame);
  CanonicalDualBracket r;
  r.condition = b.upper / b.lower;
  const double k2 = r.condition * r.condition;
  r.predicted = {b.lower / k2, b.upper * k2};
  r.dual_bounds = frame_bounds(dual);
  const double rel = frame.tolerance().eig_rel;
  r.bracketed = r.dual_bounds.lower >= r.predicted.lower * (1.0 - rel) &&
                r.dual_bounds.upper <= r.predicted.upper * (1.0 + rel);
  return r;
}

struct RatioBoundCheck {
  double lower = 0.0;  // stated lower bound on the ratio
  double observed_min = 0.0;
  double observed_max = 0.0;
  double upper = 0.0;  // stated upper bound on the ratio
  std::size_t samples = 0;
  std::size_t violations = 0;
  bool holds = false;
};

namespace detail {

template <FieldScalar Scalar>
void require_unit_weights(const FusionFrame<Scalar>& frame, const char* what) {
  if (!unit_weights(frame, frame.tolerance().eig_rel))
    throw Error(ErrorCode::NotUniformWeights, std::string(what) + " must have all weights equal to 1");
}

template <FieldScalar Scalar, typename Ratio>
RatioBoundCheck sample_ratio(Eigen::Index n, double lower, double upper, std::size_t samples, Rng& rng,
                             double rel, Ratio ratio) {
  RatioBoundCheck c;
  c.lower = lower;
  c.upper = upper;
  c.samples = samples;
  c.observed_min = std::numeric_limits<double>::infinity();
  c.observed_max = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < samples; ++s) {
    const Vec<Scalar> x = random_unit_vector<Scalar>(n, rng);
    const double q = ratio(x);
    c.observed_min = std::min(c.observed_min, q);
    c.observed_max = std::max(c.observed_max, q);
    if (q < lower - rel || q > upper + rel) ++c.violations;
  }
  c.holds = c.violations == 0;
  return c;
}

}  // namespace detail

/// Samples R_W(x) / R_{S^-1 W}(x) against [A^3/B, B^3/A] for a frame with
/// unit weights. Violations are reported as findings; `strict` turns them
/// into a RatioBoundViolated error.
template <FieldScalar Scalar>
RatioBoundCheck canonical_ratio_bounds(const FusionFrame<Scalar>& frame, std::size_t samples, Rng& rng,
                                       bool strict = false) {
  detail::require_unit_weights(frame, "frame");
  const FrameBounds b = frame_bounds(frame);
  const FusionFrame<Scalar> dual = canonical_dual_fusion(frame);
  const double a3 = b.lower * b.lower * b.lower;
  const double b3 = b.upper * b.upper * b.upper;
  RatioBoundCheck c = detail::sample_ratio<Scalar>(
      frame.ambient_dim(), a3 / b.upper, b3 / b.lower, samples, rng, frame.tolerance().eig_rel,
      [&](const Vec<Scalar>& x) { return redundancy_at(frame, x) / redundancy_at(dual, x); });
  if (strict && !c.holds)
    throw Error(ErrorCode::RatioBoundViolated, std::to_string(c.violations) + " of " + std::to_string(samples) +
                                                   " sampled ratios fall outside [A^3/B, B^3/A]");
  return c;
}

struct DualCertificate {
  double residual = 0.0;      // max_k || e_k - sum_i v_i w_i P_{V_i} S^-1 P_{W_i} e_k ||
  bool is_dual = false;
  double bessel_bound = 0.0;  // C = lambda_max(S_V)
};

/// sum_i v_i w_i P_{V_i} S_W^-1 P_{W_i}, where w_i are the frame's weights and
/// v_i the candidate's.
template <FieldScalar Scalar>
Mat<Scalar> dual_reconstruction_operator(const FusionFrame<Scalar>& frame, const FusionFrame<Scalar>& candidate) {
  if (frame.ambient_dim() != candidate.ambient_dim())
    throw Error(ErrorCode::DimensionMismatch, "frame and candidate live in different spaces");
  if (frame.size() != candidate.size())
    throw Error(ErrorCode::MemberCountMismatch, "frame has " + std::to_string(frame.size()) +
                                                    " members, candidate has " + std::to_string(candidate.size()));
  require_fusion_frame(frame);
  const auto n = frame.ambient_dim();
  Mat<Scalar> recon = Mat<Scalar>::Zero(n, n);
  for (std::size_t i = 0; i < frame.size(); ++i) {
    const Mat<Scalar>& qw = frame.member(i).subspace.basis();
    const Mat<Scalar>& qv = candidate.member(i).subspace.basis();
    const Mat<Scalar> s_inv_qw = solve_hermitian_positive(frame.frame_operator(), qw, frame.tolerance());
    recon += (frame.weight(i) * candidate.weight(i)) * (qv * (qv.adjoint() * s_inv_qw) * qw.adjoint());
  }
  return recon;
}

template <FieldScalar Scalar>
DualCertificate verify_alternate_dual(const FusionFrame<Scalar>& frame, const FusionFrame<Scalar>& candidate) {
  const Mat<Scalar> recon = dual_reconstruction_operator(frame, candidate);
  const auto n = frame.ambient_dim();
  DualCertificate c;
  c.residual = (Mat<Scalar>::Identity(n, n) - recon).colwise().norm().maxCoeff();
  c.is_dual = c.residual <= frame.tolerance().recon_abs;
  c.bessel_bound = bessel_bound(candidate);
  return c;
}

struct AlternateDualBounds {
  double lower = 0.0;            // 1 / (B ||S_W^-1||^2) = A^2 / B
  double upper = 0.0;            // C
  EigenRange observed;           // spectrum of S_V
  bool bounds_hold = false;      // lower - eig_rel <= lambda_min(S_V), lambda_max(S_V) <= C
  std::optional<RatioBoundCheck> ratio;  // R_V / R_W against [1/||S_W^-1||^2, C/A]; unit weights only
  bool holds = false;
};

/// Checks a verified alternate dual: its operator bounds against
/// [1/(B ||S_W^-1||^2), C] and, when both families have unit weights, the
/// sampled redundancy ratio against [1/||S_W^-1||^2, C/A].
template <FieldScalar Scalar>
AlternateDualBounds alternate_dual_bounds(const FusionFrame<Scalar>& frame, const FusionFrame<Scalar>& dual,
                                          std::size_t samples, Rng& rng, bool strict = false) {
  const DualCertificate cert = verify_alternate_dual(frame, dual);
  if (!cert.is_dual)
    throw Error(ErrorCode::NotADual, "reconstruction residual " + std::to_string(cert.residual) +
                                         " exceeds tolerance");
  const Tolerance& tol = frame.tolerance();
  const FrameBounds b = frame_bounds(frame);
  const double inv_norm = 1.0 / b.lower;  // ||S_W^-1||
  AlternateDualBounds r;
  r.lower = 1.0 / (b.upper * inv_norm * inv_norm);
  r.upper = cert.bessel_bound;
  r.observed = dual.spectrum();
  r.bounds_hold = r.observed.min >= r.lower - tol.eig_rel && r.observed.max <= r.upper * (1.0 + tol.eig_rel);
  r.holds = r.bounds_hold;
  if (unit_weights(frame, tol.eig_rel) && unit_weights(dual, tol.eig_rel)) {
    r.ratio = detail::sample_ratio<Scalar>(
        frame.ambient_dim(), 1.0 / (inv_norm * inv_norm), r.upper / b.lower, samples, rng, tol.eig_rel,
        [&](const Vec<Scalar>& x) { return redundancy_at(dual, x) / redundancy_at(frame, x); });
    if (strict && !r.ratio->holds)
      throw Error(ErrorCode::RatioBoundViolated, std::to_string(r.ratio->violations) +
                                                     " sampled ratios R_V/R_W fall outside their bounds");
  }
  return r;
}

}  // namespace ffk
