#pragma once

// Fusion frame systems: a fusion frame together with a local frame for each
// of its subspaces.

#include <vector>

#include "ffk/fusion_frame.hpp"
#include "ffk/vector_frames.hpp"

namespace ffk {

inline constexpr double kLocalTolerance = 1e-10;

template <FieldScalar Scalar>
class FusionFrameSystem {
 public:
  /// Validates that every local vector lies in its subspace and that each
  /// local family spans its subspace.
  FusionFrameSystem(FusionFrame<Scalar> frame, const std::vector<Mat<Scalar>>& local_vectors)
      : frame_(std::move(frame)) {
    if (local_vectors.size() != frame_.size())
      throw Error(ErrorCode::MemberCountMismatch, std::to_string(local_vectors.size()) + " local frames for " +
                                                      std::to_string(frame_.size()) + " subspaces");
    const Tolerance& tol = frame_.tolerance();
    locals_.reserve(local_vectors.size());
    for (std::size_t i = 0; i < local_vectors.size(); ++i) {
      const Subspace<Scalar>& w = frame_.member(i).subspace;
      const Mat<Scalar>& f = local_vectors[i];
      if (f.rows() != frame_.ambient_dim())
        throw Error(ErrorCode::DimensionMismatch, "local frame " + std::to_string(i) + " has the wrong length", i);
      for (Eigen::Index j = 0; j < f.cols(); ++j)
        if (!w.contains(f.col(j), kLocalTolerance))
          throw Error(ErrorCode::VectorOutsideSubspace, "local vector " + std::to_string(j) + " of member " +
                                                            std::to_string(i) + " is not in its subspace", i);
      try {
        auto local = VectorFrame<Scalar>::sequence(f, tol);
        if (local.rank() != static_cast<std::size_t>(w.dim()))
          throw Error(ErrorCode::LocalNotAFrame, "local frame " + std::to_string(i) + " spans " +
                                                     std::to_string(local.rank()) + " of " +
                                                     std::to_string(w.dim()) + " dimensions", i);
        locals_.push_back(std::move(local));
      } catch (const Error& e) {
        if (e.code() == ErrorCode::LocalNotAFrame) throw;
        throw Error(ErrorCode::LocalNotAFrame, "local frame " + std::to_string(i) + ": " + e.detail(), i);
      }
    }
  }

  const FusionFrame<Scalar>& frame() const { return frame_; }
  const std::vector<VectorFrame<Scalar>>& local_frames() const { return locals_; }
  const VectorFrame<Scalar>& local_frame(std::size_t i) const { return locals_.at(i); }

 private:
  FusionFrame<Scalar> frame_;
  std::vector<VectorFrame<Scalar>> locals_;
};

template <FieldScalar Scalar>
FusionFrameSystem<Scalar> build_system(FusionFrame<Scalar> frame, const std::vector<Mat<Scalar>>& local_vectors) {
  return FusionFrameSystem<Scalar>(std::move(frame), local_vectors);
}

/// Pairwise orthogonal vectors, |<f_j, f_k>| <= 1e-10 ||f_j|| ||f_k||. Norms are unconstrained.
template <FieldScalar Scalar>
bool has_orthogonal_elements(const VectorFrame<Scalar>& local) {
  const Mat<Scalar> gram = local.vectors().adjoint() * local.vectors();
  for (Eigen::Index j = 0; j < gram.rows(); ++j)
    for (Eigen::Index k = j + 1; k < gram.cols(); ++k)
      if (std::abs(gram(j, k)) > kLocalTolerance * std::sqrt(std::real(gram(j, j)) * std::real(gram(k, k))))
        return false;
  return true;
}

struct LocalAdditivity {
  double fusion_value = 0.0;  // R_W(x)
  double local_sum = 0.0;     // sum_i R_{phi_i}(x)
  bool orthogonal_locals = false;
  bool equal = false;         // |fusion_value - local_sum| <= 1e-9
};

/// R_W(x) against the sum of the local frames' redundancy functions; the two
/// agree when every local frame has orthogonal elements.
template <FieldScalar Scalar>
LocalAdditivity check_local_additivity(const FusionFrameSystem<Scalar>& system, const Vec<Scalar>& x) {
  LocalAdditivity r;
  r.fusion_value = redundancy_at(system.frame(), x);
  r.orthogonal_locals = true;
  for (const auto& local : system.local_frames()) {
    r.local_sum += redundancy_function(local, x);
    r.orthogonal_locals = r.orthogonal_locals && has_orthogonal_elements(local);
  }
  r.equal = std::abs(r.fusion_value - r.local_sum) <= 1e-9;
  return r;
}

/// sum_j f_ij f_ij^* = P_i within 1e-10
template <FieldScalar Scalar>
bool local_parseval(const FusionFrameSystem<Scalar>& system, std::size_t i) {
  const auto& f = system.local_frame(i).vectors();
  return max_abs_diff<Scalar>(f * f.adjoint(), system.frame().member(i).subspace.projection()) <= kLocalTolerance;
}

template <FieldScalar Scalar>
void require_parseval_locals(const FusionFrameSystem<Scalar>& system) {
  for (std::size_t i = 0; i < system.local_frames().size(); ++i)
    if (!local_parseval(system, i))
      throw Error(ErrorCode::LocalNotParseval, "local frame " + std::to_string(i) + " is not Parseval for its subspace",
                  i);
}

/// {v_i f_ij} flattened into one n x (sum m_i) matrix.
template <FieldScalar Scalar>
Mat<Scalar> flattened_vectors(const FusionFrameSystem<Scalar>& system) {
  Eigen::Index cols = 0;
  for (const auto& l : system.local_frames()) cols += l.size();
  Mat<Scalar> flat(system.frame().ambient_dim(), cols);
  Eigen::Index at = 0;
  for (std::size_t i = 0; i < system.local_frames().size(); ++i) {
    const auto& f = system.local_frame(i).vectors();
    flat.middleCols(at, f.cols()) = system.frame().weight(i) * f;
    at += f.cols();
  }
  return flat;
}

/// sum_i v_i^2 sum_j e_ij e_ij^* over orthonormal local bases; equals S_W.
template <FieldScalar Scalar>
Mat<Scalar> flattened_orthonormal_operator(const FusionFrame<Scalar>& frame) {
  const Mat<Scalar> t = synthesis_matrix(frame);
  return t * t.adjoint();
}

namespace detail {

template <FieldScalar Scalar>
bool is_parseval_family(const Mat<Scalar>& vectors, double rel) {
  const auto n = vectors.rows();
  return max_abs_diff<Scalar>(vectors * vectors.adjoint(), Mat<Scalar>::Identity(n, n)) <= rel;
}

}  // namespace detail

struct ParsevalEquivalence {
  bool global_parseval = false;      // {v_i f_ij} Parseval for H^n
  bool orthonormal_parseval = false; // {v_i e_ij} Parseval for H^n
  bool fusion_parseval = false;      // {(W_i, v_i)} Parseval fusion frame
  bool consistent = false;
};

/// With Parseval local frames, the flattened family, the flattened orthonormal
/// bases, and the fusion frame are Parseval together or not at all.
template <FieldScalar Scalar>
ParsevalEquivalence parseval_equivalences(const FusionFrameSystem<Scalar>& system) {
  require_parseval_locals(system);
  const double rel = system.frame().tolerance().eig_rel;
  ParsevalEquivalence r;
  r.global_parseval = detail::is_parseval_family(flattened_vectors(system), rel);
  r.orthonormal_parseval = detail::is_parseval_family(synthesis_matrix(system.frame()), rel);
  r.fusion_parseval = classify(system.frame()).parseval;
  r.consistent = r.global_parseval == r.fusion_parseval && r.orthonormal_parseval == r.fusion_parseval;
  return r;
}

struct RedundancyOneEquivalence {
  bool flat_parseval = false;          // {f_ij} Parseval for H^n
  bool fusion_redundancy_one = false;  // R- = R+ = 1
  bool consistent = false;
};

template <FieldScalar Scalar>
RedundancyOneEquivalence redundancy_one_equivalence(const FusionFrameSystem<Scalar>& system) {
  require_parseval_locals(system);
  const FusionFrame<Scalar>& frame = system.frame();
  const double rel = frame.tolerance().eig_rel;
  if (!unit_weights(frame, rel)) throw Error(ErrorCode::NotUniformWeights, "all weights must be 1");
  RedundancyOneEquivalence r;
  Eigen::Index cols = 0;
  for (const auto& l : system.local_frames()) cols += l.size();
  Mat<Scalar> flat(frame.ambient_dim(), cols);
  Eigen::Index at = 0;
  for (const auto& l : system.local_frames()) {
    flat.middleCols(at, l.size()) = l.vectors();
    at += l.size();
  }
  r.flat_parseval = detail::is_parseval_family(flat, rel);
  const EigenRange red = hermitian_eigenrange(frame.normalized_operator());
  r.fusion_redundancy_one = !frame.bessel_only() && std::abs(red.min - 1.0) <= rel && std::abs(red.max - 1.0) <= rel;
  r.consistent = r.flat_parseval == r.fusion_redundancy_one;
  return r;
}

}  // namespace ffk
