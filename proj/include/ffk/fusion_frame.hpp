#pragma once

// Fusion frames {(W_i, v_i)} in H^n: operators, bounds, the redundancy
// function and its extremes, structural predicates, unions, erasures and
// images under invertible operators.

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ffk/bounds.hpp"
#include "ffk/numerics.hpp"
#include "ffk/sampling.hpp"

namespace ffk {

/// A subspace of H^n held as an orthonormal basis (n x d). The projection is
/// basis * basis^*.
template <FieldScalar Scalar>
class Subspace {
 public:
  /// Span of the columns of `vectors`; dependent columns collapse.
  static Subspace span(const Mat<Scalar>& vectors, const Tolerance& tol = {}) {
    try {
      return Subspace(orthonormalize(vectors, tol));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::AllColumnsNumericallyZero) throw Error(ErrorCode::ZeroSubspace, e.detail());
      throw;
    }
  }

  Eigen::Index ambient_dim() const { return basis_.rows(); }
  Eigen::Index dim() const { return basis_.cols(); }
  const Mat<Scalar>& basis() const { return basis_; }
  Mat<Scalar> projection() const { return basis_ * basis_.adjoint(); }
  Vec<Scalar> project(const Vec<Scalar>& x) const { return basis_ * (basis_.adjoint() * x); }
  /// ||P x||^2
  double projected_norm2(const Vec<Scalar>& x) const { return (basis_.adjoint() * x).squaredNorm(); }

  /// ||(I - P) v|| <= abs_tol * max(1, ||v||)
  bool contains(const Vec<Scalar>& v, double abs_tol = 1e-10) const {
    return (v - project(v)).norm() <= abs_tol * std::max(1.0, v.norm());
  }

  bool same_as(const Subspace& other, double max_angle = 1e-8) const {
    return same_span(basis_, other.basis_, max_angle);
  }

 private:
  explicit Subspace(Mat<Scalar> basis) : basis_(std::move(basis)) {}
  Mat<Scalar> basis_;
};

template <FieldScalar Scalar>
struct Member {
  Subspace<Scalar> subspace;
  double weight = 1.0;
};

/// An immutable finite family of weighted subspaces. Families whose operator
/// is singular are representable (Bessel-only) and flagged as such; the
/// analyses that need the lower frame inequality reject them.
template <FieldScalar Scalar>
class FusionFrame {
 public:
  FusionFrame(Eigen::Index ambient_dim, std::vector<Member<Scalar>> members, const Tolerance& tol = {})
      : n_(ambient_dim), members_(std::move(members)), tol_(tol) {
    if (n_ < 1) throw Error(ErrorCode::DimensionMismatch, "ambient dimension must be at least 1");
    if (members_.empty()) throw Error(ErrorCode::NotAFusionFrame, "a fusion frame needs at least one subspace");
    operator_ = Mat<Scalar>::Zero(n_, n_);
    normalized_ = Mat<Scalar>::Zero(n_, n_);
    for (std::size_t i = 0; i < members_.size(); ++i) {
      const Member<Scalar>& m = members_[i];
      if (!(m.weight > 0.0) || !std::isfinite(m.weight))
        throw Error(ErrorCode::NonPositiveWeight, "weight " + std::to_string(m.weight) + " of member " +
                                                      std::to_string(i) + " is not positive", i);
      if (m.subspace.ambient_dim() != n_)
        throw Error(ErrorCode::DimensionMismatch, "member " + std::to_string(i) + " lives in dimension " +
                                                      std::to_string(m.subspace.ambient_dim()), i);
      const Mat<Scalar> p = m.subspace.projection();
      normalized_ += p;
      operator_ += (m.weight * m.weight) * p;
    }
    operator_ = symmetrize(operator_);
    normalized_ = symmetrize(normalized_);
    spectrum_ = hermitian_eigenrange(operator_);
    is_frame_ = spectrum_.max > 0.0 && spectrum_.min > tol_.rank_rel * spectrum_.max;
  }

  Eigen::Index ambient_dim() const { return n_; }
  std::size_t size() const { return members_.size(); }
  const std::vector<Member<Scalar>>& members() const { return members_; }
  const Member<Scalar>& member(std::size_t i) const { return members_.at(i); }
  double weight(std::size_t i) const { return members_.at(i).weight; }
  const Tolerance& tolerance() const { return tol_; }

  /// S_W = sum v_i^2 P_i
  const Mat<Scalar>& frame_operator() const { return operator_; }
  /// S_1W = sum P_i
  const Mat<Scalar>& normalized_operator() const { return normalized_; }
  EigenRange spectrum() const { return spectrum_; }

  bool is_frame() const { return is_frame_; }
  bool bessel_only() const { return !is_frame_; }

  /// Sum of local dimensions.
  Eigen::Index total_dim() const {
    Eigen::Index d = 0;
    for (const auto& m : members_) d += m.subspace.dim();
    return d;
  }

 private:
  Eigen::Index n_;
  std::vector<Member<Scalar>> members_;
  Tolerance tol_;
  Mat<Scalar> operator_;
  Mat<Scalar> normalized_;
  EigenRange spectrum_;
  bool is_frame_ = false;
};

template <FieldScalar Scalar>
struct WeightedSpan {
  Mat<Scalar> vectors;  // n x k, columns spanning the subspace
  double weight = 1.0;
};

/// Orthonormalizes every span; repeated subspaces are kept as separate members.
template <FieldScalar Scalar>
FusionFrame<Scalar> build_fusion_frame(const std::vector<WeightedSpan<Scalar>>& spans, Eigen::Index ambient_dim,
                                       const Tolerance& tol = {}) {
  std::vector<Member<Scalar>> members;
  members.reserve(spans.size());
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const auto& s = spans[i];
    if (!(s.weight > 0.0) || !std::isfinite(s.weight))
      throw Error(ErrorCode::NonPositiveWeight, "weight of member " + std::to_string(i) + " is " +
                                                    std::to_string(s.weight), i);
    if (s.vectors.rows() != ambient_dim)
      throw Error(ErrorCode::DimensionMismatch, "member " + std::to_string(i) + " has vectors of length " +
                                                    std::to_string(s.vectors.rows()) + ", expected " +
                                                    std::to_string(ambient_dim), i);
    if (s.vectors.cols() < 1) throw Error(ErrorCode::ZeroSubspace, "member " + std::to_string(i) + " has no vectors", i);
    try {
      members.push_back({Subspace<Scalar>::span(s.vectors, tol), s.weight});
    } catch (const Error& e) {
      throw Error(e.code(), "member " + std::to_string(i) + ": " + e.detail(), i);
    }
  }
  return FusionFrame<Scalar>(ambient_dim, std::move(members), tol);
}

template <FieldScalar Scalar>
void require_fusion_frame(const FusionFrame<Scalar>& frame) {
  if (frame.bessel_only())
    throw Error(ErrorCode::NotAFusionFrame, "smallest eigenvalue of the fusion frame operator is " +
                                                std::to_string(frame.spectrum().min));
}

template <FieldScalar Scalar>
Mat<Scalar> fusion_frame_operator(const FusionFrame<Scalar>& frame, bool normalized) {
  return normalized ? frame.normalized_operator() : frame.frame_operator();
}

/// Optimal bounds: extremal eigenvalues of S_W.
template <FieldScalar Scalar>
FrameBounds frame_bounds(const FusionFrame<Scalar>& frame) {
  require_fusion_frame(frame);
  return FrameBounds::checked(frame.spectrum().min, frame.spectrum().max, ErrorCode::NotAFusionFrame);
}

/// Optimal upper (Bessel) bound; defined for Bessel-only families too.
template <FieldScalar Scalar>
double bessel_bound(const FusionFrame<Scalar>& frame) {
  return frame.spectrum().max;
}

/// R_W(x) as the Rayleigh quotient x^* S_1W x of the normalized operator.
template <FieldScalar Scalar>
double redundancy_at(const FusionFrame<Scalar>& frame, const Vec<Scalar>& x) {
  if (x.size() != frame.ambient_dim()) throw Error(ErrorCode::DimensionMismatch, "x has the wrong dimension");
  require_unit(x);
  return std::real(x.dot(frame.normalized_operator() * x));
}

/// R_W(x) as the explicit sum of squared projection norms.
template <FieldScalar Scalar>
double redundancy_at_direct(const FusionFrame<Scalar>& frame, const Vec<Scalar>& x) {
  if (x.size() != frame.ambient_dim()) throw Error(ErrorCode::DimensionMismatch, "x has the wrong dimension");
  require_unit(x);
  double sum = 0.0;
  for (const auto& m : frame.members()) sum += m.subspace.projected_norm2(x);
  return sum;
}

/// (inf, sup) of R_W over the unit sphere: extremal eigenvalues of S_1W.
template <FieldScalar Scalar>
RedundancyRange redundancy_range(const FusionFrame<Scalar>& frame) {
  require_fusion_frame(frame);
  const EigenRange r = hermitian_eigenrange(frame.normalized_operator());
  return {r.min, r.max};
}

/// [v_1 Q_1 | ... | v_N Q_N]: the synthesis operator in local orthonormal
/// coordinates. Its adjoint represents the analysis operator.
template <FieldScalar Scalar>
Mat<Scalar> synthesis_matrix(const FusionFrame<Scalar>& frame) {
  Mat<Scalar> t(frame.ambient_dim(), frame.total_dim());
  Eigen::Index col = 0;
  for (const auto& m : frame.members()) {
    const auto d = m.subspace.dim();
    t.middleCols(col, d) = m.weight * m.subspace.basis();
    col += d;
  }
  return t;
}

/// dim N(T_W)
template <FieldScalar Scalar>
std::size_t excess(const FusionFrame<Scalar>& frame) {
  return kernel_dimension(synthesis_matrix(frame), frame.tolerance());
}

/// Injective synthesis operator, equivalently a minimal family / Riesz decomposition.
template <FieldScalar Scalar>
bool is_minimal(const FusionFrame<Scalar>& frame) {
  return excess(frame) == 0;
}

template <FieldScalar Scalar>
bool uniform_weights(const FusionFrame<Scalar>& frame, double rel) {
  double lo = frame.weight(0), hi = frame.weight(0);
  for (const auto& m : frame.members()) {
    lo = std::min(lo, m.weight);
    hi = std::max(hi, m.weight);
  }
  return hi - lo <= rel * hi;
}

template <FieldScalar Scalar>
bool unit_weights(const FusionFrame<Scalar>& frame, double rel) {
  return std::all_of(frame.members().begin(), frame.members().end(),
                     [&](const Member<Scalar>& m) { return std::abs(m.weight - 1.0) <= rel; });
}

struct AnalysisReport {
  std::optional<FrameBounds> bounds;  // absent for Bessel-only families
  double bessel_bound = 0.0;
  RedundancyRange redundancy;
  bool tight = false;
  bool parseval = false;
  bool uniform_weights = false;
  bool orthonormal_fusion_basis = false;
  bool minimal = false;
  bool uniform_redundancy = false;
  bool bessel_only = false;
  std::size_t excess = 0;
  /// orthonormal_fusion_basis agrees with (R- = R+ = 1 and all v_i = 1).
  bool orthonormal_basis_consistent = true;

  friend bool operator==(const AnalysisReport& a, const AnalysisReport& b) {
    auto same_bounds = [](const std::optional<FrameBounds>& x, const std::optional<FrameBounds>& y) {
      if (x.has_value() != y.has_value()) return false;
      return !x || (x->lower == y->lower && x->upper == y->upper);
    };
    return same_bounds(a.bounds, b.bounds) && a.bessel_bound == b.bessel_bound &&
           a.redundancy.lower == b.redundancy.lower && a.redundancy.upper == b.redundancy.upper &&
           a.tight == b.tight && a.parseval == b.parseval && a.uniform_weights == b.uniform_weights &&
           a.orthonormal_fusion_basis == b.orthonormal_fusion_basis && a.minimal == b.minimal &&
           a.uniform_redundancy == b.uniform_redundancy && a.bessel_only == b.bessel_only &&
           a.excess == b.excess && a.orthonormal_basis_consistent == b.orthonormal_basis_consistent;
  }
};

/// Fills every field of the report. Bessel-only families get bessel_only set,
/// no bounds, and every frame-dependent flag false.
template <FieldScalar Scalar>
AnalysisReport classify(const FusionFrame<Scalar>& frame) {
  const Tolerance& tol = frame.tolerance();
  AnalysisReport r;
  r.bessel_only = frame.bessel_only();
  r.bessel_bound = bessel_bound(frame);
  const EigenRange red = hermitian_eigenrange(frame.normalized_operator());
  r.redundancy = {red.min, red.max};
  r.uniform_weights = uniform_weights(frame, tol.eig_rel);
  r.excess = excess(frame);
  r.minimal = r.excess == 0;
  const bool ones = unit_weights(frame, tol.eig_rel);
  if (!r.bessel_only) {
    r.bounds = frame_bounds(frame);
    r.tight = r.bounds->tight(tol.eig_rel);
    r.parseval = r.tight && std::abs(r.bounds->lower - 1.0) <= tol.eig_rel &&
                 std::abs(r.bounds->upper - 1.0) <= tol.eig_rel;
    r.orthonormal_fusion_basis = r.parseval && ones;
    r.uniform_redundancy = r.redundancy.uniform(tol.eig_rel);
  }
  const bool redundancy_one =
      std::abs(r.redundancy.lower - 1.0) <= tol.eig_rel && std::abs(r.redundancy.upper - 1.0) <= tol.eig_rel;
  r.orthonormal_basis_consistent = r.orthonormal_fusion_basis == (!r.bessel_only && redundancy_one && ones);
  return r;
}

/// Same subspaces, all weights set to 1.
template <FieldScalar Scalar>
FusionFrame<Scalar> normalized_version(const FusionFrame<Scalar>& frame) {
  std::vector<Member<Scalar>> members = frame.members();
  for (auto& m : members) m.weight = 1.0;
  return FusionFrame<Scalar>(frame.ambient_dim(), std::move(members), frame.tolerance());
}

/// v_i -> alpha v_i
template <FieldScalar Scalar>
FusionFrame<Scalar> scale_weights(const FusionFrame<Scalar>& frame, double alpha) {
  std::vector<Member<Scalar>> members = frame.members();
  for (auto& m : members) m.weight *= alpha;
  return FusionFrame<Scalar>(frame.ambient_dim(), std::move(members), frame.tolerance());
}

/// members[i] of the result is frame.members()[order[i]].
template <FieldScalar Scalar>
FusionFrame<Scalar> permute(const FusionFrame<Scalar>& frame, const std::vector<std::size_t>& order) {
  if (order.size() != frame.size()) throw Error(ErrorCode::MemberCountMismatch, "permutation has wrong length");
  std::vector<bool> seen(order.size(), false);
  std::vector<Member<Scalar>> members;
  members.reserve(order.size());
  for (std::size_t i : order) {
    if (i >= order.size() || seen[i]) throw Error(ErrorCode::InvalidIndex, "not a permutation");
    seen[i] = true;
    members.push_back(frame.member(i));
  }
  return FusionFrame<Scalar>(frame.ambient_dim(), std::move(members), frame.tolerance());
}

/// Concatenated member list; S_{a u b} = S_a + S_b.
template <FieldScalar Scalar>
FusionFrame<Scalar> unite(const FusionFrame<Scalar>& a, const FusionFrame<Scalar>& b) {
  if (a.ambient_dim() != b.ambient_dim())
    throw Error(ErrorCode::DimensionMismatch, "cannot unite frames of dimensions " + std::to_string(a.ambient_dim()) +
                                                  " and " + std::to_string(b.ambient_dim()));
  std::vector<Member<Scalar>> members = a.members();
  members.insert(members.end(), b.members().begin(), b.members().end());
  return FusionFrame<Scalar>(a.ambient_dim(), std::move(members), a.tolerance());
}

/// Member-by-member comparison: same weights (relative eig_rel) and same
/// spans (principal angles <= max_angle).
template <FieldScalar Scalar>
bool same_members(const FusionFrame<Scalar>& a, const FusionFrame<Scalar>& b, double max_angle = 1e-8) {
  if (a.size() != b.size() || a.ambient_dim() != b.ambient_dim()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double wa = a.weight(i), wb = b.weight(i);
    if (std::abs(wa - wb) > a.tolerance().eig_rel * std::max(wa, wb)) return false;
    if (!a.member(i).subspace.same_as(b.member(i).subspace, max_angle)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Erasures

template <FieldScalar Scalar>
struct Erasure {
  FusionFrame<Scalar> remaining;
  double erased_weight = 0.0;                  // a = sum_{i in J} v_i^2
  std::optional<double> guaranteed_lower;      // A - a when a < A
  double remaining_lower = 0.0;                // computed lambda_min of the remaining operator
  bool remaining_is_frame = false;
  bool guarantee_verified = true;              // remaining_lower >= A - a - eig_rel
};

/// Removes the members indexed by `erased` (0-based). When the erased weight
/// a = sum v_i^2 stays below the lower bound A, the remainder is guaranteed
/// to be a fusion frame with bounds A - a and B.
template <FieldScalar Scalar>
Erasure<Scalar> erase(const FusionFrame<Scalar>& frame, const std::vector<std::size_t>& erased) {
  require_fusion_frame(frame);
  std::vector<bool> drop(frame.size(), false);
  for (std::size_t i : erased) {
    if (i >= frame.size()) throw Error(ErrorCode::InvalidIndex, "erasure index " + std::to_string(i) + " out of range");
    drop[i] = true;
  }
  std::vector<Member<Scalar>> kept;
  double a = 0.0;
  for (std::size_t i = 0; i < frame.size(); ++i) {
    if (drop[i])
      a += frame.weight(i) * frame.weight(i);
    else
      kept.push_back(frame.member(i));
  }
  if (kept.empty()) throw Error(ErrorCode::EmptyRemainder, "erasure removes every member");
  FusionFrame<Scalar> remaining(frame.ambient_dim(), std::move(kept), frame.tolerance());
  const double lower = frame_bounds(frame).lower;
  Erasure<Scalar> out{std::move(remaining), a, std::nullopt, 0.0, false, true};
  out.remaining_lower = out.remaining.spectrum().min;
  out.remaining_is_frame = out.remaining.is_frame();
  if (a < lower) {
    out.guaranteed_lower = lower - a;
    out.guarantee_verified = out.remaining_lower >= lower - a - frame.tolerance().eig_rel;
  }
  return out;
}

enum class ErasureSearch { Exhaustive, Greedy };

struct ErasureLevel {
  std::size_t erasures = 0;
  bool all_survive = false;        // every k-subset removal leaves a fusion frame
  bool weight_bound = false;       // sum of the k largest v_i^2 < A certifies every k-subset at once
  bool some_survive = false;       // at least one k-subset removal leaves a fusion frame
  std::vector<std::size_t> counterexample;  // a k-subset whose removal destroys the frame property
  std::vector<std::size_t> witness;         // a k-subset whose removal keeps it
  double worst_lower = 0.0;        // smallest lambda_min over the examined subsets
  std::size_t subsets_checked = 0;
};

struct RobustnessCertificate {
  std::size_t certified = 0;     // largest k <= budget with every k-subset removal surviving
  std::string rule = "trivial";  // "weight-bound", "rank" or "trivial" (k = 0)
  bool exhaustive = true;        // false: greedy search, `certified` is an upper estimate
  std::size_t budget = 0;
  std::vector<ErasureLevel> levels;
};

namespace detail {

template <FieldScalar Scalar>
bool survives(const Mat<Scalar>& op, const Tolerance& tol, double* lower) {
  const EigenRange r = hermitian_eigenrange(op);
  *lower = r.min;
  return r.max > 0.0 && r.min > tol.rank_rel * r.max;
}

// Advances `idx` to the next k-combination of {0..n-1} in lexicographic order.
inline bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
  const std::size_t k = idx.size();
  for (std::size_t i = k; i-- > 0;) {
    if (idx[i] < n - k + i) {
      ++idx[i];
      for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace detail

inline constexpr std::size_t kMaxExhaustiveMembers = 22;

/// Largest k <= budget such that removing any k members leaves a fusion
/// frame. Survival is decided on the remaining operator's spectrum; the
/// weight-bound sufficient condition is reported alongside. Exhaustive search
/// is used up to 22 members (unless Greedy is requested); above that, or on
/// request, an adversarial greedy removal gives an upper estimate.
template <FieldScalar Scalar>
RobustnessCertificate max_robust_erasures(const FusionFrame<Scalar>& frame, std::size_t budget,
                                          ErasureSearch mode = ErasureSearch::Exhaustive) {
  require_fusion_frame(frame);
  const Tolerance& tol = frame.tolerance();
  const std::size_t n_members = frame.size();
  budget = std::min(budget, n_members - 1);
  const bool exhaustive = mode == ErasureSearch::Exhaustive && n_members <= kMaxExhaustiveMembers;

  std::vector<Mat<Scalar>> parts;
  std::vector<double> sq_weights;
  for (const auto& m : frame.members()) {
    parts.push_back((m.weight * m.weight) * m.subspace.projection());
    sq_weights.push_back(m.weight * m.weight);
  }
  std::vector<double> sorted = sq_weights;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const double lower = frame_bounds(frame).lower;

  RobustnessCertificate cert;
  cert.exhaustive = exhaustive;
  cert.budget = budget;
  bool prefix_robust = true;

  if (exhaustive) {
    for (std::size_t k = 1; k <= budget; ++k) {
      ErasureLevel level;
      level.erasures = k;
      level.weight_bound = std::accumulate(sorted.begin(), sorted.begin() + static_cast<long>(k), 0.0) < lower;
      level.all_survive = true;
      level.worst_lower = frame.spectrum().max;
      std::vector<std::size_t> idx(k);
      std::iota(idx.begin(), idx.end(), 0);
      do {
        Mat<Scalar> op = frame.frame_operator();
        for (std::size_t i : idx) op -= parts[i];
        double lam = 0.0;
        const bool ok = detail::survives(op, tol, &lam);
        ++level.subsets_checked;
        level.worst_lower = std::min(level.worst_lower, lam);
        if (ok && !level.some_survive) {
          level.some_survive = true;
          level.witness = idx;
        }
        if (!ok && level.all_survive) {
          level.all_survive = false;
          level.counterexample = idx;
        }
      } while (detail::next_combination(idx, n_members));
      if (prefix_robust && level.all_survive) {
        cert.certified = k;
      } else {
        prefix_robust = false;
      }
      const bool stop = !level.some_survive;
      cert.levels.push_back(std::move(level));
      if (stop) break;  // removing more members cannot restore the span
    }
  } else {
    // Greedy: repeatedly erase the member whose removal hurts lambda_min most.
    Mat<Scalar> op = frame.frame_operator();
    std::vector<bool> gone(n_members, false);
    std::vector<std::size_t> removed;
    for (std::size_t k = 1; k <= budget; ++k) {
      ErasureLevel level;
      level.erasures = k;
      level.weight_bound = std::accumulate(sorted.begin(), sorted.begin() + static_cast<long>(k), 0.0) < lower;
      std::optional<std::size_t> worst;
      double worst_lam = 0.0;
      bool worst_ok = true;
      for (std::size_t i = 0; i < n_members; ++i) {
        if (gone[i]) continue;
        double lam = 0.0;
        const bool ok = detail::survives(Mat<Scalar>(op - parts[i]), tol, &lam);
        ++level.subsets_checked;
        if (!worst || lam < worst_lam) {
          worst = i;
          worst_lam = lam;
          worst_ok = ok;
        }
      }
      gone[*worst] = true;
      op -= parts[*worst];
      removed.push_back(*worst);
      level.worst_lower = worst_lam;
      level.all_survive = worst_ok;
      level.some_survive = worst_ok;
      if (worst_ok) {
        level.witness = removed;
        if (prefix_robust) cert.certified = k;
      } else {
        level.counterexample = removed;
        prefix_robust = false;
      }
      std::sort((worst_ok ? level.witness : level.counterexample).begin(),
                (worst_ok ? level.witness : level.counterexample).end());
      cert.levels.push_back(std::move(level));
      if (!worst_ok) break;
    }
  }
  if (cert.certified > 0) cert.rule = cert.levels[cert.certified - 1].weight_bound ? "weight-bound" : "rank";
  return cert;
}

// ---------------------------------------------------------------------------
// Images under invertible operators

/// {(U W_i, v_i)} for square invertible U.
template <FieldScalar Scalar>
FusionFrame<Scalar> apply_operator(const FusionFrame<Scalar>& frame, const Mat<Scalar>& op) {
  if (op.rows() != op.cols()) throw Error(ErrorCode::NotSquare, "operator must be square");
  if (op.rows() != frame.ambient_dim()) throw Error(ErrorCode::DimensionMismatch, "operator has the wrong size");
  const Tolerance& tol = frame.tolerance();
  const RealVec s = singular_values(op);
  if (!(s(s.size() - 1) > tol.rank_rel * s(0))) throw Error(ErrorCode::SingularOperator, "operator is singular");
  std::vector<Member<Scalar>> members;
  members.reserve(frame.size());
  for (const auto& m : frame.members())
    members.push_back({Subspace<Scalar>::span(Mat<Scalar>(op * m.subspace.basis()), tol), m.weight});
  return FusionFrame<Scalar>(frame.ambient_dim(), std::move(members), tol);
}

struct TransformReport {
  double condition = 1.0;          // k(U) = ||U|| ||U^-1||
  FrameBounds predicted;           // (A / k^2, B k^2)
  FrameBounds image_bounds;
  bool bounds_bracketed = false;
  RedundancyRange original;
  RedundancyRange image;
  bool redundancy_sandwich = false;  // R(W)/k^2 <= R(UW) <= R(W) k^2 for both ends
};

template <FieldScalar Scalar>
TransformReport transform_report(const FusionFrame<Scalar>& frame, const FusionFrame<Scalar>& image,
                                 const Mat<Scalar>& op) {
  const Tolerance& tol = frame.tolerance();
  TransformReport r;
  r.condition = condition_number(op, tol);
  const double k2 = r.condition * r.condition;
  const FrameBounds b = frame_bounds(frame);
  r.predicted = {b.lower / k2, b.upper * k2};
  r.image_bounds = frame_bounds(image);
  r.bounds_bracketed = r.image_bounds.lower >= r.predicted.lower * (1.0 - tol.eig_rel) &&
                       r.image_bounds.upper <= r.predicted.upper * (1.0 + tol.eig_rel);
  r.original = redundancy_range(frame);
  r.image = redundancy_range(image);
  auto within = [&](double value, double reference) {
    return value >= reference / k2 * (1.0 - tol.eig_rel) && value <= reference * k2 * (1.0 + tol.eig_rel);
  };
  r.redundancy_sandwich = within(r.image.lower, r.original.lower) && within(r.image.upper, r.original.upper);
  return r;
}

// ---------------------------------------------------------------------------
// Redundancy equivalence

struct EquivalenceReport {
  bool equivalent = false;
  double operator_gap = 0.0;  // max |S_1a - S_1b| entrywise
  double sampled_gap = 0.0;   // max |R_a(x) - R_b(x)| over the samples
};

/// R_a = R_b on the sphere iff S_1a = S_1b; decided on the operators. The
/// sampled gap is reported for reference.
template <FieldScalar Scalar>
EquivalenceReport redundancy_equivalent(const FusionFrame<Scalar>& a, const FusionFrame<Scalar>& b,
                                        std::size_t samples, Rng& rng) {
  if (a.ambient_dim() != b.ambient_dim()) throw Error(ErrorCode::DimensionMismatch, "frames live in different spaces");
  EquivalenceReport r;
  r.operator_gap = max_abs_diff(a.normalized_operator(), b.normalized_operator());
  r.equivalent = r.operator_gap <= a.tolerance().eig_rel;
  for (std::size_t s = 0; s < samples; ++s) {
    const Vec<Scalar> x = random_unit_vector<Scalar>(a.ambient_dim(), rng);
    r.sampled_gap = std::max(r.sampled_gap, std::abs(redundancy_at(a, x) - redundancy_at(b, x)));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Projection decompositions of positive operators

struct ProjectionDecompositionCheck {
  bool projections_valid = false;  // each P is Hermitian, idempotent, rank m
  double sum_gap = 0.0;            // max |T - sum P|
  bool sum_matches = false;
  bool trace_matches = false;      // tr T = m N
  bool valid = false;
};

/// Confirms a user-supplied decomposition T = sum of N rank-m projections,
/// i.e. that T is the normalized operator of an m-equidimensional fusion frame.
template <FieldScalar Scalar>
ProjectionDecompositionCheck verify_projection_decomposition(const Mat<Scalar>& target,
                                                             const std::vector<Mat<Scalar>>& projections,
                                                             std::size_t m, double tol = 1e-10) {
  if (target.rows() != target.cols()) throw Error(ErrorCode::NotSquare, "operator must be square");
  ProjectionDecompositionCheck c;
  c.projections_valid = !projections.empty();
  Mat<Scalar> sum = Mat<Scalar>::Zero(target.rows(), target.cols());
  for (const auto& p : projections) {
    if (p.rows() != target.rows() || p.cols() != target.cols())
      throw Error(ErrorCode::DimensionMismatch, "projection has the wrong shape");
    const bool hermitian = max_abs_diff<Scalar>(p, p.adjoint()) <= tol;
    const bool idempotent = max_abs_diff<Scalar>(p * p, p) <= tol;
    const bool rank_m = std::abs(std::real(p.trace()) - static_cast<double>(m)) <= tol * std::max<double>(1.0, m);
    c.projections_valid = c.projections_valid && hermitian && idempotent && rank_m;
    sum += p;
  }
  c.sum_gap = max_abs_diff(target, sum);
  c.sum_matches = c.sum_gap <= tol;
  const double expected = static_cast<double>(m * projections.size());
  c.trace_matches = std::abs(std::real(target.trace()) - expected) <= tol * std::max(1.0, expected);
  c.valid = c.projections_valid && c.sum_matches && c.trace_matches;
  return c;
}

}  // namespace ffk
