#include <gtest/gtest.h>

#include <functional>

#include "support/examples.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace ffk;

namespace {

template <typename T>
class DualityTyped : public ::testing::Test {};
using Fields = ::testing::Types<double, Complex>;
TYPED_TEST_SUITE(DualityTyped, Fields);

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::IoError;
}

/// V_i = S^-1 W_i + (random extra directions), weights copied from the frame.
/// Because P_{V_i} S^-1 P_{W_i} = S^-1 P_{W_i}, the reconstruction identity
/// reduces to S^-1 sum v_i^2 P_{W_i} = I.
template <FieldScalar S>
FusionFrame<S> enlarged_dual(const FusionFrame<S>& frame, Rng& rng) {
  std::vector<WeightedSpan<S>> spans;
  const auto n = frame.ambient_dim();
  for (const auto& m : frame.members()) {
    const Mat<S> core = solve_hermitian_positive(frame.frame_operator(), m.subspace.basis());
    const auto extra = static_cast<Eigen::Index>(gen::uniform_index(rng, 0, static_cast<std::size_t>(n - core.cols())));
    Mat<S> v(n, core.cols() + extra);
    v << core, gaussian_matrix<S>(n, extra, rng);
    spans.push_back({v, m.weight});
  }
  return build_fusion_frame(spans, n);
}

}  // namespace

TYPED_TEST(DualityTyped, TightFramesAreTheirOwnCanonicalDual) {
  Rng rng(1);
  for (int t = 0; t < 20; ++t) {
    const auto f = gen::random_tight_fusion_frame<TypeParam>(static_cast<Eigen::Index>(gen::uniform_index(rng, 1, 8)),
                                                            gen::uniform_index(rng, 1, 3), rng);
    EXPECT_TRUE(same_members(canonical_dual_fusion(f), f));
  }
  const auto w = ex::two_tight<TypeParam>();
  EXPECT_TRUE(same_members(canonical_dual_fusion(w), w));
}

TEST(CanonicalDual, OrthonormalFusionBasisIsItself) {
  const auto f = ex::coordinate_lines(4);
  const auto d = canonical_dual_fusion(f);
  EXPECT_TRUE(same_members(d, f));
  EXPECT_TRUE(classify(d).orthonormal_fusion_basis);
}

TYPED_TEST(DualityTyped, CanonicalDualIsAFrameWithinPredictedBounds) {
  Rng rng(2);
  for (int t = 0; t < 50; ++t) {
    const auto f = gen::random_fusion_frame<TypeParam>(rng).frame;
    const auto d = canonical_dual_fusion(f);
    EXPECT_TRUE(d.is_frame());
    EXPECT_GT(d.spectrum().min, 0.0);
    const CanonicalDualBracket b = canonical_dual_bracket(f, d);
    EXPECT_TRUE(b.bracketed);
    // Dual subspaces are S^-1 W_i: compare with the normal-equation oracle.
    for (std::size_t i = 0; i < f.size(); ++i) {
      const Mat<TypeParam> mapped = f.frame_operator().fullPivLu().solve(f.member(i).subspace.basis());
      EXPECT_LE(max_abs_diff(d.member(i).subspace.projection(), oracle::projection(mapped)), 1e-8);
    }
  }
}

TYPED_TEST(DualityTyped, CanonicalDualSatisfiesReconstruction) {
  // P_{S^-1 W_i} S^-1 P_{W_i} = S^-1 P_{W_i}, so the identity sums to S^-1 S = I.
  Rng rng(3);
  for (int t = 0; t < 50; ++t) {
    const auto f = gen::random_fusion_frame<TypeParam>(rng).frame;
    const DualCertificate c = verify_alternate_dual(f, canonical_dual_fusion(f));
    EXPECT_TRUE(c.is_dual) << c.residual;
    EXPECT_LE(c.residual, 1e-8);
  }
}

TEST(CanonicalRatio, OrthonormalFusionBasis) {
  Rng rng(4);
  const RatioBoundCheck c = canonical_ratio_bounds(ex::coordinate_lines(5), 200, rng);
  EXPECT_DOUBLE_EQ(c.lower, 1.0);
  EXPECT_DOUBLE_EQ(c.upper, 1.0);
  EXPECT_NEAR(c.observed_min, 1.0, 1e-12);
  EXPECT_NEAR(c.observed_max, 1.0, 1e-12);
  EXPECT_TRUE(c.holds);
}

TEST(CanonicalRatio, TightFramesGiveRatioOneOutsideTheStatedBracket) {
  // With S = A I and unit weights, R_W = R_{S^-1 W} pointwise, so the ratio is
  // identically 1 while the stated bracket is [A^2, A^2]. For A != 1 every
  // sample is outside it.
  Rng rng(5);
  for (std::size_t k : {1u, 2u, 3u}) {
    const auto f = gen::random_tight_fusion_frame<Complex>(4, k, rng);
    const RatioBoundCheck c = canonical_ratio_bounds(f, 200, rng);
    const double a = static_cast<double>(k);
    EXPECT_NEAR(c.lower, a * a, 1e-9);
    EXPECT_NEAR(c.upper, a * a, 1e-9);
    EXPECT_NEAR(c.observed_min, 1.0, 1e-10);
    EXPECT_NEAR(c.observed_max, 1.0, 1e-10);
    EXPECT_EQ(c.holds, k == 1);
    if (k > 1) {
      EXPECT_EQ(code_of([&] { canonical_ratio_bounds(f, 200, rng, true); }), ErrorCode::RatioBoundViolated);
    }
  }
}

TYPED_TEST(DualityTyped, CanonicalRatioOnRandomNormalizedFrames) {
  // Observed ratios are reported against [A^3/B, B^3/A]; the count of frames
  // with violations is logged rather than asserted.
  Rng rng(6);
  int with_violations = 0;
  for (int t = 0; t < 50; ++t) {
    const auto f = normalized_version(gen::random_fusion_frame<TypeParam>(rng).frame);
    const RatioBoundCheck c = canonical_ratio_bounds(f, 1000, rng);
    EXPECT_EQ(c.samples, 1000u);
    EXPECT_LE(c.observed_min, c.observed_max);
    EXPECT_GT(c.observed_min, 0.0);
    // Both redundancies lie in [R-, R+], which bounds the ratio.
    const RedundancyRange r = redundancy_range(f);
    const RedundancyRange rd = redundancy_range(canonical_dual_fusion(f));
    EXPECT_GE(c.observed_min, r.lower / rd.upper * (1 - 1e-9));
    EXPECT_LE(c.observed_max, r.upper / rd.lower * (1 + 1e-9));
    with_violations += !c.holds;
  }
  this->RecordProperty("frames_with_ratio_violations", with_violations);
}

TEST(CanonicalRatio, RequiresUnitWeights) {
  Rng rng(7);
  EXPECT_EQ(code_of([&] { canonical_ratio_bounds(ex::two_tight(), 10, rng); }), ErrorCode::NotUniformWeights);
}

TEST(VerifyDual, ParsevalUnitWeightFrameIsSelfDual) {
  Rng rng(8);
  const auto f = gen::random_orthogonal_decomposition<Complex>(6, rng, true);
  const DualCertificate c = verify_alternate_dual(f, f);
  EXPECT_TRUE(c.is_dual);
  EXPECT_NEAR(c.bessel_bound, 1.0, 1e-12);
}

TYPED_TEST(DualityTyped, ComplementedSubspaceBreaksDuality) {
  Rng rng(9);
  for (int t = 0; t < 20; ++t) {
    const auto f = gen::random_fusion_frame<TypeParam>(rng).frame;
    const auto n = f.ambient_dim();
    if (f.member(0).subspace.dim() == n) continue;
    const auto d = canonical_dual_fusion(f);
    std::vector<Member<TypeParam>> members = d.members();
    const Mat<TypeParam> p = members[0].subspace.projection();
    const Mat<TypeParam> comp = Mat<TypeParam>(Mat<TypeParam>::Identity(n, n) - p) * gaussian_matrix<TypeParam>(n, n, rng);
    members[0].subspace = Subspace<TypeParam>::span(comp);
    const FusionFrame<TypeParam> bad(n, members);
    EXPECT_FALSE(verify_alternate_dual(f, bad).is_dual);
  }
}

TYPED_TEST(DualityTyped, EnlargedSubspacesGiveAlternateDuals) {
  Rng rng(10);
  for (int t = 0; t < 50; ++t) {
    const auto f = gen::random_fusion_frame<TypeParam>(rng).frame;
    const auto v = enlarged_dual(f, rng);
    const DualCertificate c = verify_alternate_dual(f, v);
    EXPECT_TRUE(c.is_dual) << c.residual;
    // Reconstruction on random vectors, summed explicitly.
    const Vec<TypeParam> x = gaussian_matrix<TypeParam>(f.ambient_dim(), 1, rng);
    Vec<TypeParam> y = Vec<TypeParam>::Zero(f.ambient_dim());
    for (std::size_t i = 0; i < f.size(); ++i) {
      const Vec<TypeParam> pw = f.member(i).subspace.project(x);
      const Vec<TypeParam> s_inv = f.frame_operator().fullPivLu().solve(pw);
      y += f.weight(i) * v.weight(i) * v.member(i).subspace.project(s_inv);
    }
    EXPECT_LE((x - y).norm(), 1e-8 * std::max(1.0, x.norm()));
  }
}

TYPED_TEST(DualityTyped, AlternateDualLowerBound) {
  Rng rng(11);
  for (int t = 0; t < 50; ++t) {
    const auto f = gen::random_fusion_frame<TypeParam>(rng).frame;
    const auto v = enlarged_dual(f, rng);
    const AlternateDualBounds b = alternate_dual_bounds(f, v, 100, rng);
    const FrameBounds fb = frame_bounds(f);
    EXPECT_NEAR(b.lower, fb.lower * fb.lower / fb.upper, 1e-12 * b.lower);
    EXPECT_GE(b.observed.min, b.lower - 1e-9);
    EXPECT_TRUE(b.bounds_hold);
    EXPECT_FALSE(b.ratio.has_value());  // weights are not all 1
  }
}

TEST(AlternateDualBounds, ParsevalSelfDual) {
  Rng rng(12);
  const auto f = gen::random_orthogonal_decomposition<Complex>(5, rng, true);
  const AlternateDualBounds b = alternate_dual_bounds(f, f, 200, rng);
  EXPECT_NEAR(b.lower, 1.0, 1e-12);
  EXPECT_NEAR(b.upper, 1.0, 1e-12);
  EXPECT_TRUE(b.bounds_hold);
  ASSERT_TRUE(b.ratio.has_value());
  EXPECT_TRUE(b.ratio->holds);
}

TEST(AlternateDualBounds, TwoTightUnitWeightsRatioObservation) {
  // A = 2, V = W: the dual's operator bounds hold, but R_V / R_W = 1 sits
  // below the stated lower ratio 1/||S^-1||^2 = 4.
  Rng rng(13);
  const auto f = gen::random_tight_fusion_frame<Complex>(4, 2, rng);
  const auto d = canonical_dual_fusion(f);
  const AlternateDualBounds b = alternate_dual_bounds(f, d, 200, rng);
  EXPECT_TRUE(b.bounds_hold);
  ASSERT_TRUE(b.ratio.has_value());
  EXPECT_NEAR(b.ratio->lower, 4.0, 1e-9);
  EXPECT_NEAR(b.ratio->observed_min, 1.0, 1e-10);
  EXPECT_FALSE(b.ratio->holds);
  EXPECT_EQ(code_of([&] { alternate_dual_bounds(f, d, 200, rng, true); }), ErrorCode::RatioBoundViolated);
}

TEST(AlternateDualBounds, RejectsNonDuals) {
  Rng rng(14);
  const auto f = ex::two_tight();
  EXPECT_EQ(code_of([&] { alternate_dual_bounds(f, scale_weights(f, 2.0), 10, rng); }), ErrorCode::NotADual);
}

TEST(VerifyDual, ShapeMismatches) {
  const auto f = ex::two_tight();
  EXPECT_EQ(code_of([&] { verify_alternate_dual(f, ex::coordinate_lines(5)); }), ErrorCode::MemberCountMismatch);
  EXPECT_EQ(code_of([&] { verify_alternate_dual(f, ex::coordinate_lines(4)); }), ErrorCode::DimensionMismatch);
  const auto bessel = build_fusion_frame<Complex>({{ex::coords<Complex>(5, {0}), 1.0}}, 5);
  EXPECT_EQ(code_of([&] { canonical_dual_fusion(bessel); }), ErrorCode::NotAFusionFrame);
}
