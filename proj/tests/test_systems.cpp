#include <gtest/gtest.h>

#include <functional>

#include "support/examples.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace ffk;

namespace {

template <typename T>
class SystemsTyped : public ::testing::Test {};
using Fields = ::testing::Types<double, Complex>;
TYPED_TEST_SUITE(SystemsTyped, Fields);

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::IoError;
}

template <FieldScalar S>
std::vector<Mat<S>> orthonormal_locals(const FusionFrame<S>& f) {
  std::vector<Mat<S>> out;
  for (const auto& m : f.members()) out.push_back(m.subspace.basis());
  return out;
}

template <FieldScalar S>
std::vector<Mat<S>> parseval_locals(const FusionFrame<S>& f, Rng& rng) {
  std::vector<Mat<S>> out;
  for (const auto& m : f.members()) {
    const auto d = m.subspace.dim();
    out.push_back(gen::parseval_local_frame<S>(m.subspace.basis(), d + static_cast<Eigen::Index>(gen::uniform_index(rng, 0, 3)), rng));
  }
  return out;
}

template <FieldScalar S>
std::vector<Mat<S>> orthogonal_locals(const FusionFrame<S>& f, Rng& rng) {
  std::vector<Mat<S>> out;
  for (const auto& m : f.members()) out.push_back(gen::orthogonal_local_frame<S>(m.subspace.basis(), rng));
  return out;
}

/// The defining coordinate vectors of the four-subspace example.
std::vector<Mat<Complex>> two_tight_locals() {
  std::vector<Mat<Complex>> out;
  for (const auto& s : ex::two_tight_spans()) out.push_back(s.vectors);
  return out;
}

}  // namespace

TEST(System, CoordinateLocalFramesAreValid) {
  const auto sys = build_system(ex::two_tight(), two_tight_locals());
  EXPECT_EQ(sys.local_frames().size(), 4u);
  EXPECT_EQ(sys.local_frame(0).size(), 3);
  EXPECT_EQ(sys.local_frame(2).size(), 2);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_TRUE(local_parseval(sys, i));
}

TEST(System, RejectsVectorsOutsideTheirSubspace) {
  auto locals = orthonormal_locals(ex::coordinate_lines(3));
  locals[1] = ex::coords<Complex>(3, {2});
  try {
    build_system(ex::coordinate_lines(3), locals);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::VectorOutsideSubspace);
    EXPECT_EQ(e.member(), std::optional<std::size_t>(1));
  }
}

TEST(System, RejectsLocalFamiliesThatDoNotSpan) {
  auto locals = two_tight_locals();
  locals[0] = ex::coords<Complex>(5, {0, 1});  // two of three directions
  EXPECT_EQ(code_of([&] { build_system(ex::two_tight(), locals); }), ErrorCode::LocalNotAFrame);
  locals[0] = Mat<Complex>::Zero(5, 3);
  EXPECT_EQ(code_of([&] { build_system(ex::two_tight(), locals); }), ErrorCode::LocalNotAFrame);
}

TEST(System, ShapeErrors) {
  auto locals = two_tight_locals();
  locals.pop_back();
  EXPECT_EQ(code_of([&] { build_system(ex::two_tight(), locals); }), ErrorCode::MemberCountMismatch);
  locals = two_tight_locals();
  locals[3] = Mat<Complex>::Zero(4, 2);
  EXPECT_EQ(code_of([&] { build_system(ex::two_tight(), locals); }), ErrorCode::DimensionMismatch);
}

TYPED_TEST(SystemsTyped, OrthogonalLocalsAreAdditive) {
  Rng rng(1);
  for (int t = 0; t < 50; ++t) {
    const auto f = gen::random_fusion_frame<TypeParam>(rng).frame;
    for (const auto& locals : {orthonormal_locals(f), orthogonal_locals(f, rng)}) {
      const auto sys = build_system(f, locals);
      for (int s = 0; s < 10; ++s) {
        const Vec<TypeParam> x = random_unit_vector<TypeParam>(f.ambient_dim(), rng);
        const LocalAdditivity a = check_local_additivity(sys, x);
        EXPECT_TRUE(a.orthogonal_locals);
        EXPECT_TRUE(a.equal) << a.fusion_value << " vs " << a.local_sum;
        // Direct sum of squared projections onto each line.
        double direct = 0.0;
        for (const auto& l : locals)
          for (Eigen::Index j = 0; j < l.cols(); ++j) direct += std::norm(l.col(j).normalized().dot(x));
        EXPECT_NEAR(a.local_sum, direct, 1e-10);
      }
    }
  }
}

TEST(LocalAdditivity, NonOrthogonalLocalsDiffer) {
  // Three generic vectors in a 3-dimensional member: the line projections do
  // not sum to the member's projection.
  Rng rng(2);
  auto locals = two_tight_locals();
  locals[0] = ex::coords<Complex>(5, {0, 1, 2}) * gaussian_matrix<Complex>(3, 3, rng);
  const auto sys = build_system(ex::two_tight(), locals);
  int unequal = 0;
  for (int s = 0; s < 20; ++s) {
    const LocalAdditivity a = check_local_additivity(sys, random_unit_vector<Complex>(5, rng));
    EXPECT_FALSE(a.orthogonal_locals);
    unequal += !a.equal;
  }
  EXPECT_EQ(unequal, 20);
}

TEST(ParsevalEquivalence, OrthonormalBasisOfLines) {
  const auto sys = build_system(ex::coordinate_lines(4), orthonormal_locals(ex::coordinate_lines(4)));
  const ParsevalEquivalence p = parseval_equivalences(sys);
  EXPECT_TRUE(p.global_parseval);
  EXPECT_TRUE(p.orthonormal_parseval);
  EXPECT_TRUE(p.fusion_parseval);
  EXPECT_TRUE(p.consistent);
}

TEST(ParsevalEquivalence, TwoTightExampleIsNotParseval) {
  const auto sys = build_system(ex::two_tight(), two_tight_locals());
  EXPECT_LE(max_abs_diff<Complex>(flattened_orthonormal_operator(sys.frame()), 2.0 * Mat<Complex>::Identity(5, 5)),
            1e-12);
  const ParsevalEquivalence p = parseval_equivalences(sys);
  EXPECT_FALSE(p.global_parseval);
  EXPECT_FALSE(p.orthonormal_parseval);
  EXPECT_FALSE(p.fusion_parseval);
  EXPECT_TRUE(p.consistent);
  EXPECT_TRUE(classify(sys.frame()).tight);
  // Rescaling the weights by 1/sqrt 2 makes all three Parseval.
  const auto half = build_system(scale_weights(ex::two_tight(), 1.0 / std::sqrt(2.0)), two_tight_locals());
  const ParsevalEquivalence q = parseval_equivalences(half);
  EXPECT_TRUE(q.global_parseval && q.orthonormal_parseval && q.fusion_parseval);
}

TYPED_TEST(SystemsTyped, ParsevalEquivalencesAgree) {
  Rng rng(3);
  for (int t = 0; t < 30; ++t) {
    const auto n = static_cast<Eigen::Index>(gen::uniform_index(rng, 1, 8));
    const auto pf = gen::random_parseval_fusion_frame<TypeParam>(n, gen::uniform_index(rng, 1, 3), rng);
    const ParsevalEquivalence p = parseval_equivalences(build_system(pf, parseval_locals(pf, rng)));
    EXPECT_TRUE(p.global_parseval && p.orthonormal_parseval && p.fusion_parseval);

    const auto f = gen::random_fusion_frame<TypeParam>(rng).frame;
    const ParsevalEquivalence q = parseval_equivalences(build_system(f, parseval_locals(f, rng)));
    EXPECT_TRUE(q.consistent);
    EXPECT_EQ(q.fusion_parseval, classify(f).parseval);
  }
}

TYPED_TEST(SystemsTyped, FlattenedOperatorsEqualTheFusionOperator) {
  Rng rng(4);
  for (int t = 0; t < 50; ++t) {
    const auto f = gen::random_fusion_frame<TypeParam>(rng).frame;
    EXPECT_LE(max_abs_diff(flattened_orthonormal_operator(f), f.frame_operator()), 1e-10);
    const auto sys = build_system(f, parseval_locals(f, rng));
    const Mat<TypeParam> flat = flattened_vectors(sys);
    EXPECT_LE(max_abs_diff<TypeParam>(flat * flat.adjoint(), f.frame_operator()), 1e-10);
  }
}

TEST(ParsevalEquivalence, RequiresParsevalLocals) {
  Rng rng(5);
  const auto f = ex::two_tight();
  try {
    parseval_equivalences(build_system(f, orthogonal_locals(f, rng)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::LocalNotParseval);
    EXPECT_TRUE(e.member().has_value());
  }
}

TEST(RedundancyOne, OrthonormalBasis) {
  const auto sys = build_system(ex::coordinate_lines(5), orthonormal_locals(ex::coordinate_lines(5)));
  const RedundancyOneEquivalence r = redundancy_one_equivalence(sys);
  EXPECT_TRUE(r.flat_parseval);
  EXPECT_TRUE(r.fusion_redundancy_one);
  EXPECT_TRUE(r.consistent);
}

TEST(RedundancyOne, RepeatedLineIsNeither) {
  const auto f = ex::repeated_line(4);
  const RedundancyOneEquivalence r = redundancy_one_equivalence(build_system(f, orthonormal_locals(f)));
  EXPECT_FALSE(r.flat_parseval);
  EXPECT_FALSE(r.fusion_redundancy_one);
  EXPECT_TRUE(r.consistent);
}

TYPED_TEST(SystemsTyped, OrthogonalDirectSumsHaveRedundancyOne) {
  Rng rng(6);
  for (int t = 0; t < 30; ++t) {
    const auto f = gen::random_orthogonal_decomposition<TypeParam>(
        static_cast<Eigen::Index>(gen::uniform_index(rng, 1, 10)), rng, true);
    const RedundancyOneEquivalence r = redundancy_one_equivalence(build_system(f, parseval_locals(f, rng)));
    EXPECT_TRUE(r.flat_parseval);
    EXPECT_TRUE(r.fusion_redundancy_one);
  }
  for (int t = 0; t < 30; ++t) {
    const auto f = normalized_version(gen::random_fusion_frame<TypeParam>(rng).frame);
    const RedundancyOneEquivalence r = redundancy_one_equivalence(build_system(f, parseval_locals(f, rng)));
    EXPECT_TRUE(r.consistent);
  }
}

TEST(RedundancyOne, RequiresUnitWeights) {
  EXPECT_EQ(code_of([] { redundancy_one_equivalence(build_system(ex::two_tight(), two_tight_locals())); }),
            ErrorCode::NotUniformWeights);
}

TEST(System, OrthogonalityDetection) {
  const auto yes = VectorFrame<Complex>::sequence(ex::coords<Complex>(3, {0, 1}) * 2.0);
  EXPECT_TRUE(has_orthogonal_elements(yes));
  Mat<Complex> m = ex::coords<Complex>(3, {0, 1});
  m(0, 1) = 1e-3;
  EXPECT_FALSE(has_orthogonal_elements(VectorFrame<Complex>::sequence(m)));
}
